#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "orthcert/rings.hpp"

namespace orthcert {

/// Dense row-major matrix of canonical ring elements. The ring is passed to every operation.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, std::vector<RingElem> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  RingElem& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const RingElem& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  const std::vector<RingElem>& entries() const { return entries_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RingElem> entries_;
};

Matrix zeros(const RingDesc& R, std::size_t rows, std::size_t cols);
Matrix identity(const RingDesc& R, std::size_t d);
Matrix diagonal(const RingDesc& R, const std::vector<RingElem>& diag);
Matrix from_ints(const RingDesc& R, const std::vector<std::vector<std::int64_t>>& rows);
Matrix random_matrix(const RingDesc& R, std::size_t rows, std::size_t cols, std::mt19937_64& rng);

Matrix add(const RingDesc& R, const Matrix& a, const Matrix& b);
Matrix sub(const RingDesc& R, const Matrix& a, const Matrix& b);
Matrix neg(const RingDesc& R, const Matrix& a);
Matrix mul(const RingDesc& R, const Matrix& a, const Matrix& b);
Matrix scale(const RingDesc& R, const RingElem& c, const Matrix& a);
Matrix transpose(const Matrix& a);
/// Entrywise image under a ring map (reduction, CRT lift, ...).
template <class F>
Matrix map_entries(const Matrix& a, F&& f) {
  std::vector<RingElem> out;
  out.reserve(a.entries().size());
  for (const auto& x : a.entries()) out.push_back(f(x));
  return Matrix(a.rows(), a.cols(), std::move(out));
}
bool is_zero(const RingDesc& R, const Matrix& a);
bool is_symmetric(const Matrix& a);
RingElem trace(const RingDesc& R, const Matrix& a);

/// Polynomial with coefficients low degree first; no trailing zeros (zero polynomial is empty).
struct Poly {
  std::vector<RingElem> coeffs;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool operator==(const Poly&) const = default;
};

Poly make_poly(const RingDesc& R, std::vector<RingElem> coeffs);
Poly poly_from_ints(const RingDesc& R, const std::vector<std::int64_t>& coeffs);
Poly poly_add(const RingDesc& R, const Poly& f, const Poly& g);
Poly poly_sub(const RingDesc& R, const Poly& f, const Poly& g);
Poly poly_mul(const RingDesc& R, const Poly& f, const Poly& g);
Poly poly_scale(const RingDesc& R, const RingElem& c, const Poly& f);
Poly poly_pow(const RingDesc& R, const Poly& f, unsigned e);
RingElem poly_eval(const RingDesc& R, const Poly& f, const RingElem& x);
Matrix poly_eval(const RingDesc& R, const Poly& f, const Matrix& m);
/// (t + 1)(t - 1)^(d - 1).
Poly reflection_charpoly(const RingDesc& R, unsigned d);

struct LinearDivision {
  Poly quotient;
  RingElem remainder;
};
/// f = (t - c) q + r with r = f(c), by synthetic division.
LinearDivision poly_divide_linear(const RingDesc& R, const Poly& f, const RingElem& c);

/// det(tI - M), division free (Berkowitz), valid over rings with zero divisors.
Poly charpoly(const RingDesc& R, const Matrix& m);
RingElem det(const RingDesc& R, const Matrix& m);
/// Inverse via Cayley-Hamilton when det is a unit.
std::optional<Matrix> inverse(const RingDesc& R, const Matrix& m);

/// Rank over a field (Gaussian elimination).
std::size_t rank_over_field(const RingDesc& F, Matrix m);
/// Kernel dimension over a field.
std::size_t nullity_over_field(const RingDesc& F, const Matrix& m);
/// Rank of the reduction of M at the i-th maximal ideal of `split`.
std::size_t rank_at_residue(const ResidueSplit& split, const Matrix& m, std::size_t ideal);
Matrix reduce_at(const ResidueSplit& split, const Matrix& m, std::size_t ideal);
/// CRT-combines per-residue matrices into a preimage over the ring.
Matrix lift_from_residues(const ResidueSplit& split, const std::vector<Matrix>& residues);

}  // namespace orthcert
