#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "orthcert/linalg.hpp"

namespace orthcert {

/// Split algebras store d x d matrices; quaternion elements are 1 x 4 coordinate rows
/// (x0, x1, x2, x3) on the basis 1, i, j, k.
using AlgElem = Matrix;

enum class AlgShape { Split, Quaternion };

/// M_d(R) with the involution adjoint to a symmetric unimodular Gram matrix, or a quaternion
/// algebra (a, b / F) with the involution x -> u * conj(x) * u^-1.
class AlgebraDesc {
 public:
  /// Throws InvalidParameter unless gram is symmetric with unit determinant and 2 is invertible.
  static AlgebraDesc split(RingDesc base, Matrix gram);
  /// i^2 = a, j^2 = b, ij = -ji = k. The pivot must be pure or scalar with unit reduced norm;
  /// only a pure pivot yields an orthogonal involution (see check_orthogonal).
  static AlgebraDesc quaternion(RingDesc base, RingElem a, RingElem b, std::array<RingElem, 4> pivot);

  AlgShape shape() const { return shape_; }
  const RingDesc& base() const { return base_; }
  /// Degree: d for M_d(R), 2 for quaternions.
  std::size_t degree() const;
  /// Rank as an R-module: d^2 or 4.
  std::size_t dimension() const;

  const Matrix& gram() const { return gram_; }
  const Matrix& gram_inverse() const { return gram_inv_; }
  const RingElem& qa() const { return a_; }
  const RingElem& qb() const { return b_; }
  const AlgElem& pivot() const { return pivot_; }

  AlgElem zero() const;
  AlgElem one() const;
  AlgElem scalar(const RingElem& c) const;
  /// Coordinates on the standard basis (row-major matrix units, or 1, i, j, k).
  std::vector<RingElem> coords(const AlgElem& x) const { return x.entries(); }
  AlgElem from_coords(std::vector<RingElem> c) const;
  AlgElem basis(std::size_t i) const;

  AlgElem add(const AlgElem& x, const AlgElem& y) const;
  AlgElem sub(const AlgElem& x, const AlgElem& y) const;
  AlgElem neg(const AlgElem& x) const;
  AlgElem mul(const AlgElem& x, const AlgElem& y) const;
  AlgElem scale(const RingElem& c, const AlgElem& x) const;
  AlgElem pow(const AlgElem& x, unsigned e) const;
  std::optional<AlgElem> inverse(const AlgElem& x) const;
  AlgElem random(std::mt19937_64& rng) const;
  /// Throws DomainError when x has the wrong shape for this algebra.
  void check_member(const AlgElem& x) const;

  std::string describe() const;

 private:
  explicit AlgebraDesc(RingDesc base) : base_(std::move(base)) {}

  AlgShape shape_ = AlgShape::Split;
  RingDesc base_;
  std::size_t d_ = 0;
  Matrix gram_, gram_inv_;
  RingElem a_, b_;
  AlgElem pivot_, pivot_inv_;
  friend AlgElem involution(const AlgebraDesc& A, const AlgElem& x);
};

/// Random symmetric d x d matrix with unit determinant (rejection sampling; throws
/// InvalidParameter after 1000 failed draws).
Matrix random_unimodular_gram(const RingDesc& R, std::size_t d, std::mt19937_64& rng);

/// Quaternion conjugation x0 - x1 i - x2 j - x3 k.
AlgElem quaternion_conjugate(const AlgebraDesc& A, const AlgElem& x);

AlgElem involution(const AlgebraDesc& A, const AlgElem& x);

RingElem reduced_norm(const AlgebraDesc& A, const AlgElem& x);
RingElem reduced_trace(const AlgebraDesc& A, const AlgElem& x);
Poly reduced_charpoly(const AlgebraDesc& A, const AlgElem& x);

struct ResidueOrthogonality {
  std::string label;
  std::size_t symmetric_dim = 0;
  std::size_t expected = 0;
  bool orthogonal = false;
};

struct OrthogonalityReport {
  bool orthogonal = false;
  std::vector<ResidueOrthogonality> residues;
  std::string first_failure;  // empty when orthogonal
};

/// Dimension of the fixed space of the involution at every residue field (d(d+1)/2 expected).
OrthogonalityReport check_orthogonal(const AlgebraDesc& A);

/// Reduction of a split algebra over a finite ring to its residue algebras.
class QuotientCtx {
 public:
  explicit QuotientCtx(AlgebraDesc source);

  const AlgebraDesc& source() const { return source_; }
  const ResidueSplit& split() const { return split_; }
  const std::vector<AlgebraDesc>& residues() const { return residues_; }
  std::size_t count() const { return residues_.size(); }

  AlgElem reduce(std::size_t i, const AlgElem& x) const;
  std::vector<AlgElem> reduce_all(const AlgElem& x) const;
  /// Entrywise CRT preimage of per-residue elements.
  AlgElem lift(const std::vector<AlgElem>& parts) const;

 private:
  AlgebraDesc source_;
  ResidueSplit split_;
  std::vector<AlgebraDesc> residues_;
};

/// Throws DomainError for quaternion or infinite bases; verifies the reduction commutes with
/// the involutions on the standard basis.
QuotientCtx quotient_ctx(const AlgebraDesc& A);

/// True when every entry of x lies in the Jacobson radical (x reduces to 0 everywhere).
bool residually_zero(const AlgebraDesc& A, const AlgElem& x);

/// Symmetric s with s^2 = 1 + eps for symmetric, residually zero eps, by the binomial series
/// for (1 + eps)^(1/2) truncated at the nilpotency index.
AlgElem sqrt_one_plus_nilpotent(const AlgebraDesc& A, const AlgElem& eps);

}  // namespace orthcert
