#include "orthcert/linalg.hpp"

#include <utility>

#include "orthcert/errors.hpp"

namespace orthcert {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<RingElem> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols)
    throw InvalidParameter("matrix entry count " + std::to_string(entries_.size()) + " != " +
                           std::to_string(rows) + "x" + std::to_string(cols));
}

Matrix zeros(const RingDesc& R, std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, std::vector<RingElem>(rows * cols, R.zero()));
}

Matrix identity(const RingDesc& R, std::size_t d) {
  Matrix m = zeros(R, d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = R.one();
  return m;
}

Matrix diagonal(const RingDesc& R, const std::vector<RingElem>& diag) {
  Matrix m = zeros(R, diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix from_ints(const RingDesc& R, const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  std::vector<RingElem> e;
  for (const auto& row : rows) {
    if (row.size() != c) throw InvalidParameter("ragged matrix");
    for (auto v : row) e.push_back(R.from_int(v));
  }
  return Matrix(r, c, std::move(e));
}

Matrix random_matrix(const RingDesc& R, std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::vector<RingElem> e;
  e.reserve(rows * cols);
  for (std::size_t i = 0; i < rows * cols; ++i) e.push_back(R.random(rng));
  return Matrix(rows, cols, std::move(e));
}

namespace {
void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidParameter("matrix shape mismatch");
}
}  // namespace

Matrix add(const RingDesc& R, const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  std::vector<RingElem> e;
  e.reserve(a.entries().size());
  for (std::size_t i = 0; i < a.entries().size(); ++i) e.push_back(R.add(a.entries()[i], b.entries()[i]));
  return Matrix(a.rows(), a.cols(), std::move(e));
}

Matrix sub(const RingDesc& R, const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  std::vector<RingElem> e;
  e.reserve(a.entries().size());
  for (std::size_t i = 0; i < a.entries().size(); ++i) e.push_back(R.sub(a.entries()[i], b.entries()[i]));
  return Matrix(a.rows(), a.cols(), std::move(e));
}

Matrix neg(const RingDesc& R, const Matrix& a) {
  return map_entries(a, [&](const RingElem& x) { return R.neg(x); });
}

Matrix mul(const RingDesc& R, const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw InvalidParameter("matrix product shape mismatch");
  Matrix out = zeros(R, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const RingElem& aik = a(i, k);
      if (R.is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = R.add(out(i, j), R.mul(aik, b(k, j)));
    }
  return out;
}

Matrix scale(const RingDesc& R, const RingElem& c, const Matrix& a) {
  return map_entries(a, [&](const RingElem& x) { return R.mul(c, x); });
}

Matrix transpose(const Matrix& a) {
  std::vector<RingElem> e;
  e.reserve(a.entries().size());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) e.push_back(a(i, j));
  return Matrix(a.cols(), a.rows(), std::move(e));
}

bool is_zero(const RingDesc& R, const Matrix& a) {
  for (const auto& x : a.entries())
    if (!R.is_zero(x)) return false;
  return true;
}

bool is_symmetric(const Matrix& a) { return a.square() && a == transpose(a); }

RingElem trace(const RingDesc& R, const Matrix& a) {
  if (!a.square()) throw InvalidParameter("trace of a non-square matrix");
  RingElem t = R.zero();
  for (std::size_t i = 0; i < a.rows(); ++i) t = R.add(t, a(i, i));
  return t;
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

Poly make_poly(const RingDesc& R, std::vector<RingElem> coeffs) {
  while (!coeffs.empty() && R.is_zero(coeffs.back())) coeffs.pop_back();
  return Poly{std::move(coeffs)};
}

Poly poly_from_ints(const RingDesc& R, const std::vector<std::int64_t>& coeffs) {
  std::vector<RingElem> c;
  for (auto v : coeffs) c.push_back(R.from_int(v));
  return make_poly(R, std::move(c));
}

Poly poly_add(const RingDesc& R, const Poly& f, const Poly& g) {
  std::vector<RingElem> c(std::max(f.coeffs.size(), g.coeffs.size()), R.zero());
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) c[i] = f.coeffs[i];
  for (std::size_t i = 0; i < g.coeffs.size(); ++i) c[i] = R.add(c[i], g.coeffs[i]);
  return make_poly(R, std::move(c));
}

Poly poly_sub(const RingDesc& R, const Poly& f, const Poly& g) {
  std::vector<RingElem> c(std::max(f.coeffs.size(), g.coeffs.size()), R.zero());
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) c[i] = f.coeffs[i];
  for (std::size_t i = 0; i < g.coeffs.size(); ++i) c[i] = R.sub(c[i], g.coeffs[i]);
  return make_poly(R, std::move(c));
}

Poly poly_mul(const RingDesc& R, const Poly& f, const Poly& g) {
  if (f.coeffs.empty() || g.coeffs.empty()) return {};
  std::vector<RingElem> c(f.coeffs.size() + g.coeffs.size() - 1, R.zero());
  for (std::size_t i = 0; i < f.coeffs.size(); ++i)
    for (std::size_t j = 0; j < g.coeffs.size(); ++j) c[i + j] = R.add(c[i + j], R.mul(f.coeffs[i], g.coeffs[j]));
  return make_poly(R, std::move(c));
}

Poly poly_scale(const RingDesc& R, const RingElem& c, const Poly& f) {
  std::vector<RingElem> out;
  for (const auto& x : f.coeffs) out.push_back(R.mul(c, x));
  return make_poly(R, std::move(out));
}

Poly poly_pow(const RingDesc& R, const Poly& f, unsigned e) {
  Poly out = poly_from_ints(R, {1});
  for (unsigned i = 0; i < e; ++i) out = poly_mul(R, out, f);
  return out;
}

RingElem poly_eval(const RingDesc& R, const Poly& f, const RingElem& x) {
  RingElem acc = R.zero();
  for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) acc = R.add(R.mul(acc, x), *it);
  return acc;
}

Matrix poly_eval(const RingDesc& R, const Poly& f, const Matrix& m) {
  if (!m.square()) throw InvalidParameter("polynomial of a non-square matrix");
  Matrix acc = zeros(R, m.rows(), m.cols());
  for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it)
    acc = add(R, mul(R, acc, m), scale(R, *it, identity(R, m.rows())));
  return acc;
}

Poly reflection_charpoly(const RingDesc& R, unsigned d) {
  if (d == 0) throw InvalidParameter("degree must be positive");
  return poly_mul(R, poly_from_ints(R, {1, 1}), poly_pow(R, poly_from_ints(R, {-1, 1}), d - 1));
}

LinearDivision poly_divide_linear(const RingDesc& R, const Poly& f, const RingElem& c) {
  if (f.coeffs.empty()) return {Poly{}, R.zero()};
  const std::size_t n = f.coeffs.size();
  std::vector<RingElem> q(n - 1, R.zero());
  RingElem carry = f.coeffs[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    q[i] = carry;
    carry = R.add(f.coeffs[i], R.mul(carry, c));
  }
  return {make_poly(R, std::move(q)), carry};
}

// ---------------------------------------------------------------------------
// Berkowitz characteristic polynomial
// ---------------------------------------------------------------------------

Poly charpoly(const RingDesc& R, const Matrix& m) {
  if (!m.square()) throw InvalidParameter("characteristic polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  // Coefficients high degree first while iterating over leading principal submatrices.
  std::vector<RingElem> c{R.one()};
  for (std::size_t r = 0; r < n; ++r) {
    // Block [[S, col], [row, a]] with S the leading r x r submatrix.
    const RingElem& a = m(r, r);
    std::vector<RingElem> toeplitz{R.one(), R.neg(a)};
    std::vector<RingElem> v(r);  // S^k * col
    for (std::size_t i = 0; i < r; ++i) v[i] = m(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      RingElem dot = R.zero();
      for (std::size_t j = 0; j < r; ++j) dot = R.add(dot, R.mul(m(r, j), v[j]));
      toeplitz.push_back(R.neg(dot));
      if (k + 1 < r) {
        std::vector<RingElem> next(r, R.zero());
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j) next[i] = R.add(next[i], R.mul(m(i, j), v[j]));
        v = std::move(next);
      }
    }
    // new c (length r + 2) = T * c, T lower-triangular Toeplitz with first column `toeplitz`.
    std::vector<RingElem> next(r + 2, R.zero());
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j)
        next[i] = R.add(next[i], R.mul(toeplitz[i - j], c[j]));
    c = std::move(next);
  }
  return make_poly(R, std::vector<RingElem>(c.rbegin(), c.rend()));
}

RingElem det(const RingDesc& R, const Matrix& m) {
  const Poly p = charpoly(R, m);
  const RingElem c0 = p.coeffs.empty() ? R.zero() : p.coeffs[0];
  return m.rows() % 2 == 0 ? c0 : R.neg(c0);
}

std::optional<Matrix> inverse(const RingDesc& R, const Matrix& m) {
  const Poly p = charpoly(R, m);
  const std::size_t n = m.rows();
  // p(t) = t q(t) + c0, so M q(M) = -c0 I.
  const RingElem c0 = p.coeffs.empty() ? R.zero() : p.coeffs[0];
  const auto c0_inv = R.unit_inverse(c0);
  if (!c0_inv) return std::nullopt;
  std::vector<RingElem> qc(n, R.zero());
  for (std::size_t i = 1; i < p.coeffs.size(); ++i) qc[i - 1] = p.coeffs[i];
  const Matrix q = poly_eval(R, make_poly(R, std::move(qc)), m);
  return scale(R, R.neg(*c0_inv), q);
}

// ---------------------------------------------------------------------------
// Field elimination and residue ranks
// ---------------------------------------------------------------------------

std::size_t rank_over_field(const RingDesc& F, Matrix m) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && F.is_zero(m(pivot, col))) ++pivot;
    if (pivot == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(rank, j), m(pivot, j));
    const auto inv = F.unit_inverse(m(rank, col));
    if (!inv) throw DomainError("rank_over_field: " + F.to_string() + " is not a field");
    for (std::size_t i = rank + 1; i < m.rows(); ++i) {
      if (F.is_zero(m(i, col))) continue;
      const RingElem factor = F.mul(m(i, col), *inv);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) = F.sub(m(i, j), F.mul(factor, m(rank, j)));
    }
    ++rank;
  }
  return rank;
}

std::size_t nullity_over_field(const RingDesc& F, const Matrix& m) { return m.cols() - rank_over_field(F, m); }

Matrix reduce_at(const ResidueSplit& split, const Matrix& m, std::size_t ideal) {
  if (ideal >= split.count()) throw InvalidParameter("unknown maximal ideal index " + std::to_string(ideal));
  return map_entries(m, [&](const RingElem& x) { return split.project(ideal, x); });
}

std::size_t rank_at_residue(const ResidueSplit& split, const Matrix& m, std::size_t ideal) {
  return rank_over_field(split.residue_fields().at(ideal), reduce_at(split, m, ideal));
}

Matrix lift_from_residues(const ResidueSplit& split, const std::vector<Matrix>& residues) {
  if (residues.size() != split.count()) throw InvalidParameter("expected one matrix per maximal ideal");
  const std::size_t r = residues[0].rows(), c = residues[0].cols();
  std::vector<RingElem> e;
  e.reserve(r * c);
  for (std::size_t k = 0; k < r * c; ++k) {
    std::vector<RingElem> parts;
    for (const auto& m : residues) {
      if (m.rows() != r || m.cols() != c) throw InvalidParameter("residue matrix shape mismatch");
      parts.push_back(m.entries()[k]);
    }
    e.push_back(split.lift(parts));
  }
  return Matrix(r, c, std::move(e));
}

}  // namespace orthcert
