#include "orthcert/azumaya.hpp"

#include <functional>
#include <memory>
#include <sstream>

#include "orthcert/errors.hpp"

namespace orthcert {

namespace {

using Coords = std::vector<RingElem>;

// Quaternion product on the basis 1, i, j, k with i^2 = a, j^2 = b, ij = -ji = k.
Coords quat_mul(const RingDesc& F, const RingElem& a, const RingElem& b, const Coords& x, const Coords& y) {
  auto m = [&](const RingElem& p, const RingElem& q) { return F.mul(p, q); };
  const RingElem ab = F.mul(a, b);
  Coords z(4);
  z[0] = F.add(F.add(m(x[0], y[0]), m(a, m(x[1], y[1]))), F.sub(m(b, m(x[2], y[2])), m(ab, m(x[3], y[3]))));
  z[1] = F.add(F.add(m(x[0], y[1]), m(x[1], y[0])), m(b, F.sub(m(x[3], y[2]), m(x[2], y[3]))));
  z[2] = F.add(F.add(m(x[0], y[2]), m(x[2], y[0])), m(a, F.sub(m(x[1], y[3]), m(x[3], y[1]))));
  z[3] = F.add(F.add(m(x[0], y[3]), m(x[3], y[0])), F.sub(m(x[1], y[2]), m(x[2], y[1])));
  return z;
}

RingElem quat_norm(const RingDesc& F, const RingElem& a, const RingElem& b, const Coords& x) {
  const RingElem ab = F.mul(a, b);
  RingElem n = F.mul(x[0], x[0]);
  n = F.sub(n, F.mul(a, F.mul(x[1], x[1])));
  n = F.sub(n, F.mul(b, F.mul(x[2], x[2])));
  return F.add(n, F.mul(ab, F.mul(x[3], x[3])));
}

// Residue fields for the orthogonality check: the ring itself when it is a field.
struct Residue {
  std::string label;
  RingDesc field;
  std::function<RingElem(const RingElem&)> project;
};

std::vector<Residue> residues_of(const RingDesc& R) {
  if (R.kind() == RingKind::Rationals) return {{"(0)", R, [](const RingElem& x) { return x; }}};
  if (!R.is_finite()) throw DomainError("no residue fields for " + R.to_string());
  auto split = std::make_shared<ResidueSplit>(residue_split(R));
  std::vector<Residue> out;
  for (std::size_t i = 0; i < split->count(); ++i)
    out.push_back({split->ideals()[i].label, split->residue_fields()[i],
                   [split, i](const RingElem& x) { return split->project(i, x); }});
  return out;
}

}  // namespace

AlgebraDesc AlgebraDesc::split(RingDesc base, Matrix gram) {
  if (!base.two_invertible()) throw InvalidParameter("2 is not invertible in " + base.to_string());
  if (!gram.square() || gram.rows() == 0) throw InvalidParameter("gram must be a nonempty square matrix");
  for (const auto& x : gram.entries()) base.validate(x);
  if (!is_symmetric(gram)) throw InvalidParameter("gram is not symmetric");
  auto inv = orthcert::inverse(base, gram);
  if (!inv) throw InvalidParameter("gram is not unimodular (det not a unit)");
  AlgebraDesc A(std::move(base));
  A.shape_ = AlgShape::Split;
  A.d_ = gram.rows();
  A.gram_ = std::move(gram);
  A.gram_inv_ = std::move(*inv);
  return A;
}

Matrix random_unimodular_gram(const RingDesc& R, std::size_t d, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Matrix g = zeros(R, d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) g(i, j) = g(j, i) = R.random(rng);
    if (is_unit(R, det(R, g))) return g;
  }
  throw InvalidParameter("random_unimodular_gram: no unimodular draw over " + R.to_string());
}

AlgebraDesc AlgebraDesc::quaternion(RingDesc base, RingElem a, RingElem b, std::array<RingElem, 4> pivot) {
  if (!base.is_field()) throw InvalidParameter("quaternion algebras need a field base, got " + base.to_string());
  if (!base.two_invertible()) throw InvalidParameter("2 is not invertible in " + base.to_string());
  base.validate(a);
  base.validate(b);
  if (!is_unit(base, a) || !is_unit(base, b)) throw InvalidParameter("a and b must be units");
  const bool pure = base.is_zero(pivot[0]);
  const bool scalar = base.is_zero(pivot[1]) && base.is_zero(pivot[2]) && base.is_zero(pivot[3]);
  if (!pure && !scalar) throw InvalidParameter("pivot must be pure or scalar");
  AlgebraDesc A(std::move(base));
  A.shape_ = AlgShape::Quaternion;
  A.d_ = 2;
  A.a_ = std::move(a);
  A.b_ = std::move(b);
  A.pivot_ = Matrix(1, 4, Coords(pivot.begin(), pivot.end()));
  const auto inv = A.inverse(A.pivot_);
  if (!inv) throw InvalidParameter("pivot must have unit reduced norm");
  A.pivot_inv_ = *inv;
  return A;
}

std::size_t AlgebraDesc::degree() const { return d_; }
std::size_t AlgebraDesc::dimension() const { return shape_ == AlgShape::Split ? d_ * d_ : 4; }

AlgElem AlgebraDesc::zero() const {
  return shape_ == AlgShape::Split ? zeros(base_, d_, d_) : zeros(base_, 1, 4);
}

AlgElem AlgebraDesc::one() const { return scalar(base_.one()); }

AlgElem AlgebraDesc::scalar(const RingElem& c) const {
  AlgElem x = zero();
  if (shape_ == AlgShape::Split)
    for (std::size_t i = 0; i < d_; ++i) x(i, i) = c;
  else
    x(0, 0) = c;
  return x;
}

AlgElem AlgebraDesc::from_coords(Coords c) const {
  if (c.size() != dimension()) throw DomainError("coordinate vector has wrong length");
  return shape_ == AlgShape::Split ? Matrix(d_, d_, std::move(c)) : Matrix(1, 4, std::move(c));
}

AlgElem AlgebraDesc::basis(std::size_t i) const {
  Coords c(dimension(), base_.zero());
  c.at(i) = base_.one();
  return from_coords(std::move(c));
}

void AlgebraDesc::check_member(const AlgElem& x) const {
  const bool ok = shape_ == AlgShape::Split ? (x.rows() == d_ && x.cols() == d_) : (x.rows() == 1 && x.cols() == 4);
  if (!ok)
    throw DomainError("element of shape " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                      " does not belong to " + describe());
}

AlgElem AlgebraDesc::add(const AlgElem& x, const AlgElem& y) const { return orthcert::add(base_, x, y); }
AlgElem AlgebraDesc::sub(const AlgElem& x, const AlgElem& y) const { return orthcert::sub(base_, x, y); }
AlgElem AlgebraDesc::neg(const AlgElem& x) const { return orthcert::neg(base_, x); }
AlgElem AlgebraDesc::scale(const RingElem& c, const AlgElem& x) const { return orthcert::scale(base_, c, x); }

AlgElem AlgebraDesc::mul(const AlgElem& x, const AlgElem& y) const {
  check_member(x);
  check_member(y);
  if (shape_ == AlgShape::Split) return orthcert::mul(base_, x, y);
  return Matrix(1, 4, quat_mul(base_, a_, b_, x.entries(), y.entries()));
}

AlgElem AlgebraDesc::pow(const AlgElem& x, unsigned e) const {
  AlgElem result = one(), base = x;
  while (e) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::optional<AlgElem> AlgebraDesc::inverse(const AlgElem& x) const {
  check_member(x);
  if (shape_ == AlgShape::Split) return orthcert::inverse(base_, x);
  const auto n_inv = is_unit(base_, quat_norm(base_, a_, b_, x.entries()));
  if (!n_inv) return std::nullopt;
  return scale(*n_inv, quaternion_conjugate(*this, x));
}

AlgElem AlgebraDesc::random(std::mt19937_64& rng) const {
  return shape_ == AlgShape::Split ? random_matrix(base_, d_, d_, rng) : random_matrix(base_, 1, 4, rng);
}

std::string AlgebraDesc::describe() const {
  std::ostringstream os;
  if (shape_ == AlgShape::Split) {
    os << "M_" << d_ << "(" << base_.to_string() << ") gram [";
    for (std::size_t i = 0; i < d_; ++i) {
      os << (i ? ";" : "");
      for (std::size_t j = 0; j < d_; ++j) os << (j ? "," : "") << base_.format(gram_(i, j));
    }
    os << "]";
  } else {
    os << "(" << base_.format(a_) << "," << base_.format(b_) << ")/" << base_.to_string() << " pivot [";
    for (std::size_t i = 0; i < 4; ++i) os << (i ? "," : "") << base_.format(pivot_(0, i));
    os << "]";
  }
  return os.str();
}

AlgElem quaternion_conjugate(const AlgebraDesc& A, const AlgElem& x) {
  if (A.shape() != AlgShape::Quaternion) throw DomainError("conjugation is defined on quaternions only");
  A.check_member(x);
  const auto& F = A.base();
  return Matrix(1, 4, {x(0, 0), F.neg(x(0, 1)), F.neg(x(0, 2)), F.neg(x(0, 3))});
}

AlgElem involution(const AlgebraDesc& A, const AlgElem& x) {
  A.check_member(x);
  const auto& R = A.base();
  if (A.shape() == AlgShape::Split) return mul(R, mul(R, A.gram_inv_, transpose(x)), A.gram_);
  return A.mul(A.mul(A.pivot_, quaternion_conjugate(A, x)), A.pivot_inv_);
}

RingElem reduced_norm(const AlgebraDesc& A, const AlgElem& x) {
  A.check_member(x);
  if (A.shape() == AlgShape::Split) return det(A.base(), x);
  return quat_norm(A.base(), A.qa(), A.qb(), x.entries());
}

RingElem reduced_trace(const AlgebraDesc& A, const AlgElem& x) {
  A.check_member(x);
  if (A.shape() == AlgShape::Split) return trace(A.base(), x);
  return A.base().add(x(0, 0), x(0, 0));
}

Poly reduced_charpoly(const AlgebraDesc& A, const AlgElem& x) {
  A.check_member(x);
  const auto& R = A.base();
  if (A.shape() == AlgShape::Split) return charpoly(R, x);
  return make_poly(R, {reduced_norm(A, x), R.neg(reduced_trace(A, x)), R.one()});
}

OrthogonalityReport check_orthogonal(const AlgebraDesc& A) {
  OrthogonalityReport report;
  report.orthogonal = true;
  const std::size_t n = A.dimension();
  const std::size_t d = A.degree();
  // The fixed space of sigma is the kernel of sigma - 1 acting on coordinates; compute sigma on
  // the basis over R, then reduce each column at the residue.
  std::vector<Coords> images;
  for (std::size_t k = 0; k < n; ++k) images.push_back(A.sub(involution(A, A.basis(k)), A.basis(k)).entries());
  for (const auto& res : residues_of(A.base())) {
    std::vector<RingElem> entries;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) entries.push_back(res.project(images[k][i]));
    const std::size_t rank = rank_over_field(res.field, Matrix(n, n, std::move(entries)));
    ResidueOrthogonality r{res.label, n - rank, d * (d + 1) / 2, false};
    r.orthogonal = r.symmetric_dim == r.expected;
    if (!r.orthogonal && report.orthogonal) {
      report.orthogonal = false;
      report.first_failure = res.label + ": symmetric dimension " + std::to_string(r.symmetric_dim) + ", expected " +
                             std::to_string(r.expected);
    }
    report.residues.push_back(std::move(r));
  }
  return report;
}

QuotientCtx::QuotientCtx(AlgebraDesc source) : source_(std::move(source)), split_(residue_split(source_.base())) {
  for (std::size_t i = 0; i < split_.count(); ++i) {
    const Matrix g = reduce_at(split_, source_.gram(), i);
    residues_.push_back(AlgebraDesc::split(split_.residue_fields()[i], g));
  }
}

AlgElem QuotientCtx::reduce(std::size_t i, const AlgElem& x) const {
  source_.check_member(x);
  return reduce_at(split_, x, i);
}

std::vector<AlgElem> QuotientCtx::reduce_all(const AlgElem& x) const {
  std::vector<AlgElem> out;
  for (std::size_t i = 0; i < count(); ++i) out.push_back(reduce(i, x));
  return out;
}

AlgElem QuotientCtx::lift(const std::vector<AlgElem>& parts) const {
  if (parts.size() != count()) throw DomainError("need one element per residue");
  for (std::size_t i = 0; i < count(); ++i) residues_[i].check_member(parts[i]);
  return lift_from_residues(split_, parts);
}

QuotientCtx quotient_ctx(const AlgebraDesc& A) {
  if (A.shape() != AlgShape::Split) throw DomainError("quotient_ctx needs a split algebra");
  if (!A.base().is_finite()) throw DomainError("quotient_ctx needs a finite base ring, got " + A.base().to_string());
  QuotientCtx ctx(A);
  for (std::size_t k = 0; k < A.dimension(); ++k) {
    const AlgElem e = A.basis(k);
    for (std::size_t i = 0; i < ctx.count(); ++i)
      if (ctx.reduce(i, involution(A, e)) != involution(ctx.residues()[i], ctx.reduce(i, e)))
        throw IdentityViolation("reduction commutes with involution", "basis element " + std::to_string(k));
  }
  return ctx;
}

bool residually_zero(const AlgebraDesc& A, const AlgElem& x) {
  A.check_member(x);
  const auto& R = A.base();
  if (R.is_field()) return is_zero(R, x);
  if (!R.is_finite()) throw DomainError("residually_zero needs a finite base or a field");
  const auto split = residue_split(R);
  for (const auto& c : x.entries())
    if (!split.in_radical(c)) return false;
  return true;
}

AlgElem sqrt_one_plus_nilpotent(const AlgebraDesc& A, const AlgElem& eps) {
  A.check_member(eps);
  const auto& R = A.base();
  if (!R.two_invertible()) throw DomainError("2 must be invertible");
  if (involution(A, eps) != eps) throw InvalidParameter("eps is not symmetric");
  if (!residually_zero(A, eps)) throw InvalidParameter("eps does not reduce to zero at every residue");
  const int nu = R.is_field() ? 1 : residue_split(R).nilpotency_index();
  // binom(1/2, k) = binom(1/2, k-1) * (1/2 - k + 1) / k; the denominators are powers of 2.
  AlgElem s = A.one(), power = A.one();
  mpq_class c = 1;
  for (int k = 1; k < nu; ++k) {
    c = c * (mpq_class(1, 2) - (k - 1)) / k;
    c.canonicalize();
    power = A.mul(power, eps);
    s = A.add(s, A.scale(R.from_rational(c), power));
  }
  if (A.mul(s, s) != A.add(A.one(), eps))
    throw IdentityViolation("s^2=1+eps", "binomial series did not terminate at the nilpotency index");
  return s;
}

}  // namespace orthcert
