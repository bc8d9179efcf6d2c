#include "orthcert/brauer.hpp"

#include <algorithm>

#include "orthcert/errors.hpp"

namespace orthcert {

namespace {

void require_split(const AlgebraDesc& A, const char* op) {
  if (A.shape() != AlgShape::Split) throw DomainError(std::string(op) + " needs a split algebra");
}

void require_split_finite(const AlgebraDesc& A, const char* op) {
  require_split(A, op);
  if (!A.base().is_finite()) throw DomainError(std::string(op) + " needs a finite base ring");
}

RingElem form(const RingDesc& R, const Matrix& g, const Vec& x, const Vec& y) {
  RingElem acc = R.zero();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) acc = R.add(acc, R.mul(x[i], R.mul(g(i, j), y[j])));
  return acc;
}

// Index pattern of the first of e_i, e_i + e_j with g(x, x) != 0 over a field.
std::vector<std::size_t> anisotropic_pattern(const RingDesc& F, const Matrix& g) {
  const std::size_t d = g.rows();
  for (std::size_t i = 0; i < d; ++i)
    if (!F.is_zero(g(i, i))) return {i};
  const RingElem two = F.from_int(2);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (!F.is_zero(F.add(F.add(g(i, i), g(j, j)), F.mul(two, g(i, j))))) return {i, j};
  throw DomainError("no anisotropic vector among e_i, e_i + e_j (internal: impossible for a unimodular form)");
}

Vec pattern_vector(const RingDesc& F, std::size_t d, const std::vector<std::size_t>& pattern) {
  Vec x(d, F.zero());
  for (auto i : pattern) x[i] = F.one();
  return x;
}

AlgElem witness_from_vector(const AlgebraDesc& A, const Vec& x) {
  const auto& R = A.base();
  const std::size_t d = A.degree();
  const auto inv = is_unit(R, form(R, A.gram(), x, x));
  if (!inv) throw IdentityViolation("anisotropic", "g(x, x) is not a unit");
  // x^T g as a row, then u = 1 - 2 g(x,x)^-1 x (x^T g).
  Matrix col(d, 1, x);
  const Matrix row = mul(R, transpose(col), A.gram());
  const RingElem c = R.mul(R.from_int(2), *inv);
  return A.sub(A.one(), scale(R, c, mul(R, col, row)));
}

Poly t_plus_one(const RingDesc& R) { return make_poly(R, {R.one(), R.one()}); }

Matrix vec_to_matrix(const Vec& v, std::size_t d) { return Matrix(d, d, v); }

std::vector<Vec> eA_generators(const AlgebraDesc& A, const AlgElem& e) {
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < A.dimension(); ++i) gens.push_back(A.mul(e, A.basis(i)).entries());
  return gens;
}

RingElem residue_alpha(const RingDesc& F, std::size_t d) {
  return F.pow(F.from_int(-2), static_cast<std::uint64_t>(d - 1));
}

// d^2 x d^2 matrix of a -> (x -> x a) on the standard basis of A, columns indexed by basis(k).
Matrix regular_matrix(const AlgebraDesc& A, const ModuleBasis& eA) {
  const auto& R = A.base();
  const std::size_t n = A.dimension();
  const std::size_t d = A.degree();
  Matrix out = zeros(R, d * d, n);
  for (std::size_t k = 0; k < n; ++k) {
    const Matrix rho = right_regular(A, eA, A.basis(k));
    for (std::size_t i = 0; i < d * d; ++i) out(i, k) = rho.entries()[i];
  }
  return out;
}

}  // namespace

NormMinusOneWitness norm_minus_one(const AlgebraDesc& A) {
  require_split(A, "norm_minus_one");
  const auto& R = A.base();
  const std::size_t d = A.degree();
  NormMinusOneWitness w;
  if (R.kind() == RingKind::Rationals) {
    w.x = pattern_vector(R, d, anisotropic_pattern(R, A.gram()));
  } else if (R.is_finite()) {
    // Find x at every residue field, then take any common lift.
    const ResidueSplit S(R);
    std::vector<Vec> parts;
    for (std::size_t i = 0; i < S.count(); ++i) {
      const auto& F = S.residue_fields()[i];
      parts.push_back(pattern_vector(F, d, anisotropic_pattern(F, reduce_at(S, A.gram(), i))));
    }
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<RingElem> residues;
      for (const auto& p : parts) residues.push_back(p[k]);
      w.x.push_back(S.lift(residues));
    }
  } else {
    throw DomainError("norm_minus_one needs a finite base ring or Q");
  }
  w.u = witness_from_vector(A, w.x);
  w.charpoly = reduced_charpoly(A, w.u);
  verify_norm_minus_one(A, w);
  return w;
}

void verify_norm_minus_one(const AlgebraDesc& A, const NormMinusOneWitness& w) {
  require_split(A, "verify_norm_minus_one");
  const auto& R = A.base();
  A.check_member(w.u);
  if (w.x.size() != A.degree()) throw SchemaError("anisotropic vector has the wrong length");
  const AlgElem expected = witness_from_vector(A, w.x);
  if (!is_isometry(A, w.u)) throw IdentityViolation("isometry", "sigma(u) u != 1");
  if (!R.equal(reduced_norm(A, w.u), R.from_int(-1))) throw IdentityViolation("nrd=-1", "Nrd(u) != -1");
  const Poly target = reflection_charpoly(R, static_cast<unsigned>(A.degree()));
  if (w.charpoly != reduced_charpoly(A, w.u) || w.charpoly != target)
    throw IdentityViolation("charpoly", "charpoly is not (t+1)(t-1)^(d-1)");
  if (w.u != expected) throw IdentityViolation("u=1-2x g(x,x)^-1 x^T g", "u does not match its vector");
}

CanonicalCorrection correct_to_canonical(const AlgebraDesc& A, const AlgElem& u) {
  require_split_finite(A, "correct_to_canonical");
  const auto& R = A.base();
  A.check_member(u);
  if (!is_isometry(A, u)) throw InvalidParameter("correct_to_canonical: u is not an isometry");
  if (!R.equal(reduced_norm(A, u), R.from_int(-1))) throw InvalidParameter("correct_to_canonical: Nrd(u) != -1");
  const QuotientCtx ctx = quotient_ctx(A);
  std::vector<AlgElem> canonical, targets;
  for (std::size_t i = 0; i < ctx.count(); ++i) {
    const auto& Ai = ctx.residues()[i];
    canonical.push_back(norm_minus_one(Ai).u);
    // Nrd(u_i^-1 v_i) = 1, so the quotient lies in SO at this residue.
    const auto ui_inv = Ai.inverse(ctx.reduce(i, u));
    targets.push_back(Ai.mul(*ui_inv, canonical.back()));
  }
  CanonicalCorrection out;
  out.lift = lift_so(A, targets);
  out.v = A.mul(u, out.lift.lifted);
  if (ctx.reduce_all(out.v) != canonical)
    throw IdentityViolation("v residues", "v does not reduce to the residue witnesses");
  return out;
}

bool functional_equation_check(const AlgebraDesc& A, const AlgElem& v) {
  if (!is_isometry(A, v)) throw InvalidParameter("functional_equation_check: v is not an isometry");
  const auto& R = A.base();
  const Poly f = reduced_charpoly(A, v);
  const std::size_t d = static_cast<std::size_t>(f.degree());
  const auto inv = R.kind() == RingKind::Rationals ? R.field_inverse(f.coeffs[0]) : is_unit(R, f.coeffs[0]);
  if (!inv) return false;
  for (std::size_t k = 0; k <= d; ++k)
    if (f.coeffs[k] != R.mul(*inv, f.coeffs[d - k])) return false;
  return true;
}

Matrix right_regular(const AlgebraDesc& A, const ModuleBasis& eA, const AlgElem& a) {
  const auto& R = A.base();
  const std::size_t d = A.degree();
  const std::size_t n = eA.basis.size();
  Matrix out = zeros(R, n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const AlgElem image = A.mul(vec_to_matrix(eA.basis[j], d), a);
    const auto c = coordinates(R, eA, image.entries());
    if (!c) throw IdentityViolation("basis in eA", "eA is not closed under right multiplication");
    for (std::size_t i = 0; i < n; ++i) out(i, j) = (*c)[i];
  }
  return out;
}

SplitCertificate split_certificate(const AlgebraDesc& A, const AlgElem& u) {
  require_split_finite(A, "split_certificate");
  const auto& R = A.base();
  SplitCertificate cert;
  cert.input_u = u;
  auto corr = correct_to_canonical(A, u);
  cert.v = std::move(corr.v);
  cert.lift = std::move(corr.lift);

  cert.f = reduced_charpoly(A, cert.v);
  const RingElem minus_one = R.from_int(-1);
  const auto d1 = poly_divide_linear(R, cert.f, minus_one);
  if (!R.is_zero(d1.remainder)) throw IdentityViolation("f(-1)=0", "t + 1 does not divide f");
  cert.g = d1.quotient;
  const auto d2 = poly_divide_linear(R, cert.g, minus_one);
  cert.r = d2.quotient;
  cert.alpha = d2.remainder;
  const auto alpha_inv = is_unit(R, cert.alpha);
  if (!alpha_inv) throw IdentityViolation("alpha unit", "alpha = g(-1) is not a unit");

  cert.e = A.scale(*alpha_inv, poly_eval(R, cert.g, cert.v));
  const AlgElem v_plus_one = A.add(cert.v, A.one());
  cert.e_prime = A.neg(A.scale(*alpha_inv, A.mul(v_plus_one, poly_eval(R, cert.r, cert.v))));

  const ModuleBasis eA = module_basis(R, eA_generators(A, cert.e), A.dimension());
  if (!eA.free || eA.rank != A.degree())
    throw IdentityViolation("eA free of rank d", eA.free ? "eA has the wrong rank" : eA.reason);
  cert.basis = eA.basis;
  cert.iso_check = is_unit(R, det(R, regular_matrix(A, eA))).has_value();
  verify_split(A, cert);
  return cert;
}

void verify_split(const AlgebraDesc& A, const SplitCertificate& cert) {
  require_split_finite(A, "verify_split");
  const auto& R = A.base();
  const std::size_t d = A.degree();
  for (const auto* x : {&cert.input_u, &cert.v, &cert.e, &cert.e_prime}) A.check_member(*x);

  if (!is_isometry(A, cert.input_u) || !R.equal(reduced_norm(A, cert.input_u), R.from_int(-1)))
    throw IdentityViolation("nrd=-1", "input u is not an isometry of reduced norm -1");
  if (!is_isometry(A, cert.v)) throw IdentityViolation("isometry", "sigma(v) v != 1");
  try {
    verify_lift(A, cert.lift);
  } catch (const IdentityViolation& err) {
    throw IdentityViolation("lift " + err.identity(), err.what());
  }
  if (cert.v != A.mul(cert.input_u, cert.lift.lifted)) throw IdentityViolation("v=uw", "v != u w");

  const QuotientCtx ctx = quotient_ctx(A);
  for (std::size_t i = 0; i < ctx.count(); ++i) {
    const auto& Ai = ctx.residues()[i];
    if (reduced_charpoly(Ai, ctx.reduce(i, cert.v)) != reflection_charpoly(Ai.base(), static_cast<unsigned>(d)))
      throw IdentityViolation("v residues", "charpoly of v at " + ctx.split().ideals()[i].label +
                                                " is not (t+1)(t-1)^(d-1)");
  }

  if (cert.f != reduced_charpoly(A, cert.v)) throw IdentityViolation("f=charpoly", "f is not the charpoly of v");
  if (!functional_equation_check(A, cert.v))
    throw IdentityViolation("functional equation", "f(0)^-1 t^d f(1/t) != f");
  const RingElem minus_one = R.from_int(-1);
  if (!R.is_zero(poly_eval(R, cert.f, minus_one))) throw IdentityViolation("f(-1)=0", "f(-1) != 0");
  const Poly tp1 = t_plus_one(R);
  if (poly_mul(R, tp1, cert.g) != cert.f) throw IdentityViolation("f=(t+1)g", "f != (t+1) g");
  R.validate(cert.alpha);
  if (poly_add(R, poly_mul(R, tp1, cert.r), make_poly(R, {cert.alpha})) != cert.g)
    throw IdentityViolation("g=(t+1)r+alpha", "g != (t+1) r + alpha");
  const auto alpha_inv = is_unit(R, cert.alpha);
  if (!alpha_inv) throw IdentityViolation("alpha unit", "alpha is not a unit");
  const ResidueSplit& S = ctx.split();
  for (std::size_t i = 0; i < S.count(); ++i)
    if (S.project(i, cert.alpha) != residue_alpha(S.residue_fields()[i], d))
      throw IdentityViolation("alpha=(-2)^(d-1)", "alpha has the wrong residue at " + S.ideals()[i].label);

  if (A.mul(cert.e, cert.e) != cert.e) throw IdentityViolation("e^2=e", "e is not idempotent");
  if (cert.e != A.scale(*alpha_inv, poly_eval(R, cert.g, cert.v)))
    throw IdentityViolation("e=alpha^-1 g(v)", "e does not match g(v)");
  const AlgElem v_plus_one = A.add(cert.v, A.one());
  if (cert.e_prime != A.neg(A.scale(*alpha_inv, A.mul(v_plus_one, poly_eval(R, cert.r, cert.v)))))
    throw IdentityViolation("e'=-alpha^-1(v+1)r(v)", "e' does not match r(v)");
  if (A.add(cert.e, cert.e_prime) != A.one()) throw IdentityViolation("e+e'=1", "e + e' != 1");
  if (!is_zero(R, A.mul(cert.e, cert.e_prime)) || !is_zero(R, A.mul(cert.e_prime, cert.e)))
    throw IdentityViolation("ee'=0", "e e' or e' e is nonzero");
  for (std::size_t i = 0; i < S.count(); ++i)
    if (rank_at_residue(S, cert.e, i) != 1)
      throw IdentityViolation("rank one", "e does not have rank one at " + S.ideals()[i].label);

  for (const auto& b : cert.basis) {
    if (b.size() != A.dimension()) throw SchemaError("eA basis vector has the wrong length");
    for (const auto& x : b) R.validate(x);
    if (A.mul(cert.e, vec_to_matrix(b, d)).entries() != b)
      throw IdentityViolation("basis in eA", "basis vector is not in eA");
  }
  if (span_form(R, cert.basis, A.dimension()) != span_form(R, eA_generators(A, cert.e), A.dimension()))
    throw IdentityViolation("basis in eA", "basis does not span eA");
  const ModuleBasis eA = module_basis(R, cert.basis, A.dimension());
  if (cert.basis.size() != d || !eA.free || eA.rank != d)
    throw IdentityViolation("eA free of rank d", "basis is not a free basis of rank d");
  if (!cert.iso_check || !is_unit(R, det(R, regular_matrix(A, eA))))
    throw IdentityViolation("right-regular bijective", "A -> End_R(eA) is not bijective");
}

QuaternionProbe quaternion_probe(const AlgebraDesc& A, int bound) {
  if (A.shape() != AlgShape::Quaternion || A.base().kind() != RingKind::Rationals)
    throw DomainError("quaternion_probe needs a quaternion algebra over Q");
  if (bound < 1) throw InvalidParameter("quaternion_probe: bound must be positive");
  const auto& R = A.base();
  std::vector<mpq_class> heights;
  for (int q = 1; q <= bound; ++q)
    for (int p = -bound; p <= bound; ++p) {
      mpq_class x(p, q);
      x.canonicalize();
      if (std::find(heights.begin(), heights.end(), x) == heights.end()) heights.push_back(x);
    }
  std::sort(heights.begin(), heights.end());

  QuaternionProbe out;
  out.bound = bound;
  out.all_nrd_one = true;
  const std::size_t n = heights.size();
  std::vector<RingElem> c(4);
  for (std::size_t i0 = 0; i0 < n; ++i0)
    for (std::size_t i1 = 0; i1 < n; ++i1)
      for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i3 = 0; i3 < n; ++i3) {
          ++out.candidates;
          c = {heights[i0], heights[i1], heights[i2], heights[i3]};
          const AlgElem x = A.from_coords(c);
          if (!is_isometry(A, x)) continue;
          out.isometries.push_back(x);
          if (R.is_one(reduced_norm(A, x))) continue;
          out.all_nrd_one = false;
          if (!out.minus_one && R.equal(reduced_norm(A, x), R.from_int(-1))) out.minus_one = x;
        }
  if (out.isometries.empty())
    out.conclusion = "no isometry within bound";
  else if (out.minus_one)
    out.conclusion = "norm -1 witness found";
  else
    out.conclusion = "no counterexample within bound";
  return out;
}

}  // namespace orthcert
