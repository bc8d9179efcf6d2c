#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "orthcert/linalg.hpp"

namespace orthcert {

/// Fractional ideal of Z[w], w^2 = d (d < 0 squarefree, d = 2, 3 mod 4), stored as
/// (1/den) (Z a + Z (b + c w)) with a, c > 0, 0 <= b < a and den minimal.
class QuadIdeal {
 public:
  /// R-module generated by elements of the fraction field. Throws InvalidParameter for the zero
  /// ideal or an unsupported order.
  static QuadIdeal from_generators(const RingDesc& order, const std::vector<QuadNumber>& gens);
  static QuadIdeal unit(const RingDesc& order);

  const RingDesc& order() const { return order_; }
  /// Generators as given (the canonical Z-basis when built from an operation).
  const std::vector<QuadNumber>& generators() const { return gens_; }
  std::array<QuadNumber, 2> z_basis() const;
  const mpz_class& a() const { return a_; }
  const mpz_class& b() const { return b_; }
  const mpz_class& c() const { return c_; }
  const mpz_class& den() const { return den_; }

  /// Index norm a c / den^2.
  mpq_class norm() const;
  bool contains(const QuadNumber& x) const;
  bool is_integral() const { return den_ == 1; }

  bool operator==(const QuadIdeal& o) const {
    return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && den_ == o.den_ && order_ == o.order_;
  }

 private:
  explicit QuadIdeal(RingDesc order) : order_(std::move(order)) {}
  RingDesc order_;
  std::vector<QuadNumber> gens_;
  mpz_class a_, b_, c_, den_;
};

QuadIdeal ideal_product(const QuadIdeal& I, const QuadIdeal& J);
QuadIdeal ideal_conjugate(const QuadIdeal& I);
/// conj(I) / N(I); throws InvalidParameter unless I * I^-1 = R.
QuadIdeal ideal_inverse(const QuadIdeal& I);
/// "2,1+w" -> the ideal generated by 2 and 1 + w.
QuadIdeal parse_ideal(const RingDesc& order, const std::string& gens);
std::string format_ideal(const QuadIdeal& I);

struct Principality {
  bool principal = false;
  std::optional<QuadNumber> generator;  // x with xR = I
  std::uint64_t lattice_points = 0;     // points of the norm ellipse examined
};

/// Exhaustive search for x in I with N(x) = N(I) inside the ellipse X^2 - d Y^2 = den^2 N(I).
Principality is_principal(const QuadIdeal& I);

/// [[R, L^-1], [L, R]] with sigma([[a, b], [c, d]]) = [[d, b], [c, a]], entries in the fraction
/// field of the order.
class IdealAlgebra {
 public:
  IdealAlgebra(QuadIdeal L);

  const RingDesc& order() const { return L_.order(); }
  const QuadIdeal& L() const { return L_; }
  const QuadIdeal& L_inverse() const { return L_inv_; }

  bool is_member(const Matrix& x) const;
  Matrix sigma(const Matrix& x) const;
  Matrix mul(const Matrix& x, const Matrix& y) const;
  RingElem det(const Matrix& x) const;
  Matrix one() const;
  /// Random member with small integer coordinates on the Z-bases of R, L^-1, L.
  Matrix random_member(std::mt19937_64& rng) const;

  /// f(r1 + l1, r2 + l2) = r1 l2 + r2 l1 on R + L.
  RingElem form(const std::array<RingElem, 2>& m1, const std::array<RingElem, 2>& m2) const;
  std::array<RingElem, 2> act(const Matrix& x, const std::array<RingElem, 2>& m) const;
  std::array<RingElem, 2> random_module_element(std::mt19937_64& rng) const;

 private:
  QuadIdeal L_, L_inv_;
};

/// Builds the algebra and checks on `samples` random members that sigma is an anti-automorphism of
/// order two and the adjoint of f. Throws InvalidParameter for a non-invertible L and
/// IdentityViolation when a check fails.
IdealAlgebra build_ideal_algebra(const QuadIdeal& L, std::mt19937_64& rng, int samples = 50);

/// One symbolic identity in Z[a, b, c, d] behind the structural step.
struct StructuralIdentity {
  std::string name;         // "2ad=0", "bc=1", "2ac=0", "2bd=0"
  std::string lhs;          // expanded left side, e.g. "2*a*d"
  std::string combination;  // combination of the defining equations that equals lhs
  bool verified = false;
};

struct IdealAudit {
  std::string order;
  std::vector<std::string> L_gens;
  std::vector<StructuralIdentity> identities;
  std::string consequence;  // what the identities force on u
  Principality principality;
  std::string verdict;  // "O_equals_SO" or "norm_minus_one_exists"
  std::optional<Matrix> witness;  // [[0, x^-1], [x, 0]] when L = xR
};

/// Structural step by symbolic expansion of sigma(u) u and det u, then the ideal step: a norm -1
/// element exists iff L is principal. The witness is checked (member, sigma(u) u = 1, det -1).
IdealAudit audit_no_norm_minus_one(const IdealAlgebra& A);

/// Recomputes the audit from the algebra and compares it with `audit`; throws IdentityViolation
/// ("structural identity", "principal", "verdict", "witness").
void verify_audit(const IdealAlgebra& A, const IdealAudit& audit);

}  // namespace orthcert
