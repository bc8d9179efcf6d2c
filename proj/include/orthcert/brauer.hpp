#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthcert/isometry.hpp"
#include "orthcert/modules.hpp"

namespace orthcert {

/// u = 1 - 2 x g(x,x)^-1 x^T g: minus the identity on xR, the identity on its orthogonal
/// complement.
struct NormMinusOneWitness {
  AlgElem u;
  Vec x;  // g(x, x) is a unit
  Poly charpoly;
};

/// Searches e_i, then e_i + e_j, at every residue field and CRT-lifts the residue vectors.
/// Split algebras over finite rings or Q.
NormMinusOneWitness norm_minus_one(const AlgebraDesc& A);

/// Throws IdentityViolation ("anisotropic", "isometry", "nrd=-1", "charpoly").
void verify_norm_minus_one(const AlgebraDesc& A, const NormMinusOneWitness& w);

/// Isometry v = u w with w in SO, whose image at every residue is the residue norm -1 witness.
struct CanonicalCorrection {
  AlgElem v;
  LiftCertificate lift;  // w = lift.lifted, targets u_i^-1 v_i
};

/// Requires u in O(A, sigma) with Nrd(u) = -1 over a finite base. Runs at every degree.
CanonicalCorrection correct_to_canonical(const AlgebraDesc& A, const AlgElem& u);

/// Coefficient k of f equals f(0)^-1 times coefficient d - k, for f the reduced characteristic
/// polynomial of v. Throws InvalidParameter when v is not an isometry.
bool functional_equation_check(const AlgebraDesc& A, const AlgElem& v);

struct SplitCertificate {
  AlgElem input_u;
  AlgElem v;
  LiftCertificate lift;
  Poly f, g, r;  // f = (t + 1) g, g = (t + 1) r + alpha
  RingElem alpha;
  AlgElem e, e_prime;
  std::vector<Vec> basis;  // free basis of eA, as coordinate vectors of d x d matrices
  bool iso_check = false;  // the right-regular map A -> End_R(eA) is bijective
};

/// Builds the idempotent e = alpha^-1 g(v) of rank one and the witness A = End_R(eA). Every
/// failed step throws IdentityViolation naming that step.
SplitCertificate split_certificate(const AlgebraDesc& A, const AlgElem& u);

/// Recomputes every identity recorded in a split certificate from its fields alone, without
/// searching. Names, in checking order: "nrd=-1", "isometry", "lift <name>", "v=uw",
/// "v residues", "f=charpoly", "functional equation", "f(-1)=0", "f=(t+1)g", "g=(t+1)r+alpha",
/// "alpha unit", "alpha=(-2)^(d-1)", "e^2=e", "e=alpha^-1 g(v)", "e'=-alpha^-1(v+1)r(v)",
/// "e+e'=1", "ee'=0", "rank one", "basis in eA", "eA free of rank d", "right-regular bijective".
void verify_split(const AlgebraDesc& A, const SplitCertificate& cert);

/// Matrix of x -> x a on the basis of eA: column j holds the coordinates of b_j a.
Matrix right_regular(const AlgebraDesc& A, const ModuleBasis& eA, const AlgElem& a);

struct QuaternionProbe {
  int bound = 0;
  std::size_t candidates = 0;
  std::vector<AlgElem> isometries;     // every isometry found, in enumeration order
  std::optional<AlgElem> minus_one;    // first isometry with Nrd = -1
  bool all_nrd_one = false;
  /// "no counterexample within bound" or "norm -1 witness found"; never a proof.
  std::string conclusion;
};

/// Enumerates quaternions whose coordinates are p/q with |p| <= bound, 1 <= q <= bound.
QuaternionProbe quaternion_probe(const AlgebraDesc& A, int bound);

}  // namespace orthcert
