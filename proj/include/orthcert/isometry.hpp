#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "orthcert/azumaya.hpp"

namespace orthcert {

/// sigma(u) u = 1 exactly.
bool is_isometry(const AlgebraDesc& A, const AlgElem& u);

struct NrdSign {
  RingElem nrd;
  bool special = false;  // Nrd(u) = 1 exactly
};
/// Throws InvalidParameter when u is not an isometry.
NrdSign nrd_sign(const AlgebraDesc& A, const AlgElem& u);

/// (y, a) with sigma(a) = -a and 1/2 sigma(y) y + a invertible.
struct ReflectionDatum {
  AlgElem y;
  AlgElem a;
};

/// s_{y,a} = 1 - y (1/2 sigma(y) y + a)^-1 sigma(y). Throws InvalidParameter on an invalid
/// datum and IdentityViolation if the result is not an isometry.
AlgElem reflection(const AlgebraDesc& A, const ReflectionDatum& datum);

/// a = g^-1 k with k alternating: the general element of Sym_-1 for a split algebra.
AlgElem random_antisymmetric(const AlgebraDesc& A, std::mt19937_64& rng);
/// Every antisymmetric element of a split algebra over a finite ring, in enumeration order.
std::vector<AlgElem> enumerate_antisymmetric(const AlgebraDesc& A);

/// Product of two Cayley transforms (1 - a)(1 + a)^-1; reduced norm 1 by construction.
AlgElem random_special_orthogonal(const AlgebraDesc& A, std::mt19937_64& rng);

struct EnumBudget {
  std::uint64_t elements = 1'000'000;
  std::uint64_t pairs = 10'000'000;
  /// Small rings (at most 256 elements, degree at most 4) run on precomputed operation tables;
  /// false forces the generic arithmetic, which tests use as a cross-check.
  bool use_tables = true;
};

/// Canonical dedup key of an element over a finite ring.
std::vector<std::int64_t> elem_key(const AlgElem& x);

struct ReflectionSet {
  std::vector<AlgElem> reflections;  // distinct values, first-seen order
  std::uint64_t pairs = 0;           // candidate (y, a) pairs visited
  std::uint64_t valid = 0;           // pairs with 1/2 sigma(y) y + a invertible
};
/// Visits every (y, a) in row-major lexicographic order. Throws BudgetExceeded up front.
ReflectionSet reflection_enumerate(const AlgebraDesc& A, const EnumBudget& budget = {});

/// Exhaustive list of O(A, sigma) over a finite base, in enumeration order.
std::vector<AlgElem> enumerate_orthogonal(const AlgebraDesc& A, const EnumBudget& budget = {});
/// The members of enumerate_orthogonal with reduced norm 1.
std::vector<AlgElem> enumerate_special_orthogonal(const AlgebraDesc& A, const EnumBudget& budget = {});

struct ClosureReport {
  std::size_t reflections = 0;
  std::size_t orthogonal = 0;  // |O|
  std::size_t special = 0;     // |SO|
  std::vector<AlgElem> group;  // BFS order from 1
  std::size_t missing = 0;     // SO elements not in the closure
  bool contains_so = false;
};
/// Subgroup generated by all reflections, compared with exhaustively enumerated SO.
ClosureReport reflection_closure(const AlgebraDesc& A, const EnumBudget& budget = {});

/// Lifts a datum given at every residue (one per maximal ideal) to A: z is the CRT preimage of
/// y, b the antisymmetrised preimage of a. Verifies that s_{z,b} reduces to each s_{y_i,a_i}.
ReflectionDatum lift_reflection(const QuotientCtx& ctx, const std::vector<ReflectionDatum>& residue_data);

/// u = u0 s^-1 with s^2 = sigma(u0) u0. Requires sigma(u0) u0 = 1 at every residue and a common
/// residue sign of Nrd(u0).
AlgElem hensel_lift_isometry(const AlgebraDesc& A, const AlgElem& u0);

struct LiftChecks {
  bool isometry = false;
  bool nrd_one = false;
  bool residues = false;
};

struct LiftCertificate {
  std::vector<AlgElem> targets;  // one SO element per residue algebra
  AlgElem lifted;
  std::string method = "hensel";
  LiftChecks checks;
};

/// CRT-combines the targets, lifts entrywise and exactifies with hensel_lift_isometry.
LiftCertificate lift_so(const AlgebraDesc& A, const std::vector<AlgElem>& targets);

/// Recomputes the checks of a lift certificate from its fields; throws IdentityViolation
/// ("isometry", "nrd_one", "residues") on the first failure.
void verify_lift(const AlgebraDesc& A, const LiftCertificate& cert);

}  // namespace orthcert
