#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthcert/linalg.hpp"

namespace orthcert {

using Vec = std::vector<RingElem>;

/// Howell form of the row span of `rows` over Z/n (Storjohann-Mulders normalisation):
/// pivots are divisors of n, entries above a pivot reduced below it, and the span of the rows
/// with leading zeros in the first j columns is generated by the rows starting after column j.
std::vector<std::vector<std::int64_t>> howell_form(std::int64_t n, std::vector<std::vector<std::int64_t>> rows,
                                                   std::size_t cols);

/// Canonical description of a submodule of R^m for finite R: one Howell form (Z/n atoms) or
/// reduced row echelon form (GF atoms) per atom. Equal spans give equal forms.
struct SpanForm {
  std::vector<std::vector<std::vector<std::int64_t>>> per_atom;
  bool operator==(const SpanForm&) const = default;
};

SpanForm span_form(const RingDesc& R, const std::vector<Vec>& generators, std::size_t length);

/// Smith-type diagonalisation of the generator matrix, per atom.
struct AtomModule {
  std::vector<std::int64_t> invariants;  // normalised diagonal entries (divisors of n, or 0/1 on fields)
  Matrix column_transform;               // V with U G V = D
  Matrix column_transform_inv;           // V^-1; its rows indexed by unit invariants form a basis
};

struct ModuleBasis {
  bool free = false;
  std::size_t rank = 0;
  std::vector<Vec> basis;  // explicit basis when free
  std::string reason;      // why it is not free
  std::size_t length = 0;
  std::vector<AtomModule> atoms;
};

/// Normal form of the submodule of R^length generated by `generators` (R modular, GF or a
/// finite product of those). Reports freeness and rank, with a basis when free.
ModuleBasis module_basis(const RingDesc& R, const std::vector<Vec>& generators, std::size_t length);

/// Coordinates of v in the basis of a free module, or nullopt if v is not in the module.
std::optional<Vec> coordinates(const RingDesc& R, const ModuleBasis& module, const Vec& v);

}  // namespace orthcert
