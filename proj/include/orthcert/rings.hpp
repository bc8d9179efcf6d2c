#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace orthcert {

/// Coordinates of an element of a finite ring: one residue per modular atom, k coefficients
/// (low degree first) per GF(p^k) atom, concatenated across the factors of a product.
using Residues = std::vector<std::int64_t>;

/// re + im * sqrt(d) in the fraction field of an imaginary quadratic order.
struct QuadNumber {
  mpq_class re;
  mpq_class im;
  bool operator==(const QuadNumber& o) const { return re == o.re && im == o.im; }
};

/// Plain coordinate record; meaningful only together with the RingDesc it belongs to.
/// Always canonical, so structural equality is ring equality.
using RingElem = std::variant<Residues, mpq_class, QuadNumber>;

enum class RingKind { Modular, FiniteField, Product, Rationals, QuadOrder };

/// One indecomposable finite factor: Z/n or GF(p^k).
struct RingAtom {
  bool is_field = false;
  std::int64_t n = 0;  // modulus for Z/n, characteristic p for GF(p^k)
  int k = 1;
  std::vector<std::int64_t> modulus;  // monic, low degree first, size k + 1 (fields only)
  std::size_t offset = 0;             // first coordinate in Residues
  std::size_t width() const { return is_field ? static_cast<std::size_t>(k) : 1; }
  std::uint64_t size() const;
};

/// Immutable, cheaply copyable description of an exact commutative ring.
class RingDesc {
 public:
  static RingDesc modular(std::int64_t n);
  /// GF(p^k); without a modulus the lexicographically lowest monic irreducible is used.
  static RingDesc finite_field(std::int64_t p, int k,
                               std::optional<std::vector<std::int64_t>> modulus = std::nullopt);
  static RingDesc product(std::vector<RingDesc> factors);
  static RingDesc rationals();
  static RingDesc quad_order(std::int64_t d);

  RingKind kind() const;
  std::string to_string() const;
  bool two_invertible() const;
  bool is_finite() const;
  bool is_field() const;
  /// Number of elements; nullopt for infinite rings or when it overflows 64 bits.
  std::optional<std::uint64_t> size() const;

  std::int64_t modulus() const;                     // Z/n
  std::int64_t characteristic_p() const;            // GF(p^k)
  int extension_degree() const;                     // GF(p^k)
  const std::vector<std::int64_t>& field_modulus() const;
  std::int64_t quad_d() const;                      // Zsqrt[d]
  const std::vector<RingDesc>& factors() const;     // product
  const std::vector<RingAtom>& atoms() const;       // finite rings
  std::size_t width() const;                        // total Residues length

  RingElem zero() const;
  RingElem one() const;
  RingElem from_int(std::int64_t v) const;
  RingElem from_integer(const mpz_class& v) const;
  /// a/b when b is invertible in the ring; throws InvalidParameter otherwise.
  RingElem from_rational(const mpq_class& q) const;

  RingElem add(const RingElem& x, const RingElem& y) const;
  RingElem sub(const RingElem& x, const RingElem& y) const;
  RingElem neg(const RingElem& x) const;
  RingElem mul(const RingElem& x, const RingElem& y) const;
  RingElem pow(const RingElem& x, std::uint64_t e) const;
  bool is_zero(const RingElem& x) const;
  bool is_one(const RingElem& x) const;
  bool equal(const RingElem& x, const RingElem& y) const { return x == y; }

  /// Inverse in the ring itself (for Zsqrt[d]: in the order, so only ±1, ±i).
  std::optional<RingElem> unit_inverse(const RingElem& x) const;
  /// Inverse in the fraction field (Q and Zsqrt[d] only; finite rings defer to unit_inverse).
  std::optional<RingElem> field_inverse(const RingElem& x) const;

  std::string format(const RingElem& x) const;
  RingElem parse_elem(std::string_view text) const;
  /// Throws InvalidParameter if x is not a canonical element of this ring.
  void validate(const RingElem& x) const;

  /// Finite rings: element with the given index in row-major lexicographic order of the
  /// canonical coordinates (first coordinate most significant).
  RingElem element_at(std::uint64_t index) const;
  RingElem random(std::mt19937_64& rng) const;

  bool operator==(const RingDesc& o) const { return to_string() == o.to_string(); }

  // Atom-level arithmetic on raw coordinates, exposed for residue and module machinery.
  static RingDesc atom_ring(const RingAtom& atom);
  Residues project_atom(const RingElem& x, std::size_t atom) const;
  RingElem embed_atoms(const std::vector<Residues>& parts) const;

 private:
  struct Impl;
  explicit RingDesc(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Parses the textual ring grammar: Z/<n>, GF(<p>^<k>)[;<coeffs>], Q, Zsqrt[<d>], prod(...).
RingDesc ring_make(std::string_view spec);

/// Maximal ideal of a finite ring: the prime p of one atom (Z/n) or the zero ideal of a GF atom.
struct MaximalIdeal {
  std::string label;
  std::size_t atom = 0;
  std::int64_t prime = 0;
  bool operator==(const MaximalIdeal&) const = default;
};

/// Decomposition R / Jac R = prod R/m_i of a finite ring.
class ResidueSplit {
 public:
  explicit ResidueSplit(RingDesc ring);

  const RingDesc& ring() const { return ring_; }
  std::size_t count() const { return ideals_.size(); }
  const std::vector<MaximalIdeal>& ideals() const { return ideals_; }
  const std::vector<RingDesc>& residue_fields() const { return fields_; }
  int nilpotency_index() const { return nilpotency_; }
  /// Generator of the (principal) Jacobson radical, e.g. 6 in Z/12.
  const RingElem& radical_generator() const { return radical_gen_; }

  RingElem project(std::size_t i, const RingElem& x) const;
  std::vector<RingElem> project_all(const RingElem& x) const;
  /// Some preimage of the given residues (one per ideal), by CRT.
  RingElem lift(const std::vector<RingElem>& residues) const;
  bool in_radical(const RingElem& x) const;
  std::size_t index_of(const MaximalIdeal& m) const;

 private:
  RingDesc ring_;
  std::vector<MaximalIdeal> ideals_;
  std::vector<RingDesc> fields_;
  int nilpotency_ = 1;
  RingElem radical_gen_;
};

ResidueSplit residue_split(const RingDesc& ring);

/// Unit test with inverse on success.
std::optional<RingElem> is_unit(const RingDesc& ring, const RingElem& x);

struct Mu2Result {
  std::vector<RingElem> roots;
  /// True when the set was obtained by a domain argument (Zsqrt[d]) rather than enumeration.
  bool derived_by_theory = false;
};

Mu2Result mu2(const RingDesc& ring);

// Integer helpers shared by the residue and module code.
std::int64_t mod_floor(std::int64_t a, std::int64_t n);
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t n);
std::int64_t gcd_i64(std::int64_t a, std::int64_t b);
/// Returns g = gcd(a, b) >= 0 and sets s, t with s*a + t*b = g.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& s, std::int64_t& t);
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
bool is_prime(std::int64_t n);

}  // namespace orthcert
