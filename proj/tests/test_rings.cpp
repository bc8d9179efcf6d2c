#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "orthcert/errors.hpp"
#include "orthcert/rings.hpp"

using namespace orthcert;

namespace {

std::int64_t rep(const RingElem& x) { return std::get<Residues>(x).at(0); }

std::vector<RingDesc> sample_rings() {
  return {ring_make("Z/15"), ring_make("Z/9"),      ring_make("Z/8"),
          ring_make("GF(3^2)"), ring_make("GF(5^1)"), ring_make("prod(Z/9,GF(5^1),GF(2^3))"),
          ring_make("Q"),     ring_make("Zsqrt[-5]")};
}

}  // namespace

TEST(RingMake, ModularTwoInvertibility) {
  EXPECT_EQ(ring_make("Z/15").kind(), RingKind::Modular);
  EXPECT_TRUE(ring_make("Z/15").two_invertible());
  EXPECT_FALSE(ring_make("Z/8").two_invertible());
  EXPECT_EQ(ring_make("Z/15").modulus(), 15);
}

TEST(RingMake, QuadraticOrderAndOthers) {
  const auto r = ring_make("Zsqrt[-5]");
  EXPECT_EQ(r.kind(), RingKind::QuadOrder);
  EXPECT_EQ(r.quad_d(), -5);
  EXPECT_FALSE(r.two_invertible());
  EXPECT_EQ(ring_make("Q").kind(), RingKind::Rationals);
  EXPECT_EQ(ring_make(" prod( Z/3 , Z/5 ) ").to_string(), "prod(Z/3,Z/5)");
}

TEST(RingMake, FiniteFieldModulus) {
  const auto f9 = ring_make("GF(3^2)");
  EXPECT_EQ(f9.field_modulus(), (std::vector<std::int64_t>{1, 0, 1}));  // x^2 + 1
  EXPECT_EQ(ring_make("GF(2^2)").field_modulus(), (std::vector<std::int64_t>{1, 1, 1}));
  const auto explicit_mod = ring_make("GF(3^2);2,1,1");  // x^2 + x + 2
  EXPECT_EQ(explicit_mod.to_string(), "GF(3^2);2,1,1");
  // Modulus inside a product is consumed by degree, so commas stay unambiguous.
  EXPECT_EQ(ring_make("prod(GF(3^2);2,1,1,Z/5)").factors().size(), 2u);
}

TEST(RingMake, ErrorsNameOffendingToken) {
  EXPECT_THROW(ring_make("Z/1"), ParseError);
  EXPECT_THROW(ring_make("GF(4^1)"), ParseError);
  EXPECT_THROW(ring_make("Zsqrt[-4]"), ParseError);
  EXPECT_THROW(ring_make("Zsqrt[5]"), ParseError);
  EXPECT_THROW(ring_make("R"), ParseError);
  try {
    ring_make("GF(3^2);2,0,1");  // x^2 + 2 = (x+1)(x+2)
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.token(), "GF(3^2)");
    EXPECT_NE(std::string(e.what()).find("reducible"), std::string::npos);
  }
  try {
    ring_make("Z/15x");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.token(), "x");
  }
}

TEST(IsUnit, ModularExamples) {
  const auto z9 = ring_make("Z/9");
  const auto inv = is_unit(z9, z9.from_int(2));
  ASSERT_TRUE(inv);
  EXPECT_EQ(rep(*inv), 5);
  EXPECT_FALSE(is_unit(z9, z9.from_int(3)));
  const auto z45 = ring_make("Z/45");
  const auto inv7 = is_unit(z45, z45.from_int(7));
  ASSERT_TRUE(inv7);
  EXPECT_EQ((7 * rep(*inv7)) % 45, 1);
}

TEST(IsUnit, FieldsAndQuadraticOrder) {
  const auto f9 = ring_make("GF(3^2)");
  for (std::uint64_t i = 1; i < 9; ++i) {
    const auto x = f9.element_at(i);
    const auto inv = is_unit(f9, x);
    ASSERT_TRUE(inv);
    EXPECT_TRUE(f9.is_one(f9.mul(x, *inv)));
  }
  const auto o = ring_make("Zsqrt[-5]");
  EXPECT_TRUE(is_unit(o, o.from_int(-1)));
  EXPECT_FALSE(is_unit(o, o.from_int(2)));
  EXPECT_FALSE(is_unit(o, o.parse_elem("w")));
  EXPECT_TRUE(o.field_inverse(o.parse_elem("w")));
}

TEST(Mu2, MatchesEnumerationOracle) {
  for (std::int64_t n : {9, 15, 45, 8, 225}) {
    std::vector<std::int64_t> oracle;
    for (std::int64_t x = 0; x < n; ++x)
      if ((x * x) % n == 1) oracle.push_back(x);
    const auto got = mu2(RingDesc::modular(n));
    std::vector<std::int64_t> reps;
    for (const auto& e : got.roots) reps.push_back(rep(e));
    EXPECT_EQ(reps, oracle) << "n=" << n;
  }
  EXPECT_EQ(mu2(ring_make("Z/15")).roots.size(), 4u);  // {1, 4, 11, 14}
  const auto q = mu2(ring_make("Q"));
  EXPECT_EQ(q.roots.size(), 2u);
  EXPECT_FALSE(q.derived_by_theory);
  EXPECT_TRUE(mu2(ring_make("Zsqrt[-5]")).derived_by_theory);
}

TEST(ResidueSplit, Z45) {
  const auto split = residue_split(ring_make("Z/45"));
  ASSERT_EQ(split.count(), 2u);
  EXPECT_EQ(split.ideals()[0].prime, 3);
  EXPECT_EQ(split.ideals()[1].prime, 5);
  EXPECT_EQ(split.residue_fields()[0].to_string(), "GF(3^1)");
  EXPECT_EQ(split.nilpotency_index(), 2);
  // Oracle: radical = elements vanishing mod 3 and mod 5, i.e. multiples of 15; J^2 = 0.
  const auto& R = split.ring();
  EXPECT_EQ(rep(split.radical_generator()), 15);
  for (std::int64_t x = 0; x < 45; x += 15)
    for (std::int64_t y = 0; y < 45; y += 15) EXPECT_EQ((x * y) % 45, 0);
  EXPECT_TRUE(R.is_zero(R.mul(R.from_int(3), R.from_int(15))));
}

TEST(ResidueSplit, FieldHasSingleZeroIdeal) {
  const auto split = residue_split(ring_make("GF(3^2)"));
  ASSERT_EQ(split.count(), 1u);
  EXPECT_EQ(split.ideals()[0].label, "(0)");
  EXPECT_EQ(split.residue_fields()[0].to_string(), "GF(3^2);1,0,1");
  EXPECT_EQ(split.nilpotency_index(), 1);
}

TEST(ResidueSplit, Z12RadicalMatchesJacobsonOracle) {
  // Jacobson radical: x with 1 + x*y a unit for every y.
  std::set<std::int64_t> oracle;
  for (std::int64_t x = 0; x < 12; ++x) {
    bool in = true;
    for (std::int64_t y = 0; y < 12; ++y)
      if (std::gcd((1 + x * y) % 12, std::int64_t{12}) != 1) in = false;
    if (in) oracle.insert(x);
  }
  EXPECT_EQ(oracle, (std::set<std::int64_t>{0, 6}));
  const auto split = residue_split(ring_make("Z/12"));
  EXPECT_EQ(rep(split.radical_generator()), 6);
  std::set<std::int64_t> computed;
  for (std::int64_t x = 0; x < 12; ++x)
    if (split.in_radical(split.ring().from_int(x))) computed.insert(x);
  EXPECT_EQ(computed, oracle);
}

TEST(ResidueSplit, RejectsInfiniteRings) {
  EXPECT_THROW(residue_split(ring_make("Q")), DomainError);
  EXPECT_THROW(residue_split(ring_make("Zsqrt[-5]")), DomainError);
}

TEST(ResidueSplit, KernelOfReductionIsRadicalAndLiftIsSection) {
  for (const char* spec : {"Z/45", "Z/225", "prod(Z/9,GF(3^2),Z/10)"}) {
    const auto R = ring_make(spec);
    const auto split = residue_split(R);
    // J^nilpotency = 0 on the generator.
    EXPECT_TRUE(R.is_zero(R.pow(split.radical_generator(), split.nilpotency_index()))) << spec;
    for (std::uint64_t i = 0; i < *R.size(); ++i) {
      const auto x = R.element_at(i);
      const auto back = split.lift(split.project_all(x));
      EXPECT_TRUE(split.in_radical(R.sub(x, back))) << spec;
      const bool unit = is_unit(R, x).has_value();
      bool all_nonzero = true;
      for (std::size_t k = 0; k < split.count(); ++k)
        all_nonzero = all_nonzero && !split.residue_fields()[k].is_zero(split.project(k, x));
      EXPECT_EQ(unit, all_nonzero) << spec << " " << R.format(x);
    }
  }
}

TEST(RingProperties, AxiomsOnRandomTriples) {
  std::mt19937_64 rng(7);
  for (const auto& R : sample_rings()) {
    for (int it = 0; it < 200; ++it) {
      const auto a = R.random(rng), b = R.random(rng), c = R.random(rng);
      EXPECT_EQ(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c))) << R.to_string();
      EXPECT_EQ(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c))) << R.to_string();
      EXPECT_EQ(R.mul(a, b), R.mul(b, a)) << R.to_string();
      EXPECT_EQ(R.add(a, b), R.add(b, a)) << R.to_string();
      EXPECT_TRUE(R.is_zero(R.add(a, R.neg(a))));
      EXPECT_EQ(R.mul(a, R.one()), a);
      R.validate(R.mul(a, b));
    }
  }
}

TEST(RingProperties, FormatParseRoundTrip) {
  std::mt19937_64 rng(11);
  for (const auto& R : sample_rings())
    for (int it = 0; it < 100; ++it) {
      const auto a = R.random(rng);
      EXPECT_EQ(R.parse_elem(R.format(a)), a) << R.to_string() << " " << R.format(a);
    }
  const auto o = ring_make("Zsqrt[-5]");
  EXPECT_EQ(o.format(o.parse_elem("1+w")), "1+w");
  EXPECT_EQ(o.mul(o.parse_elem("w"), o.parse_elem("w")), o.from_int(-5));
  EXPECT_EQ(ring_make("Z/9").parse_elem("1/2"), ring_make("Z/9").from_int(5));
  EXPECT_THROW(ring_make("Z/9").parse_elem("1/3"), InvalidParameter);
  EXPECT_THROW(ring_make("Z/9").parse_elem("1+"), ParseError);
}

TEST(RingProperties, SignPinningInMu2) {
  // The only square root of 1 that is 1 at every residue field is 1 itself (2 invertible).
  for (const char* spec : {"Z/9", "Z/15", "Z/45", "Z/225", "prod(Z/9,GF(5^1))"}) {
    const auto R = ring_make(spec);
    const auto split = residue_split(R);
    for (const auto& eps : mu2(R).roots) {
      bool residually_one = true;
      for (std::size_t k = 0; k < split.count(); ++k)
        residually_one = residually_one && split.residue_fields()[k].is_one(split.project(k, eps));
      if (residually_one) EXPECT_TRUE(R.is_one(eps)) << spec;
    }
  }
}
