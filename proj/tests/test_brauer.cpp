#include <gtest/gtest.h>

#include <array>

#include "orthcert/brauer.hpp"
#include "orthcert/errors.hpp"

using namespace orthcert;

namespace {

AlgebraDesc split_alg(const std::string& ring, const std::vector<std::vector<std::int64_t>>& gram) {
  const auto R = ring_make(ring);
  return AlgebraDesc::split(R, from_ints(R, gram));
}

AlgebraDesc identity_alg(const std::string& ring, std::size_t d) {
  const auto R = ring_make(ring);
  return AlgebraDesc::split(R, identity(R, d));
}

// Hamilton quaternions with integer coordinates, multiplied from the sign table of i, j, k.
using IQ = std::array<long, 4>;
IQ hmul(const IQ& x, const IQ& y) {
  return {x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3],
          x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2],
          x[0] * y[2] - x[1] * y[3] + x[2] * y[0] + x[3] * y[1],
          x[0] * y[3] + x[1] * y[2] - x[2] * y[1] + x[3] * y[0]};
}

// Norm -1 input: the witness composed with two random special orthogonal elements.
AlgElem random_norm_minus_one(const AlgebraDesc& A, std::mt19937_64& rng) {
  const AlgElem w = norm_minus_one(A).u;
  return A.mul(random_special_orthogonal(A, rng), A.mul(w, random_special_orthogonal(A, rng)));
}

// Rank of an idempotent over a residue field equals its trace read as an integer.
std::int64_t residue_trace(const ResidueSplit& S, const Matrix& e, std::size_t i) {
  const auto& F = S.residue_fields()[i];
  return std::get<Residues>(trace(F, reduce_at(S, e, i)))[0];
}

}  // namespace

TEST(NormMinusOne, DegreeOne) {
  for (const char* ring : {"Z/9", "Z/15", "GF(5^1)", "Q"}) {
    const auto A = identity_alg(ring, 1);
    const auto w = norm_minus_one(A);
    EXPECT_EQ(w.u, A.scalar(A.base().from_int(-1))) << ring;
    EXPECT_EQ(w.charpoly, poly_from_ints(A.base(), {1, 1})) << ring;
  }
}

TEST(NormMinusOne, IdentityGramPicksFirstBasisVector) {
  const auto A = identity_alg("Z/9", 3);
  const auto& R = A.base();
  const auto w = norm_minus_one(A);
  EXPECT_EQ(w.x, (Vec{R.one(), R.zero(), R.zero()}));
  EXPECT_EQ(w.u, from_ints(R, {{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  // (t+1)(t-1)^2 = t^3 - t^2 - t + 1
  EXPECT_EQ(w.charpoly, poly_from_ints(R, {1, -1, -1, 1}));
}

TEST(NormMinusOne, HyperbolicPlane) {
  const auto A = split_alg("GF(3^1)", {{0, 1}, {1, 0}});
  const auto& R = A.base();
  const auto w = norm_minus_one(A);
  EXPECT_EQ(w.x, (Vec{R.one(), R.one()}));
  EXPECT_EQ(w.u, from_ints(R, {{0, -1}, {-1, 0}}));
  EXPECT_EQ(det(R, w.u), R.from_int(-1));
}

TEST(NormMinusOne, ResidueVectorsAreCombined) {
  // Mod 3 both diagonal entries vanish (x = e1 + e2); mod 5, e1 works. CRT: x = (1, 10).
  const auto A = split_alg("Z/15", {{3, 1}, {1, 0}});
  const auto& R = A.base();
  const auto w = norm_minus_one(A);
  EXPECT_EQ(w.x, (Vec{R.one(), R.from_int(10)}));
  // g(x,x) = 3 + 2*10 = 23 = 8, inverse 2; u = 1 - 4 x x^T g.
  const Matrix xxg = from_ints(R, {{1 * 3 + 10, 1}, {10 * 3 + 100, 10}});
  EXPECT_EQ(w.u, sub(R, identity(R, 2), scale(R, R.from_int(4), xxg)));
  EXPECT_NO_THROW(verify_norm_minus_one(A, w));
}

TEST(NormMinusOne, RandomGramsGiveExactCharpoly) {
  std::mt19937_64 rng(11);
  for (const char* ring : {"Z/9", "Z/15", "Z/225", "GF(3^2)", "prod(Z/9,GF(5^1))"}) {
    const auto R = ring_make(ring);
    for (std::size_t d = 1; d <= 5; ++d) {
      const auto A = AlgebraDesc::split(R, random_unimodular_gram(R, d, rng));
      const auto w = norm_minus_one(A);
      EXPECT_TRUE(is_isometry(A, w.u));
      EXPECT_EQ(det(R, w.u), R.from_int(-1));
      EXPECT_EQ(charpoly(R, w.u), reflection_charpoly(R, static_cast<unsigned>(d)));
    }
  }
}

TEST(NormMinusOne, VerifierRejectsWrongCharpoly) {
  const auto A = identity_alg("Z/9", 3);
  auto w = norm_minus_one(A);
  w.charpoly = poly_pow(A.base(), poly_from_ints(A.base(), {-1, 1}), 3);
  try {
    verify_norm_minus_one(A, w);
    FAIL() << "accepted (t-1)^3";
  } catch (const IdentityViolation& e) {
    EXPECT_EQ(e.identity(), "charpoly");
  }
}

TEST(CorrectToCanonical, CanonicalInputIsUnchanged) {
  const auto A = identity_alg("Z/9", 2);
  const auto u = from_ints(A.base(), {{-1, 0}, {0, 1}});
  const auto c = correct_to_canonical(A, u);
  EXPECT_EQ(c.lift.lifted, A.one());
  EXPECT_EQ(c.v, u);
}

TEST(CorrectToCanonical, ResidueCharpolyAfterCorrection) {
  std::mt19937_64 rng(5);
  for (auto [ring, d] : std::vector<std::pair<const char*, std::size_t>>{{"Z/9", 2}, {"Z/15", 4}, {"Z/45", 3}}) {
    const auto A = identity_alg(ring, d);
    const auto ctx = quotient_ctx(A);
    for (int trial = 0; trial < 5; ++trial) {
      const auto u = random_norm_minus_one(A, rng);
      const auto c = correct_to_canonical(A, u);
      EXPECT_TRUE(is_isometry(A, c.v));
      EXPECT_EQ(det(A.base(), c.v), A.base().from_int(-1));
      for (std::size_t i = 0; i < ctx.count(); ++i) {
        const auto& F = ctx.residues()[i].base();
        EXPECT_EQ(charpoly(F, ctx.reduce(i, c.v)), reflection_charpoly(F, static_cast<unsigned>(d))) << ring;
      }
    }
  }
}

TEST(CorrectToCanonical, RejectsSpecialInput) {
  const auto A = identity_alg("Z/9", 2);
  EXPECT_THROW(correct_to_canonical(A, A.one()), InvalidParameter);
  EXPECT_THROW(correct_to_canonical(A, from_ints(A.base(), {{1, 1}, {0, 1}})), InvalidParameter);
}

TEST(FunctionalEquation, Examples) {
  const auto A = identity_alg("Z/9", 2);
  EXPECT_TRUE(functional_equation_check(A, A.one()));
  EXPECT_TRUE(functional_equation_check(A, from_ints(A.base(), {{-1, 0}, {0, 1}})));
  EXPECT_THROW(functional_equation_check(A, from_ints(A.base(), {{1, 1}, {0, 1}})), InvalidParameter);
}

TEST(FunctionalEquation, RandomIsometries) {
  std::mt19937_64 rng(17);
  const auto q = ring_make("Q");
  std::vector<AlgebraDesc> algebras{identity_alg("Z/45", 3), split_alg("Z/9", {{0, 1}, {1, 0}}),
                                    identity_alg("GF(3^2)", 2), split_alg("Q", {{2, 1}, {1, 3}})};
  algebras.push_back(AlgebraDesc::quaternion(q, q.from_int(-1), q.from_int(-3), {q.zero(), q.one(), q.zero(), q.zero()}));
  for (const auto& A : algebras)
    for (int trial = 0; trial < 20; ++trial) {
      AlgElem v = random_special_orthogonal(A, rng);
      if (trial % 2 && A.shape() == AlgShape::Split) v = A.mul(v, norm_minus_one(A).u);
      ASSERT_TRUE(is_isometry(A, v));
      EXPECT_TRUE(functional_equation_check(A, v)) << A.describe();
      EXPECT_EQ(reduced_charpoly(A, involution(A, v)), reduced_charpoly(A, v));
    }
}

TEST(SplitCertificate, HandComputedDegreeTwo) {
  const auto A = identity_alg("Z/9", 2);
  const auto& R = A.base();
  const auto u = from_ints(R, {{-1, 0}, {0, 1}});
  const auto cert = split_certificate(A, u);
  EXPECT_EQ(cert.v, u);
  EXPECT_EQ(cert.f, poly_from_ints(R, {-1, 0, 1}));
  EXPECT_EQ(cert.g, poly_from_ints(R, {-1, 1}));
  EXPECT_EQ(cert.r, poly_from_ints(R, {1}));
  EXPECT_EQ(cert.alpha, R.from_int(7));
  // 7^-1 = 4; e = 4 (u - 1) = diag(-8, 0) = diag(1, 0); e' = -4 (u + 1) = diag(0, 1).
  EXPECT_EQ(cert.e, from_ints(R, {{1, 0}, {0, 0}}));
  EXPECT_EQ(cert.e_prime, from_ints(R, {{0, 0}, {0, 1}}));
  EXPECT_EQ(cert.basis.size(), 2u);
  EXPECT_TRUE(cert.iso_check);
}

TEST(SplitCertificate, DegreeOne) {
  const auto A = identity_alg("Z/15", 1);
  const auto& R = A.base();
  const auto cert = split_certificate(A, A.scalar(R.from_int(-1)));
  EXPECT_EQ(cert.f, poly_from_ints(R, {1, 1}));
  EXPECT_EQ(cert.g, poly_from_ints(R, {1}));
  EXPECT_EQ(cert.alpha, R.one());
  EXPECT_EQ(cert.e, A.one());
  EXPECT_EQ(cert.basis.size(), 1u);
}

TEST(SplitCertificate, RandomInputsOverSemilocalRings) {
  std::mt19937_64 rng(23);
  for (const char* ring : {"Z/45", "Z/225", "Z/15", "prod(Z/9,GF(3^2))"}) {
    const auto R = ring_make(ring);
    const ResidueSplit S(R);
    for (std::size_t d : {2u, 3u, 4u}) {
      const auto A = AlgebraDesc::split(R, random_unimodular_gram(R, d, rng));
      const auto cert = split_certificate(A, random_norm_minus_one(A, rng));
      EXPECT_EQ(A.mul(cert.e, cert.e), cert.e);
      for (std::size_t i = 0; i < S.count(); ++i) EXPECT_EQ(residue_trace(S, cert.e, i), 1) << ring;
      EXPECT_EQ(cert.basis.size(), d);
      EXPECT_NO_THROW(verify_split(A, cert));
    }
  }
}

TEST(SplitCertificate, RightRegularPreservesCharpoly) {
  std::mt19937_64 rng(29);
  const auto A = identity_alg("Z/45", 3);
  const auto& R = A.base();
  const auto cert = split_certificate(A, random_norm_minus_one(A, rng));
  const auto eA = module_basis(R, cert.basis, A.dimension());
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = A.random(rng);
    EXPECT_EQ(charpoly(R, right_regular(A, eA, a)), charpoly(R, a));
  }
  // x -> x a reverses products.
  const auto a = A.random(rng), b = A.random(rng);
  EXPECT_EQ(right_regular(A, eA, A.mul(a, b)), mul(R, right_regular(A, eA, b), right_regular(A, eA, a)));
}

TEST(SplitCertificate, TamperingIsNamed) {
  const auto A = identity_alg("Z/9", 2);
  const auto& R = A.base();
  const auto cert = split_certificate(A, from_ints(R, {{-1, 0}, {0, 1}}));
  auto expect_violation = [&](SplitCertificate c, const std::string& name) {
    try {
      verify_split(A, c);
      FAIL() << "accepted tampering for " << name;
    } catch (const IdentityViolation& e) {
      EXPECT_EQ(e.identity(), name);
    }
  };
  auto c1 = cert;
  // diag(2, 0) squares to diag(4, 0).
  c1.e(0, 0) = R.from_int(2);
  expect_violation(c1, "e^2=e");
  auto c2 = cert;
  c2.alpha = R.from_int(1);
  expect_violation(c2, "g=(t+1)r+alpha");
  auto c3 = cert;
  c3.f = poly_from_ints(R, {1, -2, 1});
  expect_violation(c3, "f=charpoly");
  auto c4 = cert;
  c4.basis.pop_back();
  expect_violation(c4, "basis in eA");
}

TEST(QuaternionProbe, MatchesIntegerOracleAtHeightOne) {
  // sigma(x) = i conj(x) i^-1 with i^-1 = -i; isometries satisfy sigma(x) x = 1.
  std::size_t oracle = 0;
  for (long a = -1; a <= 1; ++a)
    for (long b = -1; b <= 1; ++b)
      for (long c = -1; c <= 1; ++c)
        for (long d = -1; d <= 1; ++d) {
          const IQ x{a, b, c, d};
          const IQ s = hmul(hmul({0, 1, 0, 0}, {a, -b, -c, -d}), {0, -1, 0, 0});
          if (hmul(s, x) == IQ{1, 0, 0, 0}) ++oracle;
        }
  const auto q = ring_make("Q");
  const auto H = AlgebraDesc::quaternion(q, q.from_int(-1), q.from_int(-1), {q.zero(), q.one(), q.zero(), q.zero()});
  const auto probe = quaternion_probe(H, 1);
  EXPECT_EQ(probe.candidates, 81u);
  EXPECT_EQ(probe.isometries.size(), oracle);
  EXPECT_TRUE(probe.all_nrd_one);
}

TEST(QuaternionProbe, DivisionAndSplitCases) {
  const auto q = ring_make("Q");
  const std::array<RingElem, 4> pivot_i{q.zero(), q.one(), q.zero(), q.zero()};
  const auto H = AlgebraDesc::quaternion(q, q.from_int(-1), q.from_int(-1), pivot_i);
  const auto division = quaternion_probe(H, 3);
  EXPECT_EQ(division.candidates, 15u * 15u * 15u * 15u);
  EXPECT_FALSE(division.isometries.empty());
  EXPECT_TRUE(division.all_nrd_one);
  EXPECT_FALSE(division.minus_one.has_value());
  EXPECT_EQ(division.conclusion, "no counterexample within bound");
  EXPECT_NE(std::find(division.isometries.begin(), division.isometries.end(), H.one()), division.isometries.end());

  const auto M = AlgebraDesc::quaternion(q, q.one(), q.one(), pivot_i);
  const auto split = quaternion_probe(M, 3);
  ASSERT_TRUE(split.minus_one.has_value());
  EXPECT_TRUE(is_isometry(M, *split.minus_one));
  EXPECT_EQ(reduced_norm(M, *split.minus_one), q.from_int(-1));
  EXPECT_EQ(split.conclusion, "norm -1 witness found");
}
