#include <gtest/gtest.h>

#include "orthcert/azumaya.hpp"
#include "orthcert/errors.hpp"

using namespace orthcert;

namespace {

// Basis products e_p * e_q = coef * e_r on (1, i, j, k), written out from i^2 = a, j^2 = b,
// ij = -ji = k. Independent of the library's coordinate formula.
std::vector<mpq_class> table_mul(const mpq_class& a, const mpq_class& b, const std::vector<mpq_class>& x,
                                 const std::vector<mpq_class>& y) {
  struct Entry {
    int r;
    mpq_class c;
  };
  const Entry t[4][4] = {
      {{0, 1}, {1, 1}, {2, 1}, {3, 1}},
      {{1, 1}, {0, a}, {3, 1}, {2, a}},
      {{2, 1}, {3, -1}, {0, b}, {1, -b}},
      {{3, 1}, {2, -a}, {1, b}, {0, -a * b}},
  };
  std::vector<mpq_class> z(4, 0);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) z[t[p][q].r] += t[p][q].c * x[p] * y[q];
  return z;
}

std::vector<mpq_class> as_q(const AlgElem& x) {
  std::vector<mpq_class> out;
  for (const auto& e : x.entries()) out.push_back(std::get<mpq_class>(e));
  return out;
}

AlgebraDesc hamilton(std::array<int, 4> pivot) {
  const auto Q = ring_make("Q");
  return AlgebraDesc::quaternion(Q, Q.from_int(-1), Q.from_int(-1),
                                 {Q.from_int(pivot[0]), Q.from_int(pivot[1]), Q.from_int(pivot[2]), Q.from_int(pivot[3])});
}

AlgElem quat(const AlgebraDesc& A, std::array<int, 4> c) {
  const auto& F = A.base();
  return A.from_coords({F.from_int(c[0]), F.from_int(c[1]), F.from_int(c[2]), F.from_int(c[3])});
}

std::vector<AlgebraDesc> sample_algebras() {
  const auto z45 = ring_make("Z/45"), z9 = ring_make("Z/9"), f9 = ring_make("GF(3^2)"), q = ring_make("Q");
  const auto f7 = ring_make("GF(7^1)");
  return {AlgebraDesc::split(z45, identity(z45, 3)),
          AlgebraDesc::split(z9, from_ints(z9, {{1, 0}, {0, 2}})),
          AlgebraDesc::split(z9, from_ints(z9, {{0, 1}, {1, 0}})),
          AlgebraDesc::split(f9, identity(f9, 2)),
          AlgebraDesc::split(q, from_ints(q, {{2, 1}, {1, 3}})),
          hamilton({0, 1, 0, 0}),
          AlgebraDesc::quaternion(f7, f7.from_int(3), f7.from_int(5), {f7.zero(), f7.zero(), f7.one(), f7.one()})};
}

}  // namespace

TEST(AlgebraDesc, RejectsBadInput) {
  const auto z9 = ring_make("Z/9");
  EXPECT_THROW(AlgebraDesc::split(z9, from_ints(z9, {{1, 1}, {0, 1}})), InvalidParameter);
  EXPECT_THROW(AlgebraDesc::split(z9, from_ints(z9, {{3, 0}, {0, 1}})), InvalidParameter);
  const auto z8 = ring_make("Z/8");
  EXPECT_THROW(AlgebraDesc::split(z8, identity(z8, 2)), InvalidParameter);
  EXPECT_THROW(hamilton({1, 1, 0, 0}), InvalidParameter);
  const auto A = AlgebraDesc::split(z9, identity(z9, 2));
  EXPECT_THROW(involution(A, identity(z9, 3)), DomainError);
}

TEST(Involution, SplitIdentityGramIsTranspose) {
  std::mt19937_64 rng(1);
  const auto R = ring_make("Z/45");
  const auto A = AlgebraDesc::split(R, identity(R, 3));
  for (int it = 0; it < 20; ++it) {
    const auto x = A.random(rng);
    EXPECT_EQ(involution(A, x), transpose(x));
    EXPECT_EQ(involution(A, involution(A, x)), x);
  }
}

TEST(Involution, QuaternionAgainstTableOracle) {
  const auto A = hamilton({0, 1, 0, 0});
  const mpq_class a = -1, b = -1;
  // sigma(x) = i * conj(x) * i^-1 with i^-1 = -i, evaluated with the table.
  for (int k = 0; k < 4; ++k) {
    std::vector<mpq_class> e(4, 0), conj(4, 0);
    e[k] = 1;
    conj = e;
    for (int m = 1; m < 4; ++m) conj[m] = -conj[m];
    const auto expect = table_mul(a, b, table_mul(a, b, {0, 1, 0, 0}, conj), {0, -1, 0, 0});
    EXPECT_EQ(as_q(involution(A, A.basis(k))), expect) << k;
  }
  // Fixed: 1, j, k; negated: i.
  EXPECT_EQ(involution(A, quat(A, {0, 0, 1, 0})), quat(A, {0, 0, 1, 0}));
  EXPECT_EQ(involution(A, quat(A, {0, 1, 0, 0})), quat(A, {0, -1, 0, 0}));
}

TEST(Quaternion, MultiplicationMatchesTable) {
  std::mt19937_64 rng(2);
  const auto Q = ring_make("Q");
  const auto A = AlgebraDesc::quaternion(Q, Q.from_int(2), Q.from_int(-3), {Q.zero(), Q.one(), Q.zero(), Q.zero()});
  for (int it = 0; it < 50; ++it) {
    const auto x = A.random(rng), y = A.random(rng);
    EXPECT_EQ(as_q(A.mul(x, y)), table_mul(2, -3, as_q(x), as_q(y)));
  }
}

TEST(ReducedNorm, Examples) {
  const auto A = hamilton({0, 1, 0, 0});
  EXPECT_EQ(reduced_norm(A, quat(A, {1, 1, 1, 1})), A.base().from_int(4));
  EXPECT_EQ(reduced_trace(A, quat(A, {3, 1, 1, 1})), A.base().from_int(6));
  const auto z9 = ring_make("Z/9");
  const auto S = AlgebraDesc::split(z9, identity(z9, 3));
  const auto u = diagonal(z9, {z9.from_int(-1), z9.one(), z9.one()});
  EXPECT_EQ(reduced_norm(S, u), z9.from_int(8));
  EXPECT_EQ(reduced_charpoly(S, u), reflection_charpoly(z9, 3));
}

TEST(ReducedNorm, PropertiesAcrossAlgebras) {
  std::mt19937_64 rng(3);
  for (const auto& A : sample_algebras()) {
    const auto& R = A.base();
    for (int it = 0; it < 30; ++it) {
      const auto x = A.random(rng), y = A.random(rng);
      EXPECT_EQ(reduced_norm(A, A.mul(x, y)), R.mul(reduced_norm(A, x), reduced_norm(A, y))) << A.describe();
      EXPECT_EQ(involution(A, A.mul(x, y)), A.mul(involution(A, y), involution(A, x))) << A.describe();
      EXPECT_EQ(involution(A, involution(A, x)), x);
      EXPECT_EQ(reduced_charpoly(A, involution(A, x)), reduced_charpoly(A, x)) << A.describe();
      EXPECT_EQ(reduced_norm(A, involution(A, x)), reduced_norm(A, x));
      EXPECT_EQ(reduced_trace(A, involution(A, x)), reduced_trace(A, x));
      const auto f = reduced_charpoly(A, x);
      EXPECT_EQ(f.degree(), static_cast<int>(A.degree()));
      // Cayley-Hamilton for the reduced charpoly, evaluated in A.
      AlgElem acc = A.zero();
      for (std::size_t k = f.coeffs.size(); k-- > 0;) acc = A.add(A.mul(acc, x), A.scalar(f.coeffs[k]));
      EXPECT_EQ(acc, A.zero()) << A.describe();
      if (A.shape() == AlgShape::Quaternion) {
        const auto bar = quaternion_conjugate(A, x);
        EXPECT_EQ(A.mul(x, bar), A.scalar(reduced_norm(A, x)));
        EXPECT_EQ(A.mul(bar, x), A.scalar(reduced_norm(A, x)));
      }
    }
  }
}

TEST(CheckOrthogonal, SplitIdentityOverZ45) {
  const auto R = ring_make("Z/45");
  const auto report = check_orthogonal(AlgebraDesc::split(R, identity(R, 3)));
  EXPECT_TRUE(report.orthogonal);
  ASSERT_EQ(report.residues.size(), 2u);
  for (const auto& r : report.residues) EXPECT_EQ(r.symmetric_dim, 6u);
  EXPECT_EQ(report.residues[0].label, "(3)");
  EXPECT_EQ(report.residues[1].label, "(5)");
}

TEST(CheckOrthogonal, Quaternions) {
  const auto good = check_orthogonal(hamilton({0, 1, 0, 0}));
  EXPECT_TRUE(good.orthogonal);
  EXPECT_EQ(good.residues.at(0).symmetric_dim, 3u);
  const auto bad = check_orthogonal(hamilton({1, 0, 0, 0}));
  EXPECT_FALSE(bad.orthogonal);
  EXPECT_EQ(bad.residues.at(0).symmetric_dim, 1u);
  EXPECT_FALSE(bad.first_failure.empty());
}

TEST(CheckOrthogonal, AllSampleAlgebras) {
  for (const auto& A : sample_algebras()) EXPECT_TRUE(check_orthogonal(A).orthogonal) << A.describe();
}

TEST(QuotientCtx, ResiduesAndHomomorphism) {
  std::mt19937_64 rng(4);
  const auto z45 = ring_make("Z/45");
  const auto ctx = quotient_ctx(AlgebraDesc::split(z45, identity(z45, 2)));
  ASSERT_EQ(ctx.count(), 2u);
  EXPECT_EQ(ctx.residues()[0].base().to_string(), "GF(3^1)");
  EXPECT_EQ(ctx.residues()[1].base().to_string(), "GF(5^1)");
  for (int it = 0; it < 30; ++it) {
    const auto x = ctx.source().random(rng), y = ctx.source().random(rng);
    for (std::size_t i = 0; i < ctx.count(); ++i) {
      const auto& Ai = ctx.residues()[i];
      EXPECT_EQ(ctx.reduce(i, involution(ctx.source(), x)), involution(Ai, ctx.reduce(i, x)));
      EXPECT_EQ(ctx.reduce(i, ctx.source().mul(x, y)), Ai.mul(ctx.reduce(i, x), ctx.reduce(i, y)));
    }
    EXPECT_EQ(ctx.reduce_all(ctx.lift(ctx.reduce_all(x))), ctx.reduce_all(x));
  }
  const auto z9 = ring_make("Z/9");
  const auto c2 = quotient_ctx(AlgebraDesc::split(z9, from_ints(z9, {{1, 0}, {0, 2}})));
  const auto f3 = c2.residues()[0].base();
  EXPECT_EQ(c2.residues()[0].gram(), from_ints(f3, {{1, 0}, {0, 2}}));
  EXPECT_THROW(quotient_ctx(hamilton({0, 1, 0, 0})), DomainError);
}

TEST(QuotientCtx, UnimodularityDetectedResidually) {
  const auto z45 = ring_make("Z/45");
  std::mt19937_64 rng(6);
  for (int it = 0; it < 100; ++it) {
    auto m = random_matrix(z45, 2, 2, rng);
    m(1, 0) = m(0, 1);
    const bool unit = is_unit(z45, det(z45, m)).has_value();
    const auto split = residue_split(z45);
    bool all_nonzero = true;
    for (std::size_t i = 0; i < split.count(); ++i)
      all_nonzero = all_nonzero && !split.residue_fields()[i].is_zero(det(split.residue_fields()[i], reduce_at(split, m, i)));
    EXPECT_EQ(unit, all_nonzero);
  }
}

TEST(SqrtOnePlusNilpotent, Examples) {
  const auto z9 = ring_make("Z/9");
  const auto A = AlgebraDesc::split(z9, identity(z9, 2));
  EXPECT_EQ(sqrt_one_plus_nilpotent(A, A.zero()), A.one());
  // (1 + 3 * 2^-1) = 1 + 15 = 16 = 7 mod 9, and 7^2 = 49 = 4 = 1 + 3.
  EXPECT_EQ(sqrt_one_plus_nilpotent(A, A.scalar(z9.from_int(3))), A.scalar(z9.from_int(7)));
  EXPECT_THROW(sqrt_one_plus_nilpotent(A, from_ints(z9, {{0, 3}, {0, 0}})), InvalidParameter);
  EXPECT_THROW(sqrt_one_plus_nilpotent(A, A.scalar(z9.one())), InvalidParameter);
}

TEST(SqrtOnePlusNilpotent, RandomSymmetricRadicalElements) {
  std::mt19937_64 rng(5);
  for (const char* spec : {"Z/27", "Z/225", "Z/243"}) {
    const auto R = ring_make(spec);
    const auto A = AlgebraDesc::split(R, from_ints(R, {{1, 1}, {1, 2}}));
    const auto split = residue_split(R);
    for (int it = 0; it < 50; ++it) {
      const auto m = A.random(rng);
      const auto eps = A.scale(split.radical_generator(), A.add(m, involution(A, m)));
      const auto s = sqrt_one_plus_nilpotent(A, eps);
      EXPECT_EQ(A.mul(s, s), A.add(A.one(), eps)) << spec;
      EXPECT_EQ(involution(A, s), s);
      EXPECT_EQ(A.mul(s, eps), A.mul(eps, s));
    }
  }
}
