#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "orthcert/linalg.hpp"
#include "orthcert/modules.hpp"

using namespace orthcert;

namespace {

// Leibniz determinant over Z/n on plain integers, independent of the library.
std::int64_t leibniz_det(const std::vector<std::vector<std::int64_t>>& m, std::int64_t n) {
  const std::size_t d = m.size();
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (perm[i] > perm[j]) ++inversions;
    std::int64_t term = inversions % 2 ? n - 1 : 1;
    for (std::size_t i = 0; i < d; ++i) term = term * (((m[i][perm[i]] % n) + n) % n) % n;
    total = (total + term) % n;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Charpoly coefficients from signed sums of principal minors: c_{d-k} = (-1)^k e_k.
std::vector<std::int64_t> minor_charpoly(const std::vector<std::vector<std::int64_t>>& m, std::int64_t n) {
  const std::size_t d = m.size();
  std::vector<std::int64_t> c(d + 1, 0);
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < d; ++i)
      if (mask >> i & 1u) idx.push_back(i);
    std::vector<std::vector<std::int64_t>> sub(idx.size(), std::vector<std::int64_t>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) sub[a][b] = m[idx[a]][idx[b]];
    const std::int64_t minor = idx.empty() ? 1 : leibniz_det(sub, n);
    const std::size_t k = idx.size();
    const std::int64_t signed_minor = k % 2 ? (n - minor) % n : minor;
    c[d - k] = (c[d - k] + signed_minor) % n;
  }
  return c;
}

std::vector<std::vector<std::int64_t>> random_ints(std::size_t d, std::int64_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> dist(0, n - 1);
  std::vector<std::vector<std::int64_t>> m(d, std::vector<std::int64_t>(d));
  for (auto& row : m)
    for (auto& x : row) x = dist(rng);
  return m;
}

Poly ints_poly(const RingDesc& R, const std::vector<std::int64_t>& c) { return poly_from_ints(R, c); }

Vec vec(const RingDesc& R, std::initializer_list<std::int64_t> xs) {
  Vec v;
  for (auto x : xs) v.push_back(R.from_int(x));
  return v;
}

}  // namespace

TEST(Charpoly, SmallExamples) {
  const auto z7 = ring_make("Z/7");
  // [[1,2],[3,4]]: t^2 - 5t - 2.
  EXPECT_EQ(charpoly(z7, from_ints(z7, {{1, 2}, {3, 4}})), ints_poly(z7, {-2, -5, 1}));
  EXPECT_EQ(charpoly(z7, identity(z7, 3)), ints_poly(z7, {-1, 3, -3, 1}));
  const auto q = ring_make("Q");
  EXPECT_EQ(det(q, from_ints(q, {{2, 0, 1}, {1, 3, 2}, {1, 1, 2}})), q.from_int(6));  // 2*(6-2) + 1*(1-3)
}

TEST(Charpoly, MatchesPrincipalMinorOracle) {
  std::mt19937_64 rng(3);
  for (std::int64_t n : {6, 9, 45, 8}) {
    const auto R = RingDesc::modular(n);
    for (std::size_t d = 1; d <= 5; ++d)
      for (int it = 0; it < 10; ++it) {
        const auto ints = random_ints(d, n, rng);
        EXPECT_EQ(charpoly(R, from_ints(R, ints)), ints_poly(R, minor_charpoly(ints, n))) << "n=" << n;
        EXPECT_EQ(det(R, from_ints(R, ints)), R.from_int(leibniz_det(ints, n)));
      }
  }
}

TEST(Charpoly, CrtOverZ6AgreesWithFactors) {
  std::mt19937_64 rng(5);
  const auto z6 = RingDesc::modular(6);
  const auto split = residue_split(z6);
  for (int it = 0; it < 20; ++it) {
    const auto m = random_matrix(z6, 4, 4, rng);
    const auto f = charpoly(z6, m);
    for (std::size_t k = 0; k < split.count(); ++k) {
      const auto& F = split.residue_fields()[k];
      std::vector<RingElem> reduced;
      for (const auto& c : f.coeffs) reduced.push_back(split.project(k, c));
      EXPECT_EQ(make_poly(F, reduced), charpoly(F, reduce_at(split, m, k)));
    }
  }
}

TEST(Charpoly, CayleyHamiltonAcrossRings) {
  std::mt19937_64 rng(9);
  for (const char* spec : {"Z/45", "GF(3^2)", "prod(Z/9,GF(5^1))", "Q", "Zsqrt[-5]"}) {
    const auto R = ring_make(spec);
    for (std::size_t d = 1; d <= 4; ++d) {
      const auto m = random_matrix(R, d, d, rng);
      EXPECT_TRUE(is_zero(R, poly_eval(R, charpoly(R, m), m))) << spec;
    }
  }
}

TEST(Determinant, Multiplicative) {
  std::mt19937_64 rng(13);
  for (const char* spec : {"Z/45", "GF(3^2)", "Q", "Zsqrt[-5]", "Z/8"}) {
    const auto R = ring_make(spec);
    for (int it = 0; it < 10; ++it) {
      const auto a = random_matrix(R, 3, 3, rng), b = random_matrix(R, 3, 3, rng);
      EXPECT_EQ(det(R, mul(R, a, b)), R.mul(det(R, a), det(R, b))) << spec;
    }
  }
}

TEST(Inverse, UnitDeterminantOnly) {
  const auto z9 = ring_make("Z/9");
  const auto m = from_ints(z9, {{1, 2}, {3, 4}});  // det = -2, a unit
  const auto inv = inverse(z9, m);
  ASSERT_TRUE(inv);
  EXPECT_EQ(mul(z9, m, *inv), identity(z9, 2));
  EXPECT_FALSE(inverse(z9, from_ints(z9, {{3, 0}, {0, 1}})));
}

TEST(PolyDivideLinear, Examples) {
  const auto z9 = ring_make("Z/9");
  // (t+1)(t-1) = t^2 - 1 divided by t + 1: quotient t - 1, remainder 0.
  const auto res = poly_divide_linear(z9, ints_poly(z9, {-1, 0, 1}), z9.from_int(-1));
  EXPECT_EQ(res.quotient, ints_poly(z9, {-1, 1}));
  EXPECT_TRUE(z9.is_zero(res.remainder));
  // t^2 + 3t + 5 at t = -1 is 3.
  const auto r2 = poly_divide_linear(z9, ints_poly(z9, {5, 3, 1}), z9.from_int(-1));
  EXPECT_EQ(r2.remainder, z9.from_int(3));
  EXPECT_EQ(r2.quotient, ints_poly(z9, {2, 1}));
  EXPECT_EQ(reflection_charpoly(z9, 3), ints_poly(z9, {1, -1, -1, 1}));
}

TEST(PolyDivideLinear, ReconstructsDividend) {
  std::mt19937_64 rng(17);
  const auto R = ring_make("Z/45");
  for (int it = 0; it < 50; ++it) {
    std::vector<RingElem> c;
    for (int i = 0; i < 5; ++i) c.push_back(R.random(rng));
    const auto f = make_poly(R, c);
    const auto root = R.random(rng);
    const auto div = poly_divide_linear(R, f, root);
    const auto linear = make_poly(R, {R.neg(root), R.one()});
    const auto back = poly_add(R, poly_mul(R, linear, div.quotient), make_poly(R, {div.remainder}));
    EXPECT_EQ(back, f);
  }
}

TEST(Ranks, ResidueRanks) {
  const auto R = ring_make("Z/45");
  const auto split = residue_split(R);
  const auto m = from_ints(R, {{3, 0}, {0, 5}});
  EXPECT_EQ(rank_at_residue(split, m, 0), 1u);  // mod 3
  EXPECT_EQ(rank_at_residue(split, m, 1), 1u);  // mod 5
  EXPECT_EQ(nullity_over_field(split.residue_fields()[0], reduce_at(split, m, 0)), 1u);
}

TEST(Howell, CanonicalSpan) {
  // Duplicate generators do not change the form.
  EXPECT_EQ(howell_form(4, {{2, 0}}, 2), howell_form(4, {{2, 0}, {2, 0}}, 2));
  // A unimodular row is its own Howell form.
  const auto h = howell_form(4, {{1, 2}}, 2);
  ASSERT_FALSE(h.empty());
  EXPECT_EQ(h[0], (std::vector<std::int64_t>{1, 2}));
  // span{(2, 1)} over Z/4 contains 2*(2,1) = (0, 2); Howell form lists it.
  const auto h2 = howell_form(4, {{2, 1}}, 2);
  EXPECT_NE(std::find(h2.begin(), h2.end(), std::vector<std::int64_t>{0, 2}), h2.end());
}

TEST(Howell, EqualSpansEqualFormsOracle) {
  // Oracle: enumerate the span explicitly and compare span equality with form equality.
  std::mt19937_64 rng(23);
  const std::int64_t n = 12;
  std::uniform_int_distribution<std::int64_t> dist(0, n - 1);
  auto span = [&](const std::vector<std::vector<std::int64_t>>& gens) {
    std::set<std::vector<std::int64_t>> s{{0, 0}};
    bool grew = true;
    while (grew) {
      grew = false;
      auto copy = s;
      for (const auto& v : copy)
        for (const auto& g : gens) {
          std::vector<std::int64_t> w{(v[0] + g[0]) % n, (v[1] + g[1]) % n};
          grew = s.insert(w).second || grew;
        }
    }
    return s;
  };
  std::vector<std::vector<std::vector<std::int64_t>>> samples;
  for (int it = 0; it < 40; ++it) {
    std::vector<std::vector<std::int64_t>> g;
    for (int k = 0; k < 2; ++k) g.push_back({dist(rng) / 2 * 2, dist(rng) / 3 * 3});
    samples.push_back(g);
  }
  for (const auto& a : samples)
    for (const auto& b : samples) EXPECT_EQ(span(a) == span(b), howell_form(n, a, 2) == howell_form(n, b, 2));
}

TEST(ModuleBasis, StandardBasisIsFree) {
  const auto R = ring_make("Z/9");
  const auto m = module_basis(R, {vec(R, {1, 0, 0}), vec(R, {0, 1, 0}), vec(R, {0, 0, 1})}, 3);
  EXPECT_TRUE(m.free);
  EXPECT_EQ(m.rank, 3u);
  const auto c = coordinates(R, m, vec(R, {4, 5, 6}));
  ASSERT_TRUE(c);
  Vec recon(3, R.zero());
  for (std::size_t i = 0; i < m.basis.size(); ++i)
    for (std::size_t j = 0; j < 3; ++j) recon[j] = R.add(recon[j], R.mul((*c)[i], m.basis[i][j]));
  EXPECT_EQ(recon, vec(R, {4, 5, 6}));
}

TEST(ModuleBasis, TorsionIsNotFree) {
  const auto R = ring_make("Z/9");
  const auto m = module_basis(R, {vec(R, {3, 0, 0})}, 3);
  EXPECT_FALSE(m.free);
  EXPECT_FALSE(m.reason.empty());
  // Unequal ranks across atoms: Z/15 with (3) gives rank 0 mod 3, rank 1 mod 5.
  const auto z15 = ring_make("Z/15");
  EXPECT_FALSE(module_basis(z15, {vec(z15, {3, 0})}, 2).free);
  EXPECT_TRUE(module_basis(z15, {vec(z15, {2, 0}), vec(z15, {4, 7})}, 2).free);
}

TEST(ModuleBasis, DirectSummandWithCoordinates) {
  std::mt19937_64 rng(29);
  for (const char* spec : {"Z/45", "GF(3^2)", "prod(Z/9,GF(5^1))", "Z/8"}) {
    const auto R = ring_make(spec);
    // Image of a random invertible matrix applied to the first two basis vectors: free rank 2.
    Matrix g;
    do g = random_matrix(R, 4, 4, rng);
    while (!is_unit(R, det(R, g)));
    std::vector<Vec> gens;
    for (std::size_t i = 0; i < 2; ++i) {
      Vec row;
      for (std::size_t j = 0; j < 4; ++j) row.push_back(g(i, j));
      gens.push_back(row);
    }
    // Redundant generator.
    Vec extra(4);
    for (std::size_t j = 0; j < 4; ++j) extra[j] = R.add(gens[0][j], R.mul(R.from_int(3), gens[1][j]));
    gens.push_back(extra);
    const auto m = module_basis(R, gens, 4);
    ASSERT_TRUE(m.free) << spec << " " << m.reason;
    EXPECT_EQ(m.rank, 2u);
    EXPECT_TRUE(coordinates(R, m, extra));
    Vec outside(4);
    for (std::size_t j = 0; j < 4; ++j) outside[j] = g(2, j);
    EXPECT_FALSE(coordinates(R, m, outside)) << spec;
  }
}
