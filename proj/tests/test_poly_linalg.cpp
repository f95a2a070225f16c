#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <set>

#include "convring/errors.hpp"
#include "convring/harness.hpp"
#include "convring/polynomial_forms.hpp"
#include "convring/zp_linalg.hpp"
#include "convring/zq_linalg.hpp"
#include "support.hpp"

using namespace convring;
using namespace convring::testing;

namespace {

using Vec = std::vector<Residue>;

PolyMatrix pm(const RingContext& ring, const std::vector<std::vector<std::vector<std::int64_t>>>& e) {
  return PolyMatrix::from_integers(ring, e);
}

// Triple loop over residues; shares nothing with Poly multiplication.
PolyMatrix naive_product(const PolyMatrix& a, const PolyMatrix& b) {
  const RingContext& ring = a.ring();
  PolyMatrix c(ring, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Vec acc(std::max(0, a.degree()) + std::max(0, b.degree()) + 1, 0);
      for (std::size_t k = 0; k < a.cols(); ++k)
        for (std::size_t s = 0; s < a.at(i, k).coeffs().size(); ++s)
          for (std::size_t t = 0; t < b.at(k, j).coeffs().size(); ++t)
            acc[s + t] = (acc[s + t] + a.at(i, k).coeffs()[s] * b.at(k, j).coeffs()[t]) % ring.q();
      c.at(i, j) = Poly(ring, acc);
    }
  return c;
}

std::set<Vec> enumerate_coset(const RingContext& ring, const ZqCoset& c) {
  std::set<Vec> out;
  if (!c.feasible) return out;
  std::vector<Residue> range;
  for (auto o : c.log_orders) {
    Residue r = 1;
    for (unsigned i = 0; i < o; ++i) r *= ring.p();
    range.push_back(r);
  }
  std::vector<Residue> k(range.size(), 0);
  for (;;) {
    Vec x = c.base;
    for (std::size_t g = 0; g < k.size(); ++g)
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = ring.add(x[i], ring.mul(k[g], c.generators[g][i]));
    out.insert(x);
    std::size_t g = 0;
    while (g < k.size() && ++k[g] == range[g]) k[g++] = 0;
    if (g == k.size()) break;
  }
  return out;
}

// Calls visit for every x in Z_q^n.
void for_all_vectors(Residue q, std::size_t n, const std::function<void(const Vec&)>& visit) {
  Vec x(n, 0);
  for (;;) {
    visit(x);
    std::size_t i = 0;
    while (i < n && ++x[i] == q) x[i++] = 0;
    if (i == n) return;
  }
}

ConstantMatrix random_constant(const RingContext& ring, std::size_t rows, std::size_t cols,
                               std::mt19937_64& rng) {
  ConstantMatrix a(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a.at(i, j) = rng() % ring.q();
  return a;
}

const RingContext kF2 = RingContext::prime_field(2);
const RingContext kF3 = RingContext::prime_field(3);
const RingContext kZ8(2, 3);
const RingContext kZ9(3, 2);

}  // namespace

TEST(PolyMatrix, ProductExamples) {
  const PolyMatrix a = pm(kZ8, {{{1, 2}, {3}}, {{0, 0, 5}, {7, 1}}});
  EXPECT_EQ(PolyMatrix::identity(kZ8, 2) * a, a);
  EXPECT_EQ(pm(kZ8, {{{1, 1}}}) * pm(kZ8, {{{3}}}), pm(kZ8, {{{3, 3}}}));
}

TEST(PolyMatrixProperty, ProductMatchesNaive) {
  std::mt19937_64 rng(21);
  for (const auto& ring : {kZ8, kZ9, RingContext(2, 2)}) {
    for (int t = 0; t < 60; ++t) {
      const std::size_t m = 1 + rng() % 3, k = 1 + rng() % 3, n = 1 + rng() % 3;
      const PolyMatrix a = random_poly_matrix(ring, m, k, rng() % 4, ring.q(), rng);
      const PolyMatrix b = random_poly_matrix(ring, k, n, rng() % 4, ring.q(), rng);
      ASSERT_EQ(a * b, naive_product(a, b));
      ASSERT_EQ((a + a) - a, a);
      ASSERT_EQ(a.scaled(3), a + a + a);
    }
  }
}

TEST(PolyMatrix, DimensionMismatchThrows) {
  EXPECT_THROW(PolyMatrix(kZ8, 2, 3) * PolyMatrix(kZ8, 2, 3), UsageError);
  EXPECT_THROW(PolyMatrix(kZ8, 2, 3) + PolyMatrix(kZ8, 3, 2), UsageError);
}

TEST(PolyMatrix, Projection) {
  // Entries 5 and 2 of the Z_8 window matrix project to 1 and 0.
  EXPECT_EQ(pm(kZ8, {{{5}, {2}}}).project(), pm(kF2, {{{1}, {0}}}));
  EXPECT_TRUE(PolyMatrix(kZ8, 2, 2).project().is_zero());
  const Poly f = Poly::from_integers(kZ9, std::vector<std::int64_t>{3, 6});
  EXPECT_TRUE(f.project().is_zero());
  EXPECT_EQ(f.project().degree(), kZeroDegree);
}

TEST(Smith, Examples) {
  const PolyMatrix d = pm(kF2, {{{1}, {}}, {{}, {0, 1}}});
  const SmithForm sd = smith_form(d);
  EXPECT_EQ(sd.s, d);
  EXPECT_EQ(sd.factors[1], Poly(kF2, {0, 1}));

  const SmithForm z = smith_form(pm(kF2, {{{0, 1}, {0, 1}}, {{}, {}}}));
  ASSERT_EQ(z.factors.size(), 2u);
  EXPECT_EQ(z.factors[0], Poly(kF2, {0, 1}));
  EXPECT_TRUE(z.factors[1].is_zero());
}

TEST(Smith, NonObservableGeneratorStack) {
  const PolyMatrix g = pm(kF3, {{{1, 1}, {1, 1}, {1, 1}}, {{1}, {1}, {0}}});
  // gcd of 2x2 minors, computed directly.
  Poly minors_gcd(kF3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b)
      minors_gcd = gcd(minors_gcd, g.at(0, a) * g.at(1, b) - g.at(0, b) * g.at(1, a));
  const SmithForm sf = smith_form(g);
  EXPECT_EQ(sf.factors[0] * sf.factors[1], minors_gcd);
  EXPECT_EQ(sf.factors[1], Poly(kF3, {1, 1}));
  EXPECT_FALSE(is_left_prime(g));
}

TEST(SmithProperty, DecompositionAndInvariance) {
  std::mt19937_64 rng(22);
  for (const auto& f : {kF2, kF3, RingContext::prime_field(5)}) {
    for (int t = 0; t < 40; ++t) {
      const std::size_t m = 1 + rng() % 3, n = 1 + rng() % 3;
      const PolyMatrix a = random_poly_matrix(f, m, n, rng() % 3, f.p(), rng);
      const SmithForm sf = smith_form(a);
      ASSERT_EQ(sf.u * a * sf.v, sf.s);
      ASSERT_EQ(sf.v * sf.v_inv, PolyMatrix::identity(f, n));
      ASSERT_TRUE(determinant(sf.u).is_constant() && !determinant(sf.u).is_zero());
      for (std::size_t i = 0; i < sf.factors.size(); ++i) {
        ASSERT_EQ(sf.s.at(i, i), sf.factors[i]);
        if (!sf.factors[i].is_zero()) ASSERT_EQ(sf.factors[i].lead(), 1u);
        if (i + 1 < sf.factors.size()) ASSERT_TRUE(sf.factors[i].divides(sf.factors[i + 1]));
      }
      const auto l = random_elementary_product(f, m, 4, 2, rng);
      const auto r = random_elementary_product(f, n, 4, 2, rng);
      ASSERT_EQ(smith_form(l.u * a * r.u).factors, sf.factors);
    }
  }
}

TEST(LeftPrime, Examples) {
  EXPECT_TRUE(is_left_prime(pm(kF2, {{{1}, {}, {}}, {{}, {1}, {}}})));
  EXPECT_TRUE(is_left_prime(pm(kF2, {{{1, 1}, {1}}})));
  EXPECT_THROW(is_left_prime(pm(kF2, {{{1}}, {{1}}})), UsageError);
}

TEST(Completion, Examples) {
  const PolyMatrix a = pm(kF2, {{{1}, {}, {}}});
  const PolyMatrix n = unimodular_complete(a);
  const Poly d = determinant(PolyMatrix::vstack(a, n));
  EXPECT_TRUE(d.is_constant() && !d.is_zero());

  const PolyMatrix b = pm(kF3, {{{1, 1}, {1}}});
  const PolyMatrix nb = unimodular_complete(b);
  // det [[1+D, 1], [x, y]] = (1+D) y - x must be a nonzero constant.
  const Poly db = b.at(0, 0) * nb.at(0, 1) - b.at(0, 1) * nb.at(0, 0);
  EXPECT_TRUE(db.is_constant() && !db.is_zero());

  EXPECT_THROW(unimodular_complete(pm(kF3, {{{1, 1}, {1, 1}, {1, 1}}, {{1}, {1}, {0}}})), NotLeftPrime);
}

TEST(CompletionProperty, DeterminantIsUnit) {
  std::mt19937_64 rng(23);
  for (const auto& f : {kF2, kF3}) {
    for (int t = 0; t < 40; ++t) {
      const std::size_t n = 2 + rng() % 3, k = 1 + rng() % (n - 1);
      const auto e = random_elementary_product(f, n, 6, 2, rng);
      const PolyMatrix a = e.u.row_range(0, k);
      const Poly d = determinant(PolyMatrix::vstack(a, unimodular_complete(a)));
      ASSERT_TRUE(d.is_constant() && !d.is_zero());
    }
  }
}

TEST(CompletionProperty, NonsingularForFullRank) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 30; ++t) {
    const PolyMatrix a = random_poly_matrix(kF3, 2, 3, 2, 3, rng);
    if (smith_form(a).factors[1].is_zero()) {
      EXPECT_THROW(nonsingular_complete(a), ConstructionError);
      continue;
    }
    EXPECT_FALSE(determinant(PolyMatrix::vstack(a, nonsingular_complete(a))).is_zero());
  }
}

TEST(Unimodular, LiftExamples) {
  EXPECT_EQ(lift_unimodular(PolyMatrix::identity(kF2, 3), kZ8), PolyMatrix::identity(kZ8, 3));
  const PolyMatrix u = lift_unimodular(pm(kF2, {{{1}, {1}}, {{1}, {}}}), kZ8);
  EXPECT_EQ(u, pm(kZ8, {{{1}, {1}}, {{1}, {}}}));
  // Explicit inverse [[0, 1], [1, -1]].
  EXPECT_EQ(invert_unimodular(u), pm(kZ8, {{{}, {1}}, {{1}, {7}}}));
  EXPECT_THROW(lift_unimodular(pm(kF2, {{{0, 1}}}), kZ8), UsageError);
}

TEST(Unimodular, InverseExamples) {
  EXPECT_EQ(invert_unimodular(PolyMatrix::identity(kZ9, 2)), PolyMatrix::identity(kZ9, 2));
  // E(0, 1, f) with f = 3 + 2D + 5D^2.
  PolyMatrix e = PolyMatrix::identity(kZ8, 3);
  e.at(0, 1) = Poly(kZ8, {3, 2, 5});
  PolyMatrix e_inv = PolyMatrix::identity(kZ8, 3);
  e_inv.at(0, 1) = -Poly(kZ8, {3, 2, 5});
  EXPECT_EQ(invert_unimodular(e), e_inv);
  EXPECT_THROW(invert_unimodular(pm(kZ8, {{{2}}})), NotUnimodular);
  EXPECT_THROW(invert_unimodular(pm(kZ8, {{{1, 1}}})), NotUnimodular);
}

TEST(UnimodularProperty, LiftedProductsInvert) {
  std::mt19937_64 rng(25);
  for (const auto& ring : {kZ8, kZ9, RingContext(2, 5), RingContext(5, 2)}) {
    for (int t = 0; t < 30; ++t) {
      const std::size_t n = 1 + rng() % 4;
      const auto e = random_elementary_product(ring.field(), n, 6, 2, rng);
      ASSERT_EQ(inverse_zp(e.u), e.u_inv);
      PolyMatrix u = lift_unimodular(e.u, ring) + random_poly_matrix(ring, n, n, 2, ring.q(), rng).scaled(ring.p());
      const PolyMatrix v = invert_unimodular(u);
      ASSERT_EQ(u * v, PolyMatrix::identity(ring, n));
      ASSERT_EQ(v * u, PolyMatrix::identity(ring, n));
    }
  }
}

TEST(Adjugate, Examples) {
  const auto [adj_i, det_i] = adjugate(PolyMatrix::identity(kZ8, 3));
  EXPECT_EQ(adj_i, PolyMatrix::identity(kZ8, 3));
  EXPECT_EQ(det_i, Poly::constant(kZ8, 1));

  const Poly a(kZ8, {1, 2}), b(kZ8, {3}), c(kZ8, {0, 5}), d(kZ8, {7, 0, 1});
  PolyMatrix m(kZ8, 2, 2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  const auto [adj, det] = adjugate(m);
  EXPECT_EQ(det, a * d - b * c);
  EXPECT_EQ(adj.at(0, 0), d);
  EXPECT_EQ(adj.at(0, 1), -b);
  EXPECT_EQ(adj.at(1, 0), -c);
  EXPECT_EQ(adj.at(1, 1), a);
}

TEST(AdjugateProperty, Contract) {
  std::mt19937_64 rng(26);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng() % 4;
    const PolyMatrix m = random_poly_matrix(kZ8, n, n, rng() % 4, 8, rng);
    const auto [adj, det] = adjugate(m);
    PolyMatrix scaled_id(kZ8, n, n);
    for (std::size_t i = 0; i < n; ++i) scaled_id.at(i, i) = det;
    ASSERT_EQ(adj * m, scaled_id);
    ASSERT_EQ(m * adj, scaled_id);
  }
}

TEST(SolveAffine, WorkedStageOne) {
  const ConstantMatrix a = ConstantMatrix::from_rows(kF2, {{1, 1, 1, 0, 0, 0, 0},
                                                           {0, 1, 1, 0, 0, 0, 0},
                                                           {1, 0, 1, 0, 0, 0, 0},
                                                           {0, 0, 0, 1, 0, 0, 0},
                                                           {0, 0, 1, 0, 0, 0, 0},
                                                           {0, 1, 0, 1, 0, 0, 0},
                                                           {1, 1, 0, 0, 1, 1, 1},
                                                           {0, 0, 1, 1, 1, 0, 1},
                                                           {0, 0, 0, 1, 0, 1, 1}});
  const AffineSet s = solve_affine_zp(a, Vec{1, 0, 1, 1, 0, 1, 0, 0, 1});
  ASSERT_TRUE(s.feasible());
  EXPECT_EQ(s.particular(), (Vec{1, 0, 0, 1, 1, 0, 0}));
  EXPECT_TRUE(s.basis().empty());
}

TEST(SolveAffine, WorkedStageTwo) {
  const ConstantMatrix a = ConstantMatrix::from_rows(kF2, {{1, 1, 1, 0, 0, 0, 0},
                                                           {0, 1, 1, 0, 0, 0, 0},
                                                           {0, 0, 0, 1, 0, 0, 0},
                                                           {1, 1, 0, 0, 1, 1, 1},
                                                           {0, 0, 1, 1, 1, 0, 1}});
  const AffineSet s = solve_affine_zp(a, Vec{0, 0, 1, 1, 1});
  std::set<Vec> want;
  for (Residue c1 = 0; c1 < 2; ++c1)
    for (Residue c2 = 0; c2 < 2; ++c2) want.insert({0, c1, c1, 1, (c1 + c2) % 2, 1, c2});
  std::set<Vec> got;
  s.for_each([&](const Vec& x) {
    got.insert(x);
    return true;
  });
  EXPECT_EQ(got, want);
  EXPECT_EQ(s.dimension(), 2u);
}

TEST(SolveAffine, ZeroSystem) {
  const AffineSet s = solve_affine_zp(ConstantMatrix(kF3, 2, 3), Vec{0, 0});
  EXPECT_EQ(s.particular(), (Vec{0, 0, 0}));
  EXPECT_EQ(s.basis(), (std::vector<Vec>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  EXPECT_FALSE(solve_affine_zp(ConstantMatrix(kF3, 1, 2), Vec{1}).feasible());
}

TEST(SolveAffineProperty, MatchesBruteForce) {
  std::mt19937_64 rng(27);
  for (const auto& f : {kF2, kF3, RingContext::prime_field(5)}) {
    for (int t = 0; t < 80; ++t) {
      const std::size_t rows = 1 + rng() % 4;
      const std::size_t cols = 1 + rng() % (f.p() == 2 ? 8 : 5);
      ConstantMatrix a = random_constant(f, rows, cols, rng);
      if (t % 3 == 0)
        for (std::size_t j = 0; j < cols; ++j) a.at(rows - 1, j) = a.at(0, j);
      Vec b(rows);
      for (auto& x : b) x = rng() % f.p();
      std::set<Vec> brute;
      for_all_vectors(f.p(), cols, [&](const Vec& x) {
        if (a.apply(x) == b) brute.insert(x);
      });
      const AffineSet s = solve_affine_zp(a, b);
      std::set<Vec> got;
      if (s.feasible())
        s.for_each([&](const Vec& x) {
          got.insert(x);
          return true;
        });
      ASSERT_EQ(got, brute);
      if (s.feasible()) {
        std::size_t size = 1;
        for (std::size_t i = 0; i < cols - rank(a); ++i) size *= f.p();
        ASSERT_EQ(got.size(), size);
        for (const auto& x : brute) ASSERT_TRUE(s.contains(x));
      }
    }
  }
}

TEST(McCoy, Examples) {
  EXPECT_TRUE(mccoy_unique(ConstantMatrix::identity(kZ8, 3)));
  EXPECT_FALSE(mccoy_unique(ConstantMatrix::from_rows(kZ8, {{2}})));
}

TEST(McCoyProperty, AgreesWithInjectivity) {
  std::mt19937_64 rng(28);
  for (const auto& ring : {RingContext(2, 2), kZ8, kZ9}) {
    for (int t = 0; t < 60; ++t) {
      const std::size_t cols = 1 + rng() % 4;
      const std::size_t rows = 1 + rng() % std::max<std::size_t>(1, 12 / cols);
      ConstantMatrix a = random_constant(ring, rows, cols, rng);
      if (t % 4 == 0) {
        const std::size_t j = rng() % cols;
        for (std::size_t i = 0; i < rows; ++i) a.at(i, j) = ring.mul(a.at(i, j), ring.p());
      }
      bool injective = true;
      std::set<Vec> images;
      for_all_vectors(ring.q(), cols, [&](const Vec& x) { injective = images.insert(a.apply(x)).second && injective; });
      ASSERT_EQ(mccoy_unique(a), injective);
      if (t % 4 == 0) ASSERT_FALSE(mccoy_unique(a));
    }
  }
}

TEST(ZqSolveProperty, MatchesBruteForce) {
  std::mt19937_64 rng(29);
  for (const auto& ring : {RingContext(2, 2), kZ8, kZ9}) {
    for (int t = 0; t < 60; ++t) {
      const std::size_t cols = 1 + rng() % 3, rows = 1 + rng() % 3;
      ConstantMatrix a = random_constant(ring, rows, cols, rng);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
          if (rng() % 2) a.at(i, j) = ring.mul(a.at(i, j), ring.p());
      Vec b(rows);
      if (t % 2) {
        Vec x(cols);
        for (auto& v : x) v = rng() % ring.q();
        b = a.apply(x);
      } else {
        for (auto& v : b) v = rng() % ring.q();
      }
      std::set<Vec> brute;
      for_all_vectors(ring.q(), cols, [&](const Vec& x) {
        if (a.apply(x) == b) brute.insert(x);
      });
      const ZqCoset c = solve_zq(a, b);
      const std::set<Vec> got = enumerate_coset(ring, c);
      ASSERT_EQ(got, brute);
      std::size_t log = 0;
      for (auto o : c.log_orders) log += o;
      if (c.feasible) {
        std::size_t size = 1;
        for (std::size_t i = 0; i < log; ++i) size *= ring.p();
        ASSERT_EQ(got.size(), size);
      }

      const ZqSmith s = smith_zq(a);
      ASSERT_EQ(s.u * s.u_inv, ConstantMatrix::identity(ring, rows));
      const ConstantMatrix d = s.u * a * s.v;
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
          const Residue want = i == j && i < s.valuations.size() ? ring.p_power(s.valuations[i]) : 0;
          ASSERT_EQ(d.at(i, j), want);
        }
    }
  }
}

TEST(ZqModuleProperty, MatchesSpan) {
  std::mt19937_64 rng(30);
  for (const auto& ring : {RingContext(2, 2), kZ9}) {
    for (int t = 0; t < 40; ++t) {
      const std::size_t rows = 1 + rng() % 3, cols = 1 + rng() % 3;
      ConstantMatrix g = random_constant(ring, rows, cols, rng);
      for (std::size_t j = 0; j < cols; ++j)
        if (rng() % 2)
          for (std::size_t i = 0; i < rows; ++i) g.at(i, j) = ring.mul(g.at(i, j), ring.p());
      std::set<Vec> span;
      for_all_vectors(ring.q(), cols, [&](const Vec& c) { span.insert(g.apply(c)); });
      ASSERT_EQ(enumerate_coset(ring, column_module(g)), span);
    }
  }
}
