#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "ctrllab/exact.hpp"
#include "oracles.hpp"

using namespace ctrllab;
using namespace ctrllab::exact;

namespace {

IntVector basis(std::size_t n, std::size_t i) {
  IntVector e(n);
  e[i] = 1;
  return e;
}

IntVector ones(std::size_t n) { return IntVector(n, 1); }

}  // namespace

TEST(KalmanMatrix, SwapMatrix) {
  const IntSymMatrix a{{0, 1}, {1, 0}};
  EXPECT_EQ(kalman_matrix(a, int_vector({1, 0})), (IntMatrix{{1, 0}, {0, 1}}));
}

TEST(KalmanMatrix, IdentityRepeatsColumn) {
  EXPECT_EQ(kalman_matrix(int_identity(3), ones(3)), (IntMatrix{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}));
}

TEST(KalmanMatrix, PathGraphFromFirstVertex) {
  // e_1, A e_1 = e_2, A e_2 = e_1 + e_3
  EXPECT_EQ(kalman_matrix(path_graph(3), basis(3, 0)), (IntMatrix{{1, 0, 1}, {0, 1, 0}, {0, 0, 1}}));
}

TEST(KalmanMatrix, ColumnsAreKrylovIterates) {
  std::mt19937 gen(3);
  std::uniform_int_distribution<long> d(-4, 4);
  IntSymMatrix a(5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = i; j < 5; ++j) a.set(i, j, d(gen));
  IntVector b(5);
  for (auto& x : b) x = d(gen);
  const KalmanMatrix k = kalman_matrix(a, b);
  for (std::size_t c = 0; c + 1 < 5; ++c)
    for (std::size_t i = 0; i < 5; ++i) {
      Integer acc = 0;
      for (std::size_t j = 0; j < 5; ++j) acc += a(i, j) * k(j, c);
      EXPECT_EQ(k(i, c + 1), acc);
    }
}

TEST(KalmanMatrix, DimensionMismatchThrows) {
  EXPECT_THROW(kalman_matrix(path_graph(3), ones(2)), DimensionError);
  EXPECT_THROW(is_controllable_exact(path_graph(3), ones(4)), DimensionError);
}

TEST(RankExact, SmallCases) {
  EXPECT_EQ(rank_exact(int_identity(4).matrix()), 4u);
  EXPECT_EQ(rank_exact(IntMatrix{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}), 1u);
  // columns e_2, e_1 + e_3, 2 e_2
  EXPECT_EQ(rank_exact(IntMatrix{{0, 1, 0}, {1, 0, 2}, {0, 1, 0}}), 2u);
  EXPECT_EQ(rank_exact(IntMatrix(3, 3)), 0u);
}

TEST(RankExact, NoOverflowOnHugeEntries) {
  IntMatrix m(2, 2);
  m(0, 0) = Integer("123456789012345678901234567890");
  m(0, 1) = 1;
  m(1, 0) = m(0, 0) * 2;
  m(1, 1) = 2;
  EXPECT_EQ(rank_exact(m), 1u);
  m(1, 1) = 3;
  EXPECT_EQ(rank_exact(m), 2u);
  EXPECT_EQ(determinant_exact(m), m(0, 0));
}

TEST(RankExact, AgreesWithRationalElimination) {
  std::mt19937 gen(2016);
  std::uniform_int_distribution<long> entry(-3, 3);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  std::bernoulli_distribution sparse(0.4);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t r = dim(gen), c = dim(gen);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = sparse(gen) ? 0 : entry(gen);
    // Duplicate a row now and then so low-rank cases are common.
    if (r > 1 && t % 3 == 0)
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = 2 * m(0, j);
    ASSERT_EQ(rank_exact(m), oracle::rational_rank(m)) << "trial " << t;
    if (r == c) {
      ASSERT_EQ(determinant_exact(m), oracle::leibniz_det(m)) << "trial " << t;
    }
  }
}

TEST(IsControllableExact, PathGraph) {
  EXPECT_TRUE(is_controllable_exact(path_graph(3), basis(3, 0)));
  EXPECT_FALSE(is_controllable_exact(path_graph(3), basis(3, 1)));
}

TEST(IsControllableExact, CompleteGraphWithOnes) {
  for (std::size_t n = 2; n <= 12; ++n) EXPECT_FALSE(is_controllable_exact(complete_graph(n), ones(n))) << n;
}

TEST(IsControllableExact, ZeroInputNeverControllable) {
  EXPECT_FALSE(is_controllable_exact(int_diagonal({1, 2, 3}), IntVector(3)));
  EXPECT_FALSE(is_controllable_exact(IntSymMatrix(1), IntVector(1)));
  EXPECT_TRUE(is_controllable_exact(IntSymMatrix(1), ones(1)));
}

TEST(IsControllableExact, CapIsEnforced) {
  EXPECT_THROW(is_controllable_exact(path_graph(25), basis(25, 0)), CapExceeded);
  EXPECT_TRUE(is_controllable_exact(path_graph(25), basis(25, 0), ExactOptions{30}));
  EXPECT_THROW(is_controllable_exact(path_graph(5), basis(5, 0), ExactOptions{4}), CapExceeded);
}

TEST(IsControllableExact, ScalingInvariance) {
  std::mt19937 gen(11);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 200; ++t) {
    IntSymMatrix a(5);
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = i + 1; j < 5; ++j) a.set(i, j, coin(gen) ? 1 : 0);
    IntVector b(5);
    for (auto& x : b) x = coin(gen) ? 1 : 0;
    const bool base = is_controllable_exact(a, b);
    for (long c : {-1L, 2L, -7L, 1000003L}) {
      IntVector cb = b;
      for (auto& x : cb) x *= c;
      ASSERT_EQ(is_controllable_exact(a, cb), base);
    }
  }
}

// The Krylov space has dimension at most the number of distinct eigenvalues,
// so a repeated eigenvalue rules out every input.
TEST(IsControllableExact, KrylovDegreeBoundOnAllFourVertexGraphs) {
  const std::size_t n = 4;
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  int repeated = 0;
  for (unsigned g = 0; g < 64; ++g) {
    IntSymMatrix a(n);
    for (std::size_t e = 0; e < pairs.size(); ++e)
      if ((g >> e) & 1u) a.set(pairs[e].first, pairs[e].second, 1);
    if (has_simple_spectrum_exact(a)) continue;
    ++repeated;
    for (unsigned mask = 0; mask < 16; ++mask) {
      IntVector b(n);
      for (std::size_t i = 0; i < n; ++i) b[i] = (mask >> i) & 1u;
      EXPECT_FALSE(is_controllable_exact(a, b)) << "graph " << g << " input " << mask;
    }
  }
  EXPECT_GT(repeated, 0);
}

TEST(Charpoly, SmallCases) {
  EXPECT_EQ(charpoly_exact(IntSymMatrix{{0, 1}, {1, 0}}), (IntPolynomial{-1, 0, 1}));
  EXPECT_EQ(charpoly_exact(int_identity(2)), (IntPolynomial{1, -2, 1}));
  EXPECT_EQ(charpoly_exact(path_graph(3)), (IntPolynomial{0, -2, 0, 1}));
  EXPECT_EQ(charpoly_exact(IntSymMatrix(1)), (IntPolynomial{0, 1}));
}

TEST(Charpoly, MatchesDeterminantAtIntegerPoints) {
  std::mt19937 gen(5);
  std::uniform_int_distribution<long> d(-5, 5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 6;
    IntSymMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) a.set(i, j, d(gen));
    const IntPolynomial p = charpoly_exact(a);
    ASSERT_EQ(p.degree(), static_cast<long>(n));
    EXPECT_EQ(p.leading(), 1);
    for (long x : {-3L, -1L, 0L, 2L, 7L}) EXPECT_EQ(p(Integer(x)), oracle::charpoly_at(a, x)) << t;
  }
}

TEST(SimpleSpectrum, SmallCases) {
  EXPECT_TRUE(has_simple_spectrum_exact(IntSymMatrix{{0, 1}, {1, 0}}));
  EXPECT_FALSE(has_simple_spectrum_exact(int_identity(2)));
  EXPECT_FALSE(has_simple_spectrum_exact(complete_graph(3)));
  EXPECT_TRUE(has_simple_spectrum_exact(path_graph(3)));
  EXPECT_TRUE(has_simple_spectrum_exact(int_diagonal({1, 2, 3})));
  EXPECT_FALSE(has_simple_spectrum_exact(int_diagonal({4, -1, 4})));
}

TEST(Gcd, RecoversCommonFactor) {
  // (x-2)(x+1)^2 and its derivative share x+1
  const IntPolynomial p{2, 3, 0, -1};
  const IntPolynomial g = gcd_rational(p, p.derivative());
  EXPECT_EQ(g.degree(), 1);
  EXPECT_EQ(g(Integer(-1)), 0);
}

TEST(VandermondeLink, DiagonalWithOnesInput) {
  const std::vector<std::vector<long>> spectra{{1, 2, 3}, {-4, 0, 5, 9}, {3, -2, 7, 11, -6}, {0, 1}};
  for (const auto& l : spectra) {
    IntSymMatrix d(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) d.set(i, i, l[i]);
    EXPECT_TRUE(is_controllable_exact(d, ones(l.size())));
    // Row i of the Kalman matrix is (1, l_i, l_i^2, ...).
    EXPECT_EQ(determinant_exact(kalman_matrix(d, ones(l.size()))), oracle::vandermonde(l));
  }
}

TEST(VandermondeLink, RepeatedDiagonalEntryIsUncontrollable) {
  EXPECT_FALSE(is_controllable_exact(int_diagonal({2, 5, 2}), ones(3)));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_FALSE(is_controllable_exact(int_diagonal({1, 2, 3}), basis(3, i)));
}
