#pragma once

// Reference computations used only by tests. Each one takes a different
// route from the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include <gmpxx.h>

#include "ctrllab/matrix.hpp"

namespace oracle {

using ctrllab::IntMatrix;

/// Rank by textbook Gaussian elimination over Q (mpq_class, full division).
inline std::size_t rational_rank(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<mpq_class>> a(rows, std::vector<mpq_class>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m(i, j);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const mpq_class f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

/// Leibniz expansion over all permutations; n <= 7 or so.
inline mpz_class leibniz_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  mpz_class total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    mpz_class term = (inversions % 2) ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= m(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// det(xI - A) at an integer point x, by Leibniz.
inline mpz_class charpoly_at(const ctrllab::IntSymMatrix& a, long x) {
  const std::size_t n = a.size();
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? mpz_class(x) : mpz_class(0)) - a(i, j);
  return leibniz_det(m);
}

/// prod_{i<j} (l_j - l_i).
inline mpz_class vandermonde(const std::vector<long>& l) {
  mpz_class p = 1;
  for (std::size_t i = 0; i < l.size(); ++i)
    for (std::size_t j = i + 1; j < l.size(); ++j) p *= (l[j] - l[i]);
  return p;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Exact small-ball probability for Rademacher sums: enumerate all 2^n sign
/// patterns and take the best closed window of width 2*delta.
inline double rademacher_small_ball(const std::vector<double>& x, double delta) {
  const std::size_t n = x.size();
  std::vector<double> sums;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += ((mask >> k) & 1u) ? x[k] : -x[k];
    sums.push_back(s);
  }
  std::sort(sums.begin(), sums.end());
  std::size_t best = 0, lo = 0;
  for (std::size_t hi = 0; hi < sums.size(); ++hi) {
    while (sums[hi] - sums[lo] > 2 * delta + 1e-12) ++lo;
    best = std::max(best, hi - lo + 1);
  }
  return static_cast<double>(best) / static_cast<double>(sums.size());
}

}  // namespace oracle
