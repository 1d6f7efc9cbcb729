#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ctrllab/errors.hpp"
#include "ctrllab/matrix.hpp"

// Tolerance-free controllability and spectrum decisions for integer systems.
namespace ctrllab::exact {

struct ExactOptions {
  /// Largest dimension accepted by the Kalman-rank decider. Krylov entries
  /// grow like |A|^n in bit size, so elimination cost explodes past this.
  std::size_t max_dim = 24;
};

/// Columns b, Ab, ..., A^{n-1} b.
using KalmanMatrix = IntMatrix;

inline void require_same_dimension(const IntSymMatrix& a, const IntVector& b) {
  if (a.size() != b.size())
    throw DimensionError("matrix is " + std::to_string(a.size()) + "x" + std::to_string(a.size()) +
                         " but input vector has length " + std::to_string(b.size()));
}

inline KalmanMatrix kalman_matrix(const IntSymMatrix& a, const IntVector& b) {
  require_same_dimension(a, b);
  const std::size_t n = a.size();
  KalmanMatrix k(n, n);
  IntVector col = b;
  IntVector next(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) k(i, c) = col[i];
    if (c + 1 == n) break;
    for (std::size_t i = 0; i < n; ++i) {
      Integer acc = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (sgn(a(i, j)) != 0) acc += a(i, j) * col[j];
      next[i] = std::move(acc);
    }
    std::swap(col, next);
  }
  return k;
}

struct Elimination {
  std::size_t rank = 0;
  /// Determinant for square input, 0 otherwise or when singular.
  Integer determinant = 0;
};

/// Fraction-free (Bareiss) row echelon reduction.
///
/// Columns without a nonzero candidate below the current pivot row are
/// skipped, which keeps every intermediate an integer minor of the input and
/// every division exact.
inline Elimination bareiss(IntMatrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  Integer prev = 1;
  std::size_t r = 0;
  bool odd_swaps = false;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && sgn(m(piv, c)) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      m.swap_rows(piv, r);
      odd_swaps = !odd_swaps;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer t = m(r, c) * m(i, j) - m(i, c) * m(r, j);
        mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  Elimination out;
  out.rank = r;
  if (rows == cols && r == rows && rows > 0) out.determinant = odd_swaps ? Integer(-prev) : prev;
  if (rows == 0 && cols == 0) out.determinant = 1;
  return out;
}

/// Rank over the rationals.
inline std::size_t rank_exact(const IntMatrix& m) { return bareiss(m).rank; }

inline Integer determinant_exact(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant of a non-square matrix");
  return bareiss(m).determinant;
}

inline bool is_zero(const IntVector& b) {
  for (const auto& x : b)
    if (sgn(x) != 0) return false;
  return true;
}

/// True iff the Kalman matrix has full rank. b = 0 is never controllable.
inline bool is_controllable_exact(const IntSymMatrix& a, const IntVector& b, const ExactOptions& opts = {}) {
  require_same_dimension(a, b);
  if (a.size() > opts.max_dim)
    throw CapExceeded("exact controllability requested at n=" + std::to_string(a.size()) +
                      " above the cap " + std::to_string(opts.max_dim) + "; use the float PBH decider");
  if (is_zero(b)) return false;
  return rank_exact(kalman_matrix(a, b)) == a.size();
}

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Integer polynomial, coefficients stored lowest degree first. The zero
/// polynomial has no coefficients.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }
  IntPolynomial(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    trim();
  }

  /// -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }

  const Integer& operator[](std::size_t k) const { return c_[k]; }
  const std::vector<Integer>& coefficients() const noexcept { return c_; }
  const Integer& leading() const { return c_.back(); }

  IntPolynomial derivative() const {
    std::vector<Integer> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * static_cast<unsigned long>(k));
    return IntPolynomial(std::move(d));
  }

  Integer operator()(const Integer& x) const {
    Integer acc = 0;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }
  std::vector<Integer> c_;
};

/// det(xI - A) by the Faddeev-LeVerrier recurrence
///   M_k = A M_{k-1} + c_{n-k+1} I,   c_{n-k} = -tr(A M_k) / k.
/// For integer A every M_k and c_j is an integer and each division by k
/// is exact.
inline IntPolynomial charpoly_exact(const IntSymMatrix& a) {
  const std::size_t n = a.size();
  std::vector<Integer> c(n + 1);
  c[n] = 1;
  IntMatrix m(n, n);  // M_0 = 0
  IntMatrix am(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    IntMatrix next(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next(i, j) = am(i, j);
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = std::move(next);
    // A M_k, and its trace
    Integer tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Integer acc = 0;
        for (std::size_t l = 0; l < n; ++l)
          if (sgn(a(i, l)) != 0) acc += a(i, l) * m(l, j);
        am(i, j) = std::move(acc);
        if (i == j) tr += am(i, i);
      }
    Integer q;
    mpz_divexact_ui(q.get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
    c[n - k] = -q;
  }
  return IntPolynomial(std::move(c));
}

namespace detail {

using RatPoly = std::vector<mpq_class>;

inline void trim(RatPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

/// Remainder of a / b over Q; b nonzero.
inline RatPoly remainder(RatPoly a, const RatPoly& b) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (!a.empty() && a.size() - 1 >= db) {
    const mpq_class f = a.back() / b.back();
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t k = 0; k <= db; ++k) a[shift + k] -= f * b[k];
    a.pop_back();  // leading term cancels exactly
    trim(a);
  }
  return a;
}

}  // namespace detail

/// Monic gcd over Q, returned with rational coefficients scaled to a
/// primitive integer polynomial.
inline IntPolynomial gcd_rational(const IntPolynomial& p, const IntPolynomial& q) {
  detail::RatPoly a, b;
  for (const auto& x : p.coefficients()) a.emplace_back(x);
  for (const auto& x : q.coefficients()) b.emplace_back(x);
  detail::trim(a);
  detail::trim(b);
  while (!b.empty()) {
    detail::RatPoly r = detail::remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return {};
  // Clear denominators, then divide out the content.
  mpz_class l = 1;
  for (const auto& x : a) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> out;
  mpz_class g = 0;
  for (const auto& x : a) {
    mpq_class y = x * l;
    out.push_back(y.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
  }
  if (sgn(out.back()) < 0) g = -g;
  for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return IntPolynomial(std::move(out));
}

/// True iff all n eigenvalues are distinct, i.e. gcd(p, p') is constant for
/// the characteristic polynomial p.
inline bool has_simple_spectrum_exact(const IntSymMatrix& a) {
  const IntPolynomial p = charpoly_exact(a);
  return gcd_rational(p, p.derivative()).degree() == 0;
}

}  // namespace ctrllab::exact
