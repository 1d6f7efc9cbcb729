#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctrllab/ensembles.hpp"
#include "ctrllab/errors.hpp"
#include "ctrllab/exact.hpp"
#include "ctrllab/matrix.hpp"
#include "ctrllab/rng.hpp"
#include "ctrllab/spectral.hpp"

// Minimal controllability by exhaustive search over input supports.
namespace ctrllab::minctrl {

using spectral::Decision;
using spectral::EigenSystem;
using spectral::Method;
using spectral::Tolerances;

/// Indices are 0-based.
struct BasisScan {
  std::vector<std::size_t> controllable;
  std::vector<std::size_t> indeterminate;  // float method only
};

namespace detail {

inline const IntSymMatrix& require_exact(const SystemMatrix& a, const exact::ExactOptions& opts) {
  if (!a.integer) throw ParameterError("exact method requires an integer system matrix");
  if (a.size() > opts.max_dim)
    throw CapExceeded("exact method requested at n=" + std::to_string(a.size()) + " above the cap " +
                      std::to_string(opts.max_dim));
  return *a.integer;
}

inline IntVector indicator(std::size_t n, std::span<const std::size_t> support) {
  IntVector b(n);
  for (std::size_t i : support) b[i] = 1;
  return b;
}

/// Advances `c` (strictly increasing indices < n) to the next combination
/// in lexicographic order; false when exhausted.
inline bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t pos = k; pos-- > 0;) {
    if (c[pos] < n - k + pos) {
      ++c[pos];
      for (std::size_t q = pos + 1; q < k; ++q) c[q] = c[q - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Basis scan from a precomputed eigensystem: one factorization, n sweeps.
inline BasisScan basis_scan_float(const EigenSystem& es, const Tolerances& tol = {}) {
  BasisScan out;
  const std::size_t n = es.size();
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    e(static_cast<Eigen::Index>(i)) = 1.0;
    const auto v = spectral::pbh_verdict(es, e, tol);
    if (v.decision == Decision::controllable) out.controllable.push_back(i);
    else if (v.decision == Decision::indeterminate) out.indeterminate.push_back(i);
  }
  return out;
}

inline BasisScan basis_scan(const SystemMatrix& a, Method method, const Tolerances& tol = {},
                            const exact::ExactOptions& opts = {}) {
  if (method == Method::float_pbh) return basis_scan_float(spectral::eig_sym(a.real), tol);
  const IntSymMatrix& m = detail::require_exact(a, opts);
  BasisScan out;
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n);
    e[i] = 1;
    if (exact::is_controllable_exact(m, e, opts)) out.controllable.push_back(i);
  }
  return out;
}

/// A support S admits a controllable input iff the spectrum is simple and
/// every eigenvector has some coordinate in S that is not (numerically) zero.
inline bool support_feasibility(const EigenSystem& es, std::span<const std::size_t> support,
                                const Tolerances& tol = {}) {
  if (support.empty()) throw ParameterError("support_feasibility: support must be nonempty");
  if (!(spectral::min_gap(es) > tol.gap_tol * std::max(1.0, es.norm()))) return false;
  for (Eigen::Index j = 0; j < es.vectors.cols(); ++j) {
    double best = 0.0;
    for (std::size_t i : support) {
      if (i >= es.size()) throw ParameterError("support index out of range");
      best = std::max(best, std::abs(es.vectors(static_cast<Eigen::Index>(i), j)));
    }
    if (!(best > tol.ortho_tol)) return false;
  }
  return true;
}

inline bool support_feasibility(const RealSymMatrix& a, std::span<const std::size_t> support,
                                const Tolerances& tol = {}) {
  return support_feasibility(spectral::eig_sym(a), support, tol);
}

enum class EntryMode { binary01, generic_random };

enum class SearchStatus {
  found,
  /// Spectrum not simple: no input vector of any kind is controllable.
  infeasible,
  /// Searched every support up to kmax without success.
  exhausted,
};

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::found: return "found";
    case SearchStatus::infeasible: return "infeasible";
    case SearchStatus::exhausted: return "exhausted";
  }
  return "?";
}

struct SearchOptions {
  std::size_t kmax = 1;
  EntryMode mode = EntryMode::binary01;
  /// generic_random: witness draws per feasible support.
  std::size_t generic_trials = 4;
  std::uint64_t seed = 0;
  std::size_t budget = 1'000'000;  // supports
  Tolerances tolerances;
  exact::ExactOptions exact;
};

struct MinCtrlResult {
  std::vector<std::size_t> basis_controllable;
  SearchStatus status = SearchStatus::exhausted;
  std::optional<std::size_t> k_star;
  std::optional<Eigen::VectorXd> witness;
  std::vector<std::size_t> witness_support;
  Method method = Method::exact_kalman;
  std::size_t supports_tested = 0;
};

/// Sparsest controllable input, searching k = 1..kmax and supports in
/// lexicographic order; the first success is returned.
///
/// binary01 tests every 0/1 vector of support size k with the exact
/// decider. generic_random screens each support with support_feasibility and
/// then draws entries uniform on [1,2], accepting a draw only if the float
/// decider says controllable (indeterminate is rejected).
inline MinCtrlResult sparsest_input(const SystemMatrix& a, const SearchOptions& opts) {
  const std::size_t n = a.size();
  if (opts.kmax < 1 || opts.kmax > n)
    throw ParameterError("sparsest_input: kmax must lie in [1, n]");
  MinCtrlResult out;
  std::size_t tested = 0;
  auto charge = [&](std::size_t k) {
    if (++tested > opts.budget)
      throw BudgetError("sparsest_input: enumeration budget of " + std::to_string(opts.budget) +
                        " supports exhausted at support size k=" + std::to_string(k) + " (kmax=" +
                        std::to_string(opts.kmax) + ")");
  };

  if (opts.mode == EntryMode::binary01) {
    out.method = Method::exact_kalman;
    const IntSymMatrix& m = detail::require_exact(a, opts.exact);
    out.basis_controllable = basis_scan(a, Method::exact_kalman, opts.tolerances, opts.exact).controllable;
    if (!exact::has_simple_spectrum_exact(m)) {
      out.status = SearchStatus::infeasible;
      return out;
    }
    for (std::size_t k = 1; k <= opts.kmax; ++k) {
      std::vector<std::size_t> c(k);
      for (std::size_t q = 0; q < k; ++q) c[q] = q;
      do {
        charge(k);
        const IntVector b = detail::indicator(n, c);
        if (exact::is_controllable_exact(m, b, opts.exact)) {
          out.status = SearchStatus::found;
          out.k_star = k;
          out.witness = to_real(b);
          out.witness_support = c;
          out.supports_tested = tested;
          return out;
        }
      } while (detail::next_combination(c, n));
    }
    out.supports_tested = tested;
    return out;
  }

  out.method = Method::float_pbh;
  const EigenSystem es = spectral::eig_sym(a.real);
  out.basis_controllable = basis_scan_float(es, opts.tolerances).controllable;
  if (spectral::min_gap(es) < opts.tolerances.gap_reject * std::max(1.0, es.norm())) {
    out.status = SearchStatus::infeasible;
    return out;
  }
  Sampler rng(opts.seed);
  for (std::size_t k = 1; k <= opts.kmax; ++k) {
    std::vector<std::size_t> c(k);
    for (std::size_t q = 0; q < k; ++q) c[q] = q;
    do {
      charge(k);
      if (!support_feasibility(es, c, opts.tolerances)) continue;
      for (std::size_t t = 0; t < opts.generic_trials; ++t) {
        Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t i : c) b(static_cast<Eigen::Index>(i)) = rng.uniform(1.0, 2.0);
        if (spectral::pbh_verdict(es, b, opts.tolerances).controllable()) {
          out.status = SearchStatus::found;
          out.k_star = k;
          out.witness = std::move(b);
          out.witness_support = c;
          out.supports_tested = tested;
          return out;
        }
      }
    } while (detail::next_combination(c, n));
  }
  out.supports_tested = tested;
  return out;
}

}  // namespace ctrllab::minctrl
