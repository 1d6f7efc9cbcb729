#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "ctrllab/ensembles.hpp"
#include "ctrllab/exact.hpp"
#include "ctrllab/minctrl.hpp"
#include "ctrllab/rng.hpp"
#include "ctrllab/scenarios.hpp"
#include "ctrllab/spectral.hpp"

namespace ctrllab::harness {

using spectral::Decision;

struct TrialRecord {
  std::string scenario;
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t trial_key = 0;  // SeedPath{master, scenario, n, trial}.trial_key()
  RunMethod method = RunMethod::float_pbh;

  std::optional<Decision> exact_decision;
  std::optional<Decision> float_decision;
  bool success = false;
  bool indeterminate = false;
  bool disagreement = false;  // both methods decided and differ

  double min_gap = std::numeric_limits<double>::quiet_NaN();
  double min_abs_inner = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::size_t> rank;
  double norm = std::numeric_limits<double>::quiet_NaN();
  /// Kind-specific scalar: |A|/sqrt(n), rho_hat, k_star, min_gap.
  double stat = std::numeric_limits<double>::quiet_NaN();
  double wall_seconds = 0.0;
};

/// Equality of everything but wall time; doubles compared bit for bit.
inline bool same_outcome(const TrialRecord& a, const TrialRecord& b) {
  auto bits = [](double x) { return std::bit_cast<std::uint64_t>(x); };
  return a.scenario == b.scenario && a.n == b.n && a.trial == b.trial && a.master_seed == b.master_seed &&
         a.trial_key == b.trial_key && a.method == b.method && a.exact_decision == b.exact_decision &&
         a.float_decision == b.float_decision && a.success == b.success && a.indeterminate == b.indeterminate &&
         a.disagreement == b.disagreement && bits(a.min_gap) == bits(b.min_gap) &&
         bits(a.min_abs_inner) == bits(b.min_abs_inner) && a.rank == b.rank && bits(a.norm) == bits(b.norm) &&
         bits(a.stat) == bits(b.stat);
}

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Wilson score interval, 95% by default.
inline WilsonInterval wilson(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (ph + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct ReportRow {
  std::string scenario;
  std::size_t n = 0;
  double p = 0.0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t indeterminates = 0;
  std::size_t disagreements = 0;
  double frequency = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  std::string method;
  std::uint64_t seed = 0;
  double gap_tol = 0.0;
  double ortho_tol = 0.0;
  std::optional<double> stat_mean;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  std::vector<TrialRecord> records;
  std::string tool_version = kToolVersion;
};

namespace detail {

inline Eigen::VectorXd unit(std::size_t n, std::size_t i) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return e;
}

inline Decision exact_decision(bool controllable) {
  return controllable ? Decision::controllable : Decision::uncontrollable;
}

/// Combines per-method decisions into the trial outcome. The exact verdict
/// is authoritative when present; a float indeterminate never succeeds.
inline void settle(TrialRecord& r) {
  if (r.exact_decision) {
    r.success = *r.exact_decision == Decision::controllable;
    r.indeterminate = false;
    r.disagreement = r.float_decision && *r.float_decision != Decision::indeterminate &&
                     *r.float_decision != *r.exact_decision;
  } else if (r.float_decision) {
    r.success = *r.float_decision == Decision::controllable;
    r.indeterminate = *r.float_decision == Decision::indeterminate;
  }
}

inline void run_single_input(const ExperimentConfig& c, const ScenarioPlan& pl, const SystemMatrix& a,
                             const SeedPath& vec_seed, TrialRecord& r) {
  const Eigen::VectorXd b = sample_vector(pl.vector, a.size(), vec_seed);
  if (r.method != RunMethod::exact) {
    const auto v = spectral::pbh_verdict(spectral::eig_sym(a.real, r.trial_key), b, c.tolerances);
    r.float_decision = v.decision;
    r.min_gap = v.min_gap;
    r.min_abs_inner = v.min_abs_inner;
    r.norm = v.norm;
  }
  if (r.method != RunMethod::float_pbh) {
    const auto bi = to_integer(b);
    if (!a.integer || !bi) throw ConfigError("exact method needs an integer matrix and input");
    const exact::KalmanMatrix k = exact::kalman_matrix(*a.integer, *bi);
    const std::size_t rank = exact::is_zero(*bi) ? 0 : exact::rank_exact(k);
    r.rank = rank;
    r.exact_decision = exact_decision(rank == a.size());
  }
  r.stat = r.min_abs_inner;
}

inline void run_all_basis(const ExperimentConfig& c, const SystemMatrix& a, TrialRecord& r) {
  const std::size_t n = a.size();
  if (r.method != RunMethod::exact) {
    const spectral::EigenSystem es = spectral::eig_sym(a.real, r.trial_key);
    bool any_reject = false;
    bool any_indeterminate = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = spectral::pbh_verdict(es, unit(n, i), c.tolerances);
      any_reject |= v.decision == Decision::uncontrollable;
      any_indeterminate |= v.decision == Decision::indeterminate;
    }
    r.float_decision = any_reject ? Decision::uncontrollable
                                  : (any_indeterminate ? Decision::indeterminate : Decision::controllable);
    r.min_gap = spectral::min_gap(es);
    r.min_abs_inner = es.vectors.cwiseAbs().minCoeff();
    r.norm = es.norm();
  }
  if (r.method != RunMethod::float_pbh) {
    if (!a.integer) throw ConfigError("exact method needs an integer matrix");
    std::size_t worst = n;
    for (std::size_t i = 0; i < n && worst == n; ++i) {
      IntVector e(n);
      e[i] = 1;
      worst = exact::rank_exact(exact::kalman_matrix(*a.integer, e));
    }
    r.rank = worst;
    r.exact_decision = exact_decision(worst == n);
  }
  r.stat = r.min_abs_inner;
}

}  // namespace detail

/// Runs one trial in isolation. Everything random is drawn from streams
/// keyed by SeedPath{seed, scenario, n, trial, tag}.
inline TrialRecord run_trial(const ExperimentConfig& c, const ScenarioPlan& pl, std::size_t n, std::size_t trial) {
  const auto t0 = std::chrono::steady_clock::now();
  TrialRecord r;
  r.scenario = c.scenario;
  r.n = n;
  r.trial = trial;
  r.master_seed = c.seed;
  SeedPath path{c.seed, c.scenario, n, trial, ""};
  r.trial_key = path.trial_key();
  r.method = effective_method(c, pl, n);
  auto stream = [&](const char* tag) {
    SeedPath s = path;
    s.tag = tag;
    return s;
  };

  const SystemMatrix a = sample_ensemble(EnsembleSpec{pl.ensemble, n}, stream("matrix"));
  const double scale = std::sqrt(static_cast<double>(n));

  switch (pl.kind) {
    case TrialKind::single_input:
      detail::run_single_input(c, pl, a, stream("vector"), r);
      detail::settle(r);
      break;
    case TrialKind::all_basis:
      detail::run_all_basis(c, a, r);
      detail::settle(r);
      break;
    case TrialKind::min_gap: {
      const Eigen::VectorXd l = spectral::eigenvalues_sym(a.real);
      r.norm = l.cwiseAbs().maxCoeff();
      r.min_gap = spectral::min_gap(l);
      r.stat = r.min_gap;
      const double s = std::max(1.0, r.norm);
      r.float_decision = r.min_gap > c.tolerances.gap_tol * s     ? Decision::controllable
                         : r.min_gap < c.tolerances.gap_reject * s ? Decision::uncontrollable
                                                                   : Decision::indeterminate;
      detail::settle(r);
      break;
    }
    case TrialKind::norm: {
      r.norm = spectral::spectral_norm(a.real);
      r.stat = r.norm / scale;
      r.success = r.stat <= c.norm_bound;
      break;
    }
    case TrialKind::small_ball: {
      const spectral::EigenSystem es = spectral::eig_sym(a.real, r.trial_key);
      r.norm = es.norm();
      r.min_gap = spectral::min_gap(es);
      Sampler pick(stream("eigvec-index"));
      const auto k = static_cast<Eigen::Index>(std::min<std::size_t>(
          n - 1, static_cast<std::size_t>(pick.uniform01() * static_cast<double>(n))));
      const double delta = std::pow(static_cast<double>(n), -c.smallball_beta);
      const auto est = spectral::small_ball_estimate(es.vectors.col(k), pl.atom, delta, c.smallball_m,
                                                     stream("smallball"));
      r.stat = est.rho_hat;
      r.success = est.rho_hat <= c.smallball_bound;
      break;
    }
    case TrialKind::sparsest_input: {
      minctrl::SearchOptions opts;
      opts.kmax = c.minctrl_kmax == 0 ? n : std::min(n, c.minctrl_kmax);
      opts.mode = r.method == RunMethod::float_pbh ? minctrl::EntryMode::generic_random : minctrl::EntryMode::binary01;
      opts.seed = stream("minctrl").key();
      opts.tolerances = c.tolerances;
      opts.exact.max_dim = c.exact_cap;
      const auto res = minctrl::sparsest_input(a, opts);
      r.stat = res.k_star ? static_cast<double>(*res.k_star) : 0.0;
      r.success = res.k_star && *res.k_star == 1;
      if (r.method == RunMethod::float_pbh)
        r.float_decision = res.k_star ? Decision::controllable : Decision::uncontrollable;
      else
        r.exact_decision = res.k_star ? Decision::controllable : Decision::uncontrollable;
      break;
    }
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline TrialRecord run_trial(const ExperimentConfig& c, std::size_t n, std::size_t trial) {
  return run_trial(c, plan(c), n, trial);
}

/// Runs `count` jobs on a worker pool; job i writes only slot i, so the
/// result does not depend on scheduling.
template <typename Job>
void parallel_for(std::size_t count, std::size_t threads, Job job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

inline ReportRow aggregate(const ExperimentConfig& c, std::size_t n, RunMethod method,
                           const std::vector<TrialRecord>& recs) {
  ReportRow row;
  row.scenario = c.scenario;
  row.n = n;
  row.p = c.p;
  row.trials = recs.size();
  row.method = to_string(method);
  row.seed = c.seed;
  row.gap_tol = c.tolerances.gap_tol;
  row.ortho_tol = c.tolerances.ortho_tol;
  double sum = 0.0;
  std::size_t finite = 0;
  for (const auto& r : recs) {
    if (r.success) ++row.successes;
    else if (r.indeterminate) ++row.indeterminates;
    else ++row.failures;
    if (r.disagreement) ++row.disagreements;
    if (std::isfinite(r.stat)) {
      sum += r.stat;
      ++finite;
    }
  }
  if (finite > 0) row.stat_mean = sum / static_cast<double>(finite);
  row.frequency = row.trials ? static_cast<double>(row.successes) / static_cast<double>(row.trials) : 0.0;
  const auto ci = wilson(row.successes, row.trials);
  row.ci_lo = ci.lo;
  row.ci_hi = ci.hi;
  return row;
}

inline ExperimentReport run_experiment(const ExperimentConfig& c) {
  validate(c);
  const ScenarioPlan pl = plan(c);
  ExperimentReport rep;
  rep.config = c;
  for (std::size_t n : c.n_grid) {
    std::vector<TrialRecord> recs(c.trials);
    parallel_for(c.trials, c.threads, [&](std::size_t t) { recs[t] = run_trial(c, pl, n, t); });
    rep.rows.push_back(aggregate(c, n, effective_method(c, pl, n), recs));
    rep.records.insert(rep.records.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
  }
  return rep;
}

}  // namespace ctrllab::harness
