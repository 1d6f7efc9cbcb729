#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctrllab/ensembles.hpp"
#include "ctrllab/errors.hpp"
#include "ctrllab/matrix.hpp"
#include "ctrllab/rng.hpp"

// Floating-point eigen-based controllability verdicts, verifiers for the
// linear-algebra lemmas behind them, and the small-ball estimator.
namespace ctrllab::spectral {

/// Ascending eigenvalues with matching orthonormal eigenvectors (columns).
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
  double norm() const noexcept {
    return values.size() == 0 ? 0.0 : std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
  }
};

/// Symmetric eigendecomposition. `seed` only labels the error message so a
/// failing matrix can be regenerated.
inline EigenSystem eig_sym(const RealSymMatrix& a, std::optional<std::uint64_t> seed = std::nullopt) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::string msg = "symmetric eigensolver did not converge (n=" + std::to_string(a.size()) + ")";
    if (seed) msg += ", matrix seed " + std::to_string(*seed);
    throw NumericError(msg);
  }
  // Eigen returns ascending order; ties keep the solver's index order.
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

inline Eigen::VectorXd eigenvalues_sym(const RealSymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");
  return solver.eigenvalues();
}

struct EigenResiduals {
  double max_residual = 0.0;        // max_i |A v_i - l_i v_i|
  double max_orthogonality = 0.0;   // max_ij |v_i . v_j - delta_ij|
};

inline EigenResiduals residuals(const RealSymMatrix& a, const EigenSystem& es) {
  const Eigen::MatrixXd& v = es.vectors;
  const Eigen::MatrixXd r = a.matrix() * v - v * es.values.asDiagonal();
  const Eigen::MatrixXd g = v.transpose() * v - Eigen::MatrixXd::Identity(v.cols(), v.cols());
  EigenResiduals out;
  for (Eigen::Index j = 0; j < r.cols(); ++j) out.max_residual = std::max(out.max_residual, r.col(j).norm());
  out.max_orthogonality = g.cwiseAbs().maxCoeff();
  return out;
}

/// Smallest consecutive gap of ascending eigenvalues; +inf for n <= 1.
inline double min_gap(const Eigen::VectorXd& sorted) {
  double g = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i + 1 < sorted.size(); ++i) g = std::min(g, sorted(i + 1) - sorted(i));
  return g;
}

inline double min_gap(const EigenSystem& es) { return min_gap(es.values); }

inline double spectral_norm(const RealSymMatrix& a) {
  const Eigen::VectorXd l = eigenvalues_sym(a);
  return l.size() == 0 ? 0.0 : l.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// PBH verdict
// ---------------------------------------------------------------------------

/// Thresholds for the float decider. Gap thresholds are relative to
/// max(1, |A|); inner-product thresholds are relative to |b|.
struct Tolerances {
  double gap_tol = 1e-8;
  double gap_reject = 1e-12;
  double ortho_tol = 1e-9;
  double ortho_reject = 1e-13;
};

enum class Decision { controllable, uncontrollable, indeterminate };
enum class Method { exact_kalman, float_pbh };

inline const char* to_string(Decision d) {
  switch (d) {
    case Decision::controllable: return "controllable";
    case Decision::uncontrollable: return "uncontrollable";
    case Decision::indeterminate: return "indeterminate";
  }
  return "?";
}

inline const char* to_string(Method m) { return m == Method::exact_kalman ? "exact-kalman" : "float-pbh"; }

struct ControllabilityVerdict {
  Decision decision = Decision::indeterminate;
  Method method = Method::float_pbh;
  double min_gap = 0.0;
  double min_abs_inner = 0.0;
  std::optional<std::size_t> rank;  // exact path only
  double norm = 0.0;                // |A|
  Tolerances tolerances;

  bool controllable() const noexcept { return decision == Decision::controllable; }
};

/// Verdict from a precomputed eigensystem; lets one factorization serve
/// many input vectors.
inline ControllabilityVerdict pbh_verdict(const EigenSystem& es, const Eigen::VectorXd& b,
                                          const Tolerances& tol = {}) {
  if (static_cast<std::size_t>(b.size()) != es.size())
    throw DimensionError("input vector length does not match matrix dimension");
  ControllabilityVerdict v;
  v.method = Method::float_pbh;
  v.tolerances = tol;
  v.norm = es.norm();
  v.min_gap = min_gap(es);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    v.min_abs_inner = 0.0;
    v.decision = Decision::uncontrollable;
    return v;
  }
  v.min_abs_inner = (es.vectors.transpose() * b).cwiseAbs().minCoeff();
  const double scale = std::max(1.0, v.norm);
  if (v.min_gap > tol.gap_tol * scale && v.min_abs_inner > tol.ortho_tol * bnorm)
    v.decision = Decision::controllable;
  else if (v.min_abs_inner < tol.ortho_reject * bnorm || v.min_gap < tol.gap_reject * scale)
    v.decision = Decision::uncontrollable;
  else
    v.decision = Decision::indeterminate;
  return v;
}

inline ControllabilityVerdict pbh_controllable(const RealSymMatrix& a, const Eigen::VectorXd& b,
                                               const Tolerances& tol = {}) {
  if (static_cast<std::size_t>(b.size()) != a.size())
    throw DimensionError("input vector length does not match matrix dimension");
  return pbh_verdict(eig_sym(a), b, tol);
}

// ---------------------------------------------------------------------------
// Minor verifiers
// ---------------------------------------------------------------------------

/// The matrix with row and column i removed, and column i without entry i.
/// Equivalent to conjugating by the permutation that moves i last.
struct MinorSplit {
  RealSymMatrix minor;
  Eigen::VectorXd column;
};

inline MinorSplit split_minor(const RealSymMatrix& a, std::size_t i) {
  const std::size_t n = a.size();
  if (i >= n) throw ParameterError("minor index " + std::to_string(i) + " out of range for n=" + std::to_string(n));
  MinorSplit s{RealSymMatrix(n - 1), Eigen::VectorXd(static_cast<Eigen::Index>(n - 1))};
  for (std::size_t r = 0, rr = 0; r < n; ++r) {
    if (r == i) continue;
    s.column(static_cast<Eigen::Index>(rr)) = a(r, i);
    for (std::size_t c = r, cc = rr; c < n; ++c) {
      if (c == i) continue;
      s.minor.set(rr, cc, a(r, c));
      ++cc;
    }
    ++rr;
  }
  return s;
}

/// min_j min(mu_j - l_j, l_{j+1} - mu_j) for minor eigenvalues mu. Cauchy
/// interlacing holds iff this is >= 0 (up to rounding). +inf for n = 1.
inline double interlacing_check(const RealSymMatrix& a, std::size_t i) {
  const MinorSplit s = split_minor(a, i);
  const Eigen::VectorXd l = eigenvalues_sym(a);
  const Eigen::VectorXd mu = eigenvalues_sym(s.minor);
  double margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < mu.size(); ++j)
    margin = std::min({margin, mu(j) - l(j), l(j + 1) - mu(j)});
  return margin;
}

struct CoordinateCheckOptions {
  /// An eigenvalue of A and one of the minor closer than
  /// separation_rel * |A| are treated as shared.
  double separation_rel = 1e-6;
};

/// Eigen-data for comparing |x|^2 against the eigenvector-coordinate formula
/// at one minor index.
class CoordinateFormula {
 public:
  CoordinateFormula(const RealSymMatrix& a, std::size_t i, const CoordinateCheckOptions& opts = {})
      : index_(i), full_(eig_sym(a)) {
    const MinorSplit s = split_minor(a, i);
    minor_ = eig_sym(s.minor);
    projections_ = minor_.vectors.transpose() * s.column;
    threshold_ = opts.separation_rel * full_.norm();
  }

  /// Distance from l_k(A) to the nearest minor eigenvalue, and which one.
  std::pair<double, std::size_t> separation(std::size_t k) const {
    const double lambda = full_.values(static_cast<Eigen::Index>(k));
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (Eigen::Index j = 0; j < minor_.values.size(); ++j) {
      const double d = std::abs(minor_.values(j) - lambda);
      if (d < best) {
        best = d;
        arg = static_cast<std::size_t>(j);
      }
    }
    return {best, arg};
  }

  bool eligible(std::size_t k) const { return separation(k).first > threshold_; }

  /// |x_k^2 - 1/(1 + sum_j (mu_j - l_k)^-2 (w_j . X)^2)|, where x_k is the
  /// i-th coordinate of the k-th unit eigenvector of A.
  double residual(std::size_t k) const {
    const auto [sep, j] = separation(k);
    if (!(sep > threshold_))
      throw PreconditionError("eigenvalue " + std::to_string(k) + " of A (" +
                              std::to_string(full_.values(static_cast<Eigen::Index>(k))) +
                              ") collides with eigenvalue " + std::to_string(j) + " of minor " +
                              std::to_string(index_) + " (" +
                              std::to_string(minor_.values(static_cast<Eigen::Index>(j))) + ")");
    const double lambda = full_.values(static_cast<Eigen::Index>(k));
    const double x = full_.vectors(static_cast<Eigen::Index>(index_), static_cast<Eigen::Index>(k));
    double sum = 0.0;
    for (Eigen::Index j2 = 0; j2 < minor_.values.size(); ++j2) {
      const double d = minor_.values(j2) - lambda;
      sum += projections_(j2) * projections_(j2) / (d * d);
    }
    return std::abs(x * x - 1.0 / (1.0 + sum));
  }

  std::size_t size() const noexcept { return full_.size(); }

 private:
  std::size_t index_;
  EigenSystem full_;
  EigenSystem minor_;
  Eigen::VectorXd projections_;
  double threshold_ = 0.0;
};

/// Max residual of the coordinate formula over every eigenvalue of A.
/// Throws PreconditionError if any eigenvalue is shared with the minor.
inline double eigvec_coordinate_check(const RealSymMatrix& a, std::size_t i,
                                      const CoordinateCheckOptions& opts = {}) {
  const CoordinateFormula f(a, i, opts);
  double worst = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) worst = std::max(worst, f.residual(k));
  return worst;
}

struct SharedEigenWitness {
  Eigen::VectorXd w;          // unit eigenvector of the minor
  double abs_inner = 0.0;     // |X . w|
  std::size_t matrix_index = 0;  // eigenvalue of A that collides
};

/// If an eigenvalue of A coincides (within collision_tol) with eigenvalues
/// of the minor at i, returns the unit minor eigenvector w in the colliding
/// eigenspace minimizing |X . w|. For a multi-dimensional eigenspace the
/// minimizer is the direction orthogonal to the projection of X.
inline std::optional<SharedEigenWitness> shared_eigenvalue_witness(const RealSymMatrix& a, std::size_t i,
                                                                   double collision_tol) {
  const MinorSplit s = split_minor(a, i);
  const Eigen::VectorXd l = eigenvalues_sym(a);
  const EigenSystem minor = eig_sym(s.minor);
  std::optional<SharedEigenWitness> best;
  for (Eigen::Index k = 0; k < l.size(); ++k) {
    std::vector<Eigen::Index> cluster;
    for (Eigen::Index j = 0; j < minor.values.size(); ++j)
      if (std::abs(minor.values(j) - l(k)) <= collision_tol) cluster.push_back(j);
    if (cluster.empty()) continue;
    Eigen::MatrixXd basis(minor.vectors.rows(), static_cast<Eigen::Index>(cluster.size()));
    for (std::size_t c = 0; c < cluster.size(); ++c)
      basis.col(static_cast<Eigen::Index>(c)) = minor.vectors.col(cluster[c]);
    Eigen::VectorXd w;
    if (cluster.size() == 1) {
      w = basis.col(0);
    } else {
      const Eigen::RowVectorXd proj = (basis.transpose() * s.column).transpose();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(proj, Eigen::ComputeFullV);
      w = basis * svd.matrixV().col(svd.matrixV().cols() - 1);
      w.normalize();
    }
    const double inner = std::abs(s.column.dot(w));
    if (!best || inner < best->abs_inner) best = SharedEigenWitness{w, inner, static_cast<std::size_t>(k)};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Small-ball probability
// ---------------------------------------------------------------------------

struct SmallBallEstimate {
  double rho_hat = 0.0;
  double delta = 0.0;
  std::size_t m = 0;
  double std_err = 0.0;
};

/// Largest number of sorted samples inside a closed window of width `width`.
inline std::size_t max_window_count(std::vector<double> samples, double width) {
  std::sort(samples.begin(), samples.end());
  std::size_t best = 0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < samples.size(); ++hi) {
    while (samples[hi] - samples[lo] > width) ++lo;
    best = std::max(best, hi - lo + 1);
  }
  return best;
}

/// Monte Carlo estimate of sup_a P(|sum_k xi_k x_k - a| <= delta). The sup
/// over a is taken exactly for the empirical measure by sliding a window of
/// width 2*delta over the sorted samples.
inline SmallBallEstimate small_ball_estimate(const Eigen::VectorXd& x, const AtomDistribution& atom, double delta,
                                             std::size_t m, const SeedPath& seed) {
  if (m < 1000) throw ParameterError("small_ball_estimate: need m >= 1000 samples");
  if (!(delta > 0.0)) throw ParameterError("small_ball_estimate: delta must be > 0");
  validate(atom);
  Sampler rng(seed);
  std::vector<double> sums(m);
  for (auto& s : sums) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) acc += draw(rng, atom) * x(k);
    s = acc;
  }
  SmallBallEstimate e;
  e.delta = delta;
  e.m = m;
  e.rho_hat = static_cast<double>(max_window_count(std::move(sums), 2.0 * delta)) / static_cast<double>(m);
  e.std_err = std::sqrt(e.rho_hat * (1.0 - e.rho_hat) / static_cast<double>(m));
  return e;
}

}  // namespace ctrllab::spectral
