#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ctrllab/errors.hpp"
#include "ctrllab/matrix.hpp"
#include "ctrllab/rng.hpp"

namespace ctrllab {

// ---------------------------------------------------------------------------
// Atom distributions
// ---------------------------------------------------------------------------

namespace atoms {

struct Gaussian {
  double mean = 0.0;
  double variance = 1.0;
};

/// +1 or -1 with equal probability.
struct Rademacher {};

/// (1-p)/s with probability p, -p/s otherwise, s = sqrt(p(1-p)).
/// Mean zero, unit variance.
struct CenteredBernoulli {
  double p = 0.5;
};

/// 1 with probability p, 0 otherwise.
struct Bernoulli01 {
  double p = 0.5;
};

/// Point mass. Degenerate{0} is the zero diagonal of adjacency matrices.
struct Degenerate {
  double value = 0.0;
};

}  // namespace atoms

using AtomDistribution =
    std::variant<atoms::Gaussian, atoms::Rademacher, atoms::CenteredBernoulli, atoms::Bernoulli01,
                 atoms::Degenerate>;

inline void validate(const AtomDistribution& atom) {
  std::visit(
      [](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, atoms::Gaussian>) {
          if (!(a.variance >= 0.0) || !std::isfinite(a.mean) || !std::isfinite(a.variance))
            throw ParameterError("gaussian atom: variance must be finite and >= 0");
        } else if constexpr (std::is_same_v<T, atoms::CenteredBernoulli>) {
          if (!(a.p > 0.0 && a.p < 1.0))
            throw ParameterError("centered-bernoulli atom: p must lie in (0,1)");
        } else if constexpr (std::is_same_v<T, atoms::Bernoulli01>) {
          if (!(a.p >= 0.0 && a.p <= 1.0))
            throw ParameterError("bernoulli01 atom: p must lie in [0,1]");
        } else if constexpr (std::is_same_v<T, atoms::Degenerate>) {
          if (!std::isfinite(a.value)) throw ParameterError("degenerate atom: value must be finite");
        }
      },
      atom);
}

inline double mean(const AtomDistribution& atom) {
  return std::visit(
      [](const auto& a) -> double {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, atoms::Gaussian>) return a.mean;
        else if constexpr (std::is_same_v<T, atoms::Rademacher>) return 0.0;
        else if constexpr (std::is_same_v<T, atoms::CenteredBernoulli>) return 0.0;
        else if constexpr (std::is_same_v<T, atoms::Bernoulli01>) return a.p;
        else return a.value;
      },
      atom);
}

inline double variance(const AtomDistribution& atom) {
  return std::visit(
      [](const auto& a) -> double {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, atoms::Gaussian>) return a.variance;
        else if constexpr (std::is_same_v<T, atoms::Rademacher>) return 1.0;
        else if constexpr (std::is_same_v<T, atoms::CenteredBernoulli>) return 1.0;
        else if constexpr (std::is_same_v<T, atoms::Bernoulli01>) return a.p * (1.0 - a.p);
        else return 0.0;
      },
      atom);
}

/// Probability of the most likely single value (0 for continuous atoms).
inline double max_atom_mass(const AtomDistribution& atom) {
  return std::visit(
      [](const auto& a) -> double {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, atoms::Gaussian>) return a.variance == 0.0 ? 1.0 : 0.0;
        else if constexpr (std::is_same_v<T, atoms::Rademacher>) return 0.5;
        else if constexpr (std::is_same_v<T, atoms::CenteredBernoulli> ||
                           std::is_same_v<T, atoms::Bernoulli01>)
          return std::max(a.p, 1.0 - a.p);
        else return 1.0;
      },
      atom);
}

/// One draw. Parameters are assumed validated.
inline double draw(Sampler& rng, const AtomDistribution& atom) {
  return std::visit(
      [&rng](const auto& a) -> double {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, atoms::Gaussian>) {
          return a.mean + std::sqrt(a.variance) * rng.normal();
        } else if constexpr (std::is_same_v<T, atoms::Rademacher>) {
          return rng.bernoulli(0.5) ? 1.0 : -1.0;
        } else if constexpr (std::is_same_v<T, atoms::CenteredBernoulli>) {
          const double s = std::sqrt(a.p * (1.0 - a.p));
          return rng.bernoulli(a.p) ? (1.0 - a.p) / s : -a.p / s;
        } else if constexpr (std::is_same_v<T, atoms::Bernoulli01>) {
          return rng.bernoulli(a.p) ? 1.0 : 0.0;
        } else {
          return a.value;
        }
      },
      atom);
}

// ---------------------------------------------------------------------------
// Matrix ensembles
// ---------------------------------------------------------------------------

namespace shifts {
struct None {};
/// c on every off-diagonal entry, 0 on the diagonal.
struct ConstantOffdiag {
  double c = 0.0;
};
struct Explicit {
  RealSymMatrix matrix;
};
}  // namespace shifts

using ShiftSpec = std::variant<shifts::None, shifts::ConstantOffdiag, shifts::Explicit>;

inline RealSymMatrix shift_matrix(const ShiftSpec& shift, std::size_t n) {
  return std::visit(
      [n](const auto& s) -> RealSymMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, shifts::None>) {
          return RealSymMatrix(n);
        } else if constexpr (std::is_same_v<T, shifts::ConstantOffdiag>) {
          RealSymMatrix f(n);
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) f.set(i, j, s.c);
          return f;
        } else {
          if (s.matrix.size() != n) throw DimensionError("explicit shift has wrong dimension");
          return s.matrix;
        }
      },
      shift);
}

namespace ensembles {
struct Wigner {
  AtomDistribution offdiag = atoms::Rademacher{};
  AtomDistribution diag = atoms::Degenerate{0.0};
};
/// Off-diagonal N(0,1), diagonal N(0,2).
struct Goe {};
struct GnpAdjacency {
  double p = 0.5;
};
struct ShiftedWigner {
  AtomDistribution offdiag = atoms::Rademacher{};
  AtomDistribution diag = atoms::Degenerate{0.0};
  ShiftSpec shift = shifts::None{};
};
}  // namespace ensembles

using EnsembleKind =
    std::variant<ensembles::Wigner, ensembles::Goe, ensembles::GnpAdjacency, ensembles::ShiftedWigner>;

struct EnsembleSpec {
  EnsembleKind kind;
  std::size_t n = 1;
};

/// A sampled system matrix. `integer` is present for integer-valued
/// ensembles and `real` is then its exact cast, never a second sample.
struct SystemMatrix {
  RealSymMatrix real;
  std::optional<IntSymMatrix> integer;

  static SystemMatrix from_integer(IntSymMatrix a) {
    SystemMatrix s{to_real(a), std::move(a)};
    return s;
  }
  static SystemMatrix from_real(RealSymMatrix a) { return SystemMatrix{std::move(a), std::nullopt}; }

  std::size_t size() const noexcept { return real.size(); }
};

inline void require_dimension(std::size_t n) {
  if (n < 1) throw ParameterError("dimension n must be >= 1");
}

/// Upper triangle iid from `offdiag`, diagonal iid from `diag`. Entries are
/// drawn row by row over i <= j from a single stream.
inline RealSymMatrix sample_wigner(std::size_t n, const AtomDistribution& offdiag,
                                   const AtomDistribution& diag, const SeedPath& seed) {
  require_dimension(n);
  validate(offdiag);
  validate(diag);
  Sampler rng(seed);
  RealSymMatrix w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.set(i, i, draw(rng, diag));
    for (std::size_t j = i + 1; j < n; ++j) w.set(i, j, draw(rng, offdiag));
  }
  return w;
}

inline RealSymMatrix sample_goe(std::size_t n, const SeedPath& seed) {
  return sample_wigner(n, atoms::Gaussian{0.0, 1.0}, atoms::Gaussian{0.0, 2.0}, seed);
}

/// 0/1 adjacency of G(n,p). p = 0 and p = 1 are accepted for fixtures.
inline IntSymMatrix sample_gnp(std::size_t n, double p, const SeedPath& seed) {
  require_dimension(n);
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("G(n,p): p must lie in [0,1]");
  Sampler rng(seed);
  IntSymMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) a.set(i, j, 1);
  return a;
}

/// Decomposition of a scaled G(n,p) adjacency as Wigner plus shift:
/// A / sigma has the law of W + F.
struct GnpReduction {
  AtomDistribution offdiag;
  AtomDistribution diag;
  ShiftSpec shift;
  RealSymMatrix F;
  double sigma = 0.0;
};

inline GnpReduction gnp_reduction(std::size_t n, double p) {
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("gnp_reduction: p must lie in (0,1)");
  const double sigma = std::sqrt(p * (1.0 - p));
  ShiftSpec shift = shifts::ConstantOffdiag{p / sigma};
  return GnpReduction{atoms::CenteredBernoulli{p}, atoms::Degenerate{0.0}, shift, shift_matrix(shift, n),
                      sigma};
}

inline SystemMatrix sample_ensemble(const EnsembleSpec& spec, const SeedPath& seed) {
  require_dimension(spec.n);
  return std::visit(
      [&](const auto& e) -> SystemMatrix {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ensembles::Wigner>) {
          return SystemMatrix::from_real(sample_wigner(spec.n, e.offdiag, e.diag, seed));
        } else if constexpr (std::is_same_v<T, ensembles::Goe>) {
          return SystemMatrix::from_real(sample_goe(spec.n, seed));
        } else if constexpr (std::is_same_v<T, ensembles::GnpAdjacency>) {
          return SystemMatrix::from_integer(sample_gnp(spec.n, e.p, seed));
        } else {
          RealSymMatrix m = sample_wigner(spec.n, e.offdiag, e.diag, seed);
          m += shift_matrix(e.shift, spec.n);
          return SystemMatrix::from_real(std::move(m));
        }
      },
      spec.kind);
}

// ---------------------------------------------------------------------------
// Input vectors
// ---------------------------------------------------------------------------

struct VectorSpec;

namespace vectors {
/// e_index, 0-based.
struct StandardBasis {
  std::size_t index = 0;
};
struct AllOnes {};
struct Bernoulli01 {
  double p = 0.5;
};
struct IidAtom {
  AtomDistribution atom;
};
/// Normalized iid Gaussian vector.
struct UniformSphere {};
/// base + mu. A length-1 `mu` is broadcast to every coordinate.
struct Shifted {
  std::shared_ptr<const VectorSpec> base;
  std::vector<double> mu;
};
struct Explicit {
  Eigen::VectorXd values;
};
}  // namespace vectors

struct VectorSpec {
  std::variant<vectors::StandardBasis, vectors::AllOnes, vectors::Bernoulli01, vectors::IidAtom,
               vectors::UniformSphere, vectors::Shifted, vectors::Explicit>
      kind;

  static VectorSpec shifted(VectorSpec base, std::vector<double> mu) {
    return VectorSpec{vectors::Shifted{std::make_shared<const VectorSpec>(std::move(base)), std::move(mu)}};
  }
};

namespace detail {

inline Eigen::VectorXd sample_vector_from(const VectorSpec& spec, std::size_t n, Sampler& rng) {
  const auto len = static_cast<Eigen::Index>(n);
  return std::visit(
      [&](const auto& v) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, vectors::StandardBasis>) {
          if (v.index >= n)
            throw ParameterError("standard-basis index " + std::to_string(v.index) + " out of range for n=" +
                                 std::to_string(n));
          Eigen::VectorXd e = Eigen::VectorXd::Zero(len);
          e(static_cast<Eigen::Index>(v.index)) = 1.0;
          return e;
        } else if constexpr (std::is_same_v<T, vectors::AllOnes>) {
          return Eigen::VectorXd::Ones(len);
        } else if constexpr (std::is_same_v<T, vectors::Bernoulli01>) {
          const AtomDistribution atom = atoms::Bernoulli01{v.p};
          validate(atom);
          Eigen::VectorXd b(len);
          for (Eigen::Index i = 0; i < len; ++i) b(i) = draw(rng, atom);
          return b;
        } else if constexpr (std::is_same_v<T, vectors::IidAtom>) {
          validate(v.atom);
          Eigen::VectorXd b(len);
          for (Eigen::Index i = 0; i < len; ++i) b(i) = draw(rng, v.atom);
          return b;
        } else if constexpr (std::is_same_v<T, vectors::UniformSphere>) {
          Eigen::VectorXd g(len);
          double norm = 0.0;
          do {
            for (Eigen::Index i = 0; i < len; ++i) g(i) = rng.normal();
            norm = g.norm();
          } while (norm == 0.0);
          return g / norm;
        } else if constexpr (std::is_same_v<T, vectors::Shifted>) {
          if (!v.base) throw ParameterError("shifted vector spec has no base");
          Eigen::VectorXd b = sample_vector_from(*v.base, n, rng);
          if (v.mu.size() == 1) {
            b.array() += v.mu[0];
          } else if (v.mu.size() == n) {
            for (Eigen::Index i = 0; i < len; ++i) b(i) += v.mu[static_cast<std::size_t>(i)];
          } else {
            throw DimensionError("shift vector mu has length " + std::to_string(v.mu.size()) +
                                 ", expected 1 or " + std::to_string(n));
          }
          return b;
        } else {
          if (v.values.size() != len) throw DimensionError("explicit vector has wrong dimension");
          return v.values;
        }
      },
      spec.kind);
}

}  // namespace detail

inline Eigen::VectorXd sample_vector(const VectorSpec& spec, std::size_t n, const SeedPath& seed) {
  require_dimension(n);
  Sampler rng(seed);
  return detail::sample_vector_from(spec, n, rng);
}

// ---------------------------------------------------------------------------

inline std::string to_string(const AtomDistribution& atom) {
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  return std::visit(
      [&](const auto& a) -> std::string {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, atoms::Gaussian>)
          return "gaussian(" + num(a.mean) + "," + num(a.variance) + ")";
        else if constexpr (std::is_same_v<T, atoms::Rademacher>) return "rademacher";
        else if constexpr (std::is_same_v<T, atoms::CenteredBernoulli>)
          return "centered-bernoulli(" + num(a.p) + ")";
        else if constexpr (std::is_same_v<T, atoms::Bernoulli01>) return "bernoulli01(" + num(a.p) + ")";
        else return "degenerate(" + num(a.value) + ")";
      },
      atom);
}

}  // namespace ctrllab
