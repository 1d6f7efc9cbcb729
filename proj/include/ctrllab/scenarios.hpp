#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctrllab/ensembles.hpp"
#include "ctrllab/errors.hpp"
#include "ctrllab/spectral.hpp"

namespace ctrllab::harness {

inline constexpr const char* kToolName = "ctrllab";
inline constexpr const char* kToolVersion = "0.1.0";

enum class RunMethod { exact, float_pbh, both };
enum class OutputFormat { csv, json };

/// What one trial measures and what counts as a success.
enum class TrialKind {
  single_input,    // one (A, b) verdict
  all_basis,       // (A, e_i) controllable for every i
  min_gap,         // spectrum numerically simple
  small_ball,      // rho_hat of a sampled eigenvector <= smallball_bound
  norm,            // |W| / sqrt(n) <= norm_bound
  sparsest_input,  // minimal controllable support has size 1
};

inline const char* to_string(RunMethod m) {
  switch (m) {
    case RunMethod::exact: return "exact";
    case RunMethod::float_pbh: return "float-pbh";
    case RunMethod::both: return "both";
  }
  return "?";
}

inline RunMethod parse_method(const std::string& s) {
  if (s == "exact") return RunMethod::exact;
  if (s == "float-pbh" || s == "float") return RunMethod::float_pbh;
  if (s == "both") return RunMethod::both;
  throw ConfigError("unknown method '" + s + "' (expected exact, float-pbh or both)");
}

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

/// Input-vector families selectable by name in a config.
///   standard-basis  e_{vector_index}
///   all-ones        1_n
///   bernoulli01     iid 0/1 with parameter p
///   iid-atom        iid copies of the scenario's off-diagonal atom
///   shifted-atom    iid atom plus the constant p/sigma (the scaled 0/1 vector)
///   uniform-sphere  uniform on the unit sphere
inline const std::vector<std::string>& vector_names() {
  static const std::vector<std::string> names{"standard-basis", "all-ones",     "bernoulli01",
                                              "iid-atom",       "shifted-atom", "uniform-sphere"};
  return names;
}

struct ExperimentConfig {
  std::string scenario;
  std::vector<std::size_t> n_grid;
  double p = 0.5;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  RunMethod method = RunMethod::float_pbh;
  spectral::Tolerances tolerances;
  std::size_t exact_cap = 24;
  std::string vector = "standard-basis";
  std::size_t vector_index = 0;

  double norm_bound = 2.3;
  double smallball_beta = 0.5;  // window half-width n^-beta
  std::size_t smallball_m = 2000;
  double smallball_bound = 0.25;
  std::size_t minctrl_kmax = 0;  // 0 means n

  std::size_t threads = 0;  // 0 means hardware concurrency
  std::string out;          // empty means stdout
  OutputFormat format = OutputFormat::csv;
  std::string records;      // optional per-trial CSV
};

struct ScenarioInfo {
  std::string id;
  std::string summary;
  TrialKind kind;
  bool integer_ensemble;  // sampled as exact integers (G(n,p))
  bool fixture = false;   // deterministic fixture; p in {0,1} allowed
  ExperimentConfig defaults;
};

namespace detail {

inline ExperimentConfig base(std::string id, std::vector<std::size_t> grid, std::size_t trials, RunMethod m,
                             std::string vec) {
  ExperimentConfig c;
  c.scenario = std::move(id);
  c.n_grid = std::move(grid);
  c.trials = trials;
  c.method = m;
  c.vector = std::move(vec);
  c.seed = 20160607;
  return c;
}

}  // namespace detail

/// One preset per result being measured. Every preset is a complete, valid
/// configuration.
inline const std::vector<ScenarioInfo>& scenario_table() {
  using detail::base;
  using K = TrialKind;
  using M = RunMethod;
  static const std::vector<ScenarioInfo> table = [] {
    std::vector<ScenarioInfo> t;
    t.push_back({"conj1", "G(n,p) adjacency; success iff (A,e_i) controllable for every i", K::all_basis, true,
                 false, base("conj1", {8, 16, 24}, 200, M::both, "standard-basis")});
    t.push_back({"conj2", "G(n,p) adjacency with the all-ones input", K::single_input, true, false,
                 base("conj2", {8, 16, 24}, 200, M::both, "all-ones")});
    t.push_back({"thm-wigner-basis", "W+F (scaled G(n,p) law); success iff (W+F,e_i) controllable for every i",
                 K::all_basis, false, false, base("thm-wigner-basis", {8, 16, 32, 64}, 200, M::float_pbh,
                                                  "standard-basis")});
    t.push_back({"thm-wigner-rand", "W+F with input b+mu, b iid atom, mu = p/sigma", K::single_input, false, false,
                 base("thm-wigner-rand", {8, 16, 32, 64}, 200, M::float_pbh, "shifted-atom")});
    t.push_back({"thm-wigner-sphere", "W+F with input uniform on the unit sphere", K::single_input, false, false,
                 base("thm-wigner-sphere", {8, 16, 32, 64}, 200, M::float_pbh, "uniform-sphere")});
    t.push_back({"cor-gnp-rand", "G(n,p) adjacency with an iid 0/1 input of parameter p", K::single_input, true,
                 false, base("cor-gnp-rand", {8, 16, 24}, 200, M::both, "bernoulli01")});
    t.push_back({"thm-goe", "GOE matrix with a fixed nonzero input (e_1 by default)", K::single_input, false, false,
                 base("thm-goe", {10, 30}, 1000, M::float_pbh, "standard-basis")});
    t.push_back({"diag-mingap", "W+F; success iff min eigenvalue gap > gap_tol*max(1,|A|)", K::min_gap, false,
                 false, base("diag-mingap", {8, 16, 32, 64}, 200, M::float_pbh, "standard-basis")});
    t.push_back({"diag-smallball", "W+F; success iff rho_hat(v) <= smallball_bound for a sampled eigenvector v",
                 K::small_ball, false, false,
                 base("diag-smallball", {8, 16, 32, 64}, 50, M::float_pbh, "standard-basis")});
    t.push_back({"diag-norm", "Rademacher Wigner W; success iff |W|/sqrt(n) <= norm_bound", K::norm, false, false,
                 base("diag-norm", {100, 400}, 200, M::float_pbh, "standard-basis")});
    t.push_back({"minctrl-gnp", "G(n,p); success iff the sparsest controllable 0/1 input has support 1",
                 K::sparsest_input, true, false, base("minctrl-gnp", {6, 8, 10}, 100, M::exact, "standard-basis")});
    ScenarioInfo kn{"kn-allones", "fixture: complete graph K_n with the all-ones input (never controllable)",
                    K::single_input, true, true, base("kn-allones", {5}, 10, M::both, "all-ones")};
    kn.defaults.p = 1.0;
    t.push_back(kn);
    return t;
  }();
  return table;
}

inline const ScenarioInfo& scenario_info(const std::string& id) {
  for (const auto& s : scenario_table())
    if (s.id == id) return s;
  throw ConfigError("unknown scenario '" + id + "'");
}

inline std::vector<ExperimentConfig> scenario_presets() {
  std::vector<ExperimentConfig> out;
  for (const auto& s : scenario_table()) out.push_back(s.defaults);
  return out;
}

inline ExperimentConfig preset(const std::string& id) { return scenario_info(id).defaults; }

// ---------------------------------------------------------------------------
// Resolved plan: what gets sampled for a config
// ---------------------------------------------------------------------------

struct ScenarioPlan {
  TrialKind kind;
  EnsembleKind ensemble;
  VectorSpec vector;
  AtomDistribution atom;  // off-diagonal atom (small-ball scenarios use it)
  bool integer_ensemble;
  bool integer_vector;
};

inline VectorSpec vector_spec(const ExperimentConfig& c, const AtomDistribution& atom) {
  const std::string& v = c.vector;
  if (v == "standard-basis") return VectorSpec{vectors::StandardBasis{c.vector_index}};
  if (v == "all-ones") return VectorSpec{vectors::AllOnes{}};
  if (v == "bernoulli01") return VectorSpec{vectors::Bernoulli01{c.p}};
  if (v == "iid-atom") return VectorSpec{vectors::IidAtom{atom}};
  if (v == "uniform-sphere") return VectorSpec{vectors::UniformSphere{}};
  if (v == "shifted-atom") {
    if (!(c.p > 0.0 && c.p < 1.0)) throw ConfigError("shifted-atom input needs 0 < p < 1");
    const double sigma = std::sqrt(c.p * (1.0 - c.p));
    return VectorSpec::shifted(VectorSpec{vectors::IidAtom{atom}}, {c.p / sigma});
  }
  throw ConfigError("unknown vector '" + v + "'");
}

inline ScenarioPlan plan(const ExperimentConfig& c) {
  const ScenarioInfo& info = scenario_info(c.scenario);
  ScenarioPlan out{info.kind, ensembles::Goe{}, VectorSpec{vectors::AllOnes{}}, atoms::Rademacher{},
                   info.integer_ensemble, false};
  const std::string& id = info.id;
  if (info.integer_ensemble) {
    out.ensemble = ensembles::GnpAdjacency{c.p};
    out.atom = atoms::Bernoulli01{c.p};
  } else if (id == "thm-goe") {
    out.ensemble = ensembles::Goe{};
    out.atom = atoms::Gaussian{0.0, 1.0};
  } else if (id == "diag-norm") {
    out.ensemble = ensembles::Wigner{atoms::Rademacher{}, atoms::Degenerate{0.0}};
    out.atom = atoms::Rademacher{};
  } else {
    // W + F with the atoms and shift of the scaled G(n,p) reduction.
    if (!(c.p > 0.0 && c.p < 1.0)) throw ConfigError("scenario " + id + " needs 0 < p < 1");
    const double sigma = std::sqrt(c.p * (1.0 - c.p));
    out.atom = atoms::CenteredBernoulli{c.p};
    out.ensemble = ensembles::ShiftedWigner{out.atom, atoms::Degenerate{0.0}, shifts::ConstantOffdiag{c.p / sigma}};
  }
  out.vector = vector_spec(c, out.atom);
  out.integer_vector = c.vector == "standard-basis" || c.vector == "all-ones" || c.vector == "bernoulli01";
  return out;
}

/// Method actually used at dimension n: `both` degrades to float-pbh when
/// the exact path does not apply.
inline RunMethod effective_method(const ExperimentConfig& c, const ScenarioPlan& pl, std::size_t n) {
  switch (pl.kind) {
    case TrialKind::min_gap:
    case TrialKind::small_ball:
    case TrialKind::norm:
      return RunMethod::float_pbh;
    case TrialKind::sparsest_input:
      return c.method == RunMethod::float_pbh ? RunMethod::float_pbh : RunMethod::exact;
    default:
      break;
  }
  const bool exact_ok = pl.integer_ensemble && (pl.integer_vector || pl.kind == TrialKind::all_basis) &&
                        n <= c.exact_cap;
  if (c.method == RunMethod::both && !exact_ok) return RunMethod::float_pbh;
  return c.method;
}

inline void validate(const ExperimentConfig& c) {
  const ScenarioInfo& info = scenario_info(c.scenario);
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  for (std::size_t k = 0; k < c.n_grid.size(); ++k) {
    if (c.n_grid[k] < 1) throw ConfigError("n-grid entries must be >= 1");
    if (k > 0 && c.n_grid[k] <= c.n_grid[k - 1]) throw ConfigError("n-grid must be strictly increasing");
  }
  if (info.fixture) {
    if (!(c.p >= 0.0 && c.p <= 1.0)) throw ConfigError("p must lie in [0,1]");
  } else if (!(c.p > 0.0 && c.p < 1.0)) {
    throw ConfigError("p must lie in (0,1) for experiment scenarios");
  }
  const auto& t = c.tolerances;
  if (!(t.gap_tol > 0 && t.gap_reject > 0 && t.ortho_tol > 0 && t.ortho_reject > 0))
    throw ConfigError("tolerances must be positive");
  if (t.gap_reject > t.gap_tol || t.ortho_reject > t.ortho_tol)
    throw ConfigError("reject thresholds must not exceed accept thresholds");
  if (c.smallball_m < 1000) throw ConfigError("smallball_m must be >= 1000");
  const ScenarioPlan pl = plan(c);
  if (c.vector == "standard-basis")
    for (std::size_t n : c.n_grid)
      if (c.vector_index >= n) throw ConfigError("vector_index out of range for n=" + std::to_string(n));
  const bool decides = pl.kind == TrialKind::single_input || pl.kind == TrialKind::all_basis ||
                       pl.kind == TrialKind::sparsest_input;
  if (decides && c.method == RunMethod::exact &&
      (!pl.integer_ensemble || (pl.kind == TrialKind::single_input && !pl.integer_vector)))
    throw ConfigError("method=exact needs an integer matrix and input vector");
  for (std::size_t n : c.n_grid)
    if (n > c.exact_cap && effective_method(c, pl, n) == RunMethod::exact)
      throw CapExceeded("n=" + std::to_string(n) + " exceeds the exact cap " + std::to_string(c.exact_cap));
}

// ---------------------------------------------------------------------------
// JSON config
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const ExperimentConfig& c) {
  return nlohmann::json{{"scenario", c.scenario},
                        {"n_grid", c.n_grid},
                        {"p", c.p},
                        {"trials", c.trials},
                        {"seed", c.seed},
                        {"method", to_string(c.method)},
                        {"gap_tol", c.tolerances.gap_tol},
                        {"gap_reject", c.tolerances.gap_reject},
                        {"ortho_tol", c.tolerances.ortho_tol},
                        {"ortho_reject", c.tolerances.ortho_reject},
                        {"exact_cap", c.exact_cap},
                        {"vector", c.vector},
                        {"vector_index", c.vector_index},
                        {"norm_bound", c.norm_bound},
                        {"smallball_beta", c.smallball_beta},
                        {"smallball_m", c.smallball_m},
                        {"smallball_bound", c.smallball_bound},
                        {"minctrl_kmax", c.minctrl_kmax}};
}

/// Applies the keys present in `j` on top of `c`. Unknown keys are errors.
inline void apply_json(ExperimentConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "scenario") c.scenario = v.get<std::string>();
      else if (key == "n_grid") c.n_grid = v.get<std::vector<std::size_t>>();
      else if (key == "p") c.p = v.get<double>();
      else if (key == "trials") c.trials = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "method") c.method = parse_method(v.get<std::string>());
      else if (key == "gap_tol") c.tolerances.gap_tol = v.get<double>();
      else if (key == "gap_reject") c.tolerances.gap_reject = v.get<double>();
      else if (key == "ortho_tol") c.tolerances.ortho_tol = v.get<double>();
      else if (key == "ortho_reject") c.tolerances.ortho_reject = v.get<double>();
      else if (key == "exact_cap") c.exact_cap = v.get<std::size_t>();
      else if (key == "vector") c.vector = v.get<std::string>();
      else if (key == "vector_index") c.vector_index = v.get<std::size_t>();
      else if (key == "norm_bound") c.norm_bound = v.get<double>();
      else if (key == "smallball_beta") c.smallball_beta = v.get<double>();
      else if (key == "smallball_m") c.smallball_m = v.get<std::size_t>();
      else if (key == "smallball_bound") c.smallball_bound = v.get<double>();
      else if (key == "minctrl_kmax") c.minctrl_kmax = v.get<std::size_t>();
      else if (key == "threads") c.threads = v.get<std::size_t>();
      else if (key == "out") c.out = v.get<std::string>();
      else if (key == "format") c.format = parse_format(v.get<std::string>());
      else if (key == "records") c.records = v.get<std::string>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

/// Preset named by j["scenario"], overlaid with the remaining keys.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("scenario") || !j["scenario"].is_string())
    throw ConfigError("config must name a scenario");
  ExperimentConfig c = preset(j["scenario"].get<std::string>());
  apply_json(c, j);
  return c;
}

}  // namespace ctrllab::harness
