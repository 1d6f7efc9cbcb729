// Command-line front end for the controllability experiments.
//
//   ctrllab --list-scenarios
//   ctrllab --scenario conj1 --n 8,16,32 --trials 200 --method float-pbh
//   ctrllab --config run.json --out report.csv
//   ctrllab --scenario thm-goe --n 30 --trial 17      # replay one trial

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctrllab/ctrllab.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kNumeric = 3,
  kIo = 4,
};

void list_scenarios(std::ostream& os) {
  using namespace ctrllab::harness;
  for (const auto& s : scenario_table()) {
    os << s.id << "\n    " << s.summary << "\n    defaults: n=";
    for (std::size_t k = 0; k < s.defaults.n_grid.size(); ++k) os << (k ? "," : "") << s.defaults.n_grid[k];
    os << " trials=" << s.defaults.trials << " p=" << s.defaults.p << " method=" << to_string(s.defaults.method)
       << " vector=" << s.defaults.vector << "\n";
  }
}

nlohmann::json record_json(const ctrllab::harness::TrialRecord& r) {
  using ctrllab::harness::format_double;
  auto dec = [](const auto& d) { return d ? nlohmann::json(ctrllab::spectral::to_string(*d)) : nlohmann::json(); };
  return {{"scenario", r.scenario},
          {"n", r.n},
          {"trial", r.trial},
          {"master_seed", r.master_seed},
          {"trial_key", r.trial_key},
          {"method", to_string(r.method)},
          {"exact_decision", dec(r.exact_decision)},
          {"float_decision", dec(r.float_decision)},
          {"success", r.success},
          {"indeterminate", r.indeterminate},
          {"disagreement", r.disagreement},
          {"min_gap", format_double(r.min_gap)},
          {"min_abs_inner", format_double(r.min_abs_inner)},
          {"rank", r.rank ? nlohmann::json(*r.rank) : nlohmann::json()},
          {"norm", format_double(r.norm)},
          {"stat", format_double(r.stat)}};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ctrllab;
  using namespace ctrllab::harness;

  CLI::App app{"Controllability experiments for random linear systems"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

  std::string scenario, config_path, method, format, out, records, vector;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> n_grid;
  std::optional<std::size_t> trials, threads, exact_cap, vector_index, trial;
  std::optional<double> p, gap_tol, ortho_tol;
  bool list = false;

  app.add_option("--scenario", scenario, "Scenario preset id");
  app.add_option("--config", config_path, "JSON config file; flags override its keys")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--n", n_grid, "Dimension grid, e.g. --n 8,16,32")->delimiter(',');
  app.add_option("--trials", trials, "Trials per dimension")->check(CLI::PositiveNumber);
  app.add_option("--p", p, "Edge / Bernoulli parameter");
  app.add_option("--method", method, "exact, float-pbh or both");
  app.add_option("--out", out, "Output path (default stdout)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--gap-tol", gap_tol, "Relative eigenvalue-gap acceptance threshold");
  app.add_option("--ortho-tol", ortho_tol, "Relative eigenvector/input acceptance threshold");
  app.add_flag("--list-scenarios", list, "List scenario presets and exit");
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  app.add_option("--records", records, "Also write per-trial records as CSV");
  app.add_option("--vector", vector, "Input vector family override");
  app.add_option("--vector-index", vector_index, "Index for --vector standard-basis (0-based)");
  app.add_option("--exact-cap", exact_cap, "Largest n for the exact decider");
  app.add_option("--trial", trial, "Re-run one trial index in isolation and print its record");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    list_scenarios(std::cout);
    return kOk;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(f);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("cannot parse config: ") + e.what());
      }
      if (!scenario.empty()) j["scenario"] = scenario;
      cfg = config_from_json(j);
    } else {
      if (scenario.empty()) throw ConfigError("either --scenario or --config is required");
      cfg = preset(scenario);
    }
    if (seed) cfg.seed = *seed;
    if (!n_grid.empty()) cfg.n_grid = n_grid;
    if (trials) cfg.trials = *trials;
    if (p) cfg.p = *p;
    if (!method.empty()) cfg.method = parse_method(method);
    if (!out.empty()) cfg.out = out;
    if (!format.empty()) cfg.format = parse_format(format);
    if (gap_tol) cfg.tolerances.gap_tol = *gap_tol;
    if (ortho_tol) cfg.tolerances.ortho_tol = *ortho_tol;
    if (threads) cfg.threads = *threads;
    if (!records.empty()) cfg.records = records;
    if (!vector.empty()) cfg.vector = vector;
    if (vector_index) cfg.vector_index = *vector_index;
    if (exact_cap) cfg.exact_cap = *exact_cap;

    if (trial) {
      validate(cfg);
      if (cfg.n_grid.size() != 1) throw ConfigError("--trial needs exactly one dimension in --n");
      const TrialRecord r = run_trial(cfg, cfg.n_grid.front(), *trial);
      std::cout << record_json(r).dump(2) << '\n';
      return kOk;
    }

    const ExperimentReport rep = run_experiment(cfg);
    report_emit(rep, cfg.format, cfg.out, std::cout);
    if (!cfg.records.empty()) {
      std::ofstream f(cfg.records, std::ios::binary | std::ios::trunc);
      if (!f) throw IoError("cannot open records file '" + cfg.records + "'");
      write_records_csv(f, rep.records);
      if (!f) throw IoError("failed writing records file '" + cfg.records + "'");
    }
    return kOk;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
