#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ctrllab/errors.hpp"
#include "ctrllab/experiment.hpp"
#include "ctrllab/scenarios.hpp"

namespace ctrllab::harness {

inline constexpr const char* kCsvHeader =
    "scenario,n,p,trials,successes,indeterminates,frequency,ci_lo,ci_hi,method,seed,gap_tol,ortho_tol";

/// %.17g: enough digits to round-trip any double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv(std::ostream& os, const ExperimentReport& rep) {
  os << kCsvHeader << '\n';
  for (const auto& r : rep.rows) {
    os << r.scenario << ',' << r.n << ',' << format_double(r.p) << ',' << r.trials << ',' << r.successes << ','
       << r.indeterminates << ',' << format_double(r.frequency) << ',' << format_double(r.ci_lo) << ','
       << format_double(r.ci_hi) << ',' << r.method << ',' << r.seed << ',' << format_double(r.gap_tol) << ','
       << format_double(r.ortho_tol) << '\n';
  }
}

inline nlohmann::json row_to_json(const ReportRow& r) {
  nlohmann::json j{{"scenario", r.scenario},
                   {"n", r.n},
                   {"p", r.p},
                   {"trials", r.trials},
                   {"successes", r.successes},
                   {"failures", r.failures},
                   {"indeterminates", r.indeterminates},
                   {"disagreements", r.disagreements},
                   {"frequency", r.frequency},
                   {"ci_lo", r.ci_lo},
                   {"ci_hi", r.ci_hi},
                   {"method", r.method},
                   {"seed", r.seed},
                   {"gap_tol", r.gap_tol},
                   {"ortho_tol", r.ortho_tol}};
  j["stat_mean"] = r.stat_mean ? nlohmann::json(*r.stat_mean) : nlohmann::json(nullptr);
  return j;
}

inline ReportRow row_from_json(const nlohmann::json& j) {
  ReportRow r;
  r.scenario = j.at("scenario").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.p = j.at("p").get<double>();
  r.trials = j.at("trials").get<std::size_t>();
  r.successes = j.at("successes").get<std::size_t>();
  r.failures = j.at("failures").get<std::size_t>();
  r.indeterminates = j.at("indeterminates").get<std::size_t>();
  r.disagreements = j.at("disagreements").get<std::size_t>();
  r.frequency = j.at("frequency").get<double>();
  r.ci_lo = j.at("ci_lo").get<double>();
  r.ci_hi = j.at("ci_hi").get<double>();
  r.method = j.at("method").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.gap_tol = j.at("gap_tol").get<double>();
  r.ortho_tol = j.at("ortho_tol").get<double>();
  if (!j.at("stat_mean").is_null()) r.stat_mean = j.at("stat_mean").get<double>();
  return r;
}

inline nlohmann::json report_to_json(const ExperimentReport& rep) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows) rows.push_back(row_to_json(r));
  return nlohmann::json{{"tool", kToolName},
                        {"version", rep.tool_version},
                        {"seed", rep.config.seed},
                        {"config", to_json(rep.config)},
                        {"rows", rows}};
}

/// Rebuilds rows, version and config from emitted JSON. Trial records are
/// not part of the JSON report.
inline ExperimentReport report_from_json(const nlohmann::json& j) {
  try {
    ExperimentReport rep;
    rep.tool_version = j.at("version").get<std::string>();
    rep.config = config_from_json(j.at("config"));
    for (const auto& r : j.at("rows")) rep.rows.push_back(row_from_json(r));
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report JSON: ") + e.what());
  }
}

inline void write_json(std::ostream& os, const ExperimentReport& rep) { os << report_to_json(rep).dump(2) << '\n'; }

inline void write_report(std::ostream& os, const ExperimentReport& rep, OutputFormat format) {
  if (format == OutputFormat::csv) write_csv(os, rep);
  else write_json(os, rep);
}

inline void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& recs) {
  auto dec = [](const std::optional<spectral::Decision>& d) -> std::string {
    return d ? spectral::to_string(*d) : "";
  };
  os << "scenario,n,trial,master_seed,trial_key,method,exact_decision,float_decision,success,indeterminate,"
        "disagreement,min_gap,min_abs_inner,rank,norm,stat,wall_seconds\n";
  for (const auto& r : recs) {
    os << r.scenario << ',' << r.n << ',' << r.trial << ',' << r.master_seed << ',' << r.trial_key << ','
       << to_string(r.method) << ',' << dec(r.exact_decision) << ',' << dec(r.float_decision) << ','
       << (r.success ? 1 : 0) << ',' << (r.indeterminate ? 1 : 0) << ',' << (r.disagreement ? 1 : 0) << ','
       << format_double(r.min_gap) << ',' << format_double(r.min_abs_inner) << ','
       << (r.rank ? std::to_string(*r.rank) : std::string()) << ',' << format_double(r.norm) << ','
       << format_double(r.stat) << ',' << format_double(r.wall_seconds) << '\n';
  }
}

/// Writes the report to `path`, or to `fallback` when path is empty.
inline void report_emit(const ExperimentReport& rep, OutputFormat format, const std::string& path,
                        std::ostream& fallback) {
  if (path.empty()) {
    write_report(fallback, rep, format);
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file '" + path + "'");
  write_report(f, rep, format);
  f.flush();
  if (!f) throw IoError("failed writing output file '" + path + "'");
}

inline std::string to_csv_string(const ExperimentReport& rep) {
  std::ostringstream os;
  write_csv(os, rep);
  return os.str();
}

}  // namespace ctrllab::harness
