// Run configuration plus CSV / JSON / SVG report emission for the CLI.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ylab/functional.hpp"
#include "ylab/scan.hpp"
#include "ylab/statics.hpp"

namespace ylab {

std::string version();

struct RunConfig {
  std::string command;
  int k = 2;
  int l = 2;
  double t = 1.0;
  double t_min = 1.0;
  double t_max = 2.0;
  int steps = 16;
  int l_max = 6;
  int degree = 0;  // 0 -> 4 * l_max
  int restarts = 8;
  std::uint64_t seed = 42;
  double tol = 1e-6;
  std::string out;             // empty -> stdout
  std::string format = "csv";  // csv | json | svg (scan only)
  bool with_minimizer = false;
  bool full_basis = false;
  std::string config_path;

  nlohmann::ordered_json to_json() const;
};

// {"k":..,"l":..,"t":..,"factor":"sphere"}
nlohmann::ordered_json family_json(const ProductFamily& fam);

// Loads `key = value` lines (# comments allowed) into the config; keys are
// the long flag names without the leading dashes. Unknown keys are errors.
// Values already set on the command line take precedence, so this is applied
// to the defaults before flags are parsed.
bool apply_config_file(RunConfig& cfg, const std::string& path, std::string* error);

nlohmann::ordered_json meta_json(const RunConfig& cfg, double walltime_ms);

// Scan CSV: header comments (version/config/seed/walltime), then the stable
// column schema t,s,lambda1,threshold,classification,energy,estimate,drop.
std::string scan_csv(const std::vector<ScanRecord>& records, const RunConfig& cfg,
                     double walltime_ms);
nlohmann::ordered_json scan_json(const std::vector<ScanRecord>& records);

// Two-panel polyline plot (energies; lambda1 vs threshold) with the critical
// parameter marked.
std::string scan_svg(const std::vector<ScanRecord>& records, int k);

std::string trace_csv(const std::vector<TraceRow>& trace, const RunConfig& cfg,
                      double walltime_ms);

nlohmann::ordered_json static_report_json(const StaticReport& rep);

// Subcommand drivers; exit codes: 0 ok, 1 numerical failure, 2 usage error.
int run_invariants(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_minimize(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_static_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace ylab
