#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sasaki {

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_violation = 2 };

struct RunConfig {
  std::string command;  // solve, path, flow, scan, pinch, spectrum, curvature, verify-all
  int grid_n = 128;
  std::uint64_t seed = 2024;
  std::string out_dir = "sasaki-out";
  // newton, monotonicity, identity, integral, monitor, scan_F, pinch
  std::map<std::string, double> tolerances;

  std::string psi = "0.3*(1-x^2)";  // base structure of solve, path, flow, pinch
  std::string phi = "0";            // structure probed by spectrum
  double t = 1.0;                   // solve
  double t_start = 0.1;
  double t_end = 1.0;
  double dt = 0.05;
  double dt_min = 1e-4;
  bool with_K = true;
  double ds = 1e-3;
  double s_end = 5.0;
  int record_every = 10;
  std::string family = "mobius";  // mobius or bump
  std::vector<double> params = {1.0, 2.0, 4.0, 8.0, 16.0};
  double eps = 0.05;
  int k = 8;
  int m = 2;
  double c = 4.0;
  int samples = 20;
};

/// Defaults of every known tolerance key.
std::map<std::string, double> default_tolerances();

/// Applies a JSON document (same keys as RunConfig) over cfg. Unknown keys,
/// wrong types and bad values throw ConfigError.
RunConfig apply_config_json(const std::string& text, RunConfig cfg = {});

/// The configuration as canonical JSON.
std::string config_json(const RunConfig& cfg);

/// Throws ConfigError when a field is out of range.
void validate(const RunConfig& cfg);

/// Runs the pipeline, writes artifacts and manifest.json under cfg.out_dir.
/// Returns 0, 1 on configuration errors, 2 when a checked identity fails.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace sasaki
