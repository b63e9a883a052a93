// Verification suites and machine-readable reports.
//
// A suite is a fixed list of named checks; each check aggregates a residual
// over a batch of seeded sample points. Points are drawn once, sequentially,
// and evaluated independently (serial or OpenMP-parallel); the reduction
// order is fixed, so reports are identical for any worker count. A serial
// reference path is kept alongside the parallel one for testing and for the
// benchmark target.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace quatlike {

struct RunConfig {
  std::string manifold = "flat-cone";
  int n_h = 1;
  int points = 100;
  uint64_t seed = 1;
  double tol = 1e-8;
  int order = 3;
  int parallel = 0;          // OpenMP worker count; 0 = library default
  bool serial = false;       // force the serial reference path
  std::string liftdata_path;  // user LiftData for the lift suite
};

struct CheckResult {
  std::string name;
  std::string eq_label;
  double max_residual = 0.0;  // for detection checks: the minimum over points
  double threshold = 0.0;
  bool detection = false;  // pass means the residual EXCEEDS the threshold
  bool pass = false;
};

struct Report {
  std::string suite;
  std::string manifold;
  int n_h = 1;
  uint64_t seed = 1;
  double tolerance = 1e-8;
  int points = 0;
  std::vector<CheckResult> checks;
  long long wall_time_ms = 0;

  bool all_pass() const;
  std::string to_json() const;  // stable key order, 17-significant-digit floats
};

const std::vector<std::string>& suite_names();

Report run_suite(const std::string& suite, const RunConfig& cfg);

}  // namespace quatlike
