// Benchmark comparing the serial reference point loop against the
// OpenMP-parallel kernels, verifying that both produce identical reports.

#include <chrono>
#include <cstdio>
#include <string>

#include "quatlike/report.hpp"

using namespace quatlike;

namespace {

std::string strip_wall_time(const std::string& json) {
  std::string out;
  for (size_t i = 0; i < json.size();) {
    size_t e = json.find('\n', i);
    if (e == std::string::npos) e = json.size();
    std::string line = json.substr(i, e - i);
    if (line.find("wall_time_ms") == std::string::npos) {
      out += line;
      out += '\n';
    }
    i = e + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  cfg.manifold = argc > 1 ? argv[1] : "flat-cone";
  cfg.n_h = argc > 2 ? std::atoi(argv[2]) : 1;
  cfg.points = argc > 3 ? std::atoi(argv[3]) : 40;
  std::string suite = argc > 4 ? argv[4] : "verify-structure";

  cfg.serial = true;
  auto t0 = std::chrono::steady_clock::now();
  Report serial = run_suite(suite, cfg);
  auto t1 = std::chrono::steady_clock::now();
  cfg.serial = false;
  Report parallel = run_suite(suite, cfg);
  auto t2 = std::chrono::steady_clock::now();

  double ts = std::chrono::duration<double>(t1 - t0).count();
  double tp = std::chrono::duration<double>(t2 - t1).count();
  bool identical =
      strip_wall_time(serial.to_json()) == strip_wall_time(parallel.to_json());
  std::printf("suite %s on %s (n_h=%d, %d points)\n", suite.c_str(),
              cfg.manifold.c_str(), cfg.n_h, cfg.points);
  std::printf("  serial reference: %8.3f s\n", ts);
  std::printf("  openmp parallel:  %8.3f s   speedup %.2fx\n", tp,
              tp > 0 ? ts / tp : 0.0);
  std::printf("  reports identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
