#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "quatlike/report.hpp"

using namespace quatlike;

namespace {

std::string strip_wall_time(const std::string& json) {
  std::string out;
  std::istringstream is(json);
  std::string line;
  while (std::getline(is, line))
    if (line.find("wall_time_ms") == std::string::npos) out += line + "\n";
  return out;
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  std::string cmd = std::string(QUATLIKE_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int rc = pclose(pipe);
  if (output) *output = out;
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("serial and parallel runs produce identical reports") {
  RunConfig cfg;
  cfg.manifold = "flat-cone";
  cfg.n_h = 1;
  cfg.points = 8;
  cfg.seed = 3;
  cfg.serial = true;
  Report a = run_suite("verify-structure", cfg);
  cfg.serial = false;
  cfg.parallel = 2;
  Report b = run_suite("verify-structure", cfg);
  CHECK(strip_wall_time(a.to_json()) == strip_wall_time(b.to_json()));
  CHECK(a.all_pass());
}

TEST_CASE("repeated runs are deterministic") {
  RunConfig cfg;
  cfg.manifold = "rigid-flat";
  cfg.n_h = 1;
  cfg.points = 10;
  cfg.seed = 5;
  Report a = run_suite("connections", cfg);
  Report b = run_suite("connections", cfg);
  CHECK(strip_wall_time(a.to_json()) == strip_wall_time(b.to_json()));
}

TEST_CASE("report JSON carries the schema fields in stable order") {
  RunConfig cfg;
  cfg.manifold = "rigid-flat";
  cfg.points = 2;
  Report r = run_suite("verify-structure", cfg);
  std::string j = r.to_json();
  size_t schema = j.find("\"schema\"");
  size_t manifold = j.find("\"manifold\"");
  size_t checks = j.find("\"checks\"");
  size_t wall = j.find("\"wall_time_ms\"");
  CHECK(schema != std::string::npos);
  CHECK(schema < manifold);
  CHECK(manifold < checks);
  CHECK(checks < wall);
  CHECK(j.find("\"paper_eq_label\"") != std::string::npos);
}

TEST_CASE("cli exit codes: pass, usage, unknown manifold, bad liftdata, points") {
  std::string out;
  int rc = run_cli("verify-structure --manifold rigid-flat --n 1 --points 3", &out);
  CHECK(rc == 0);
  CHECK(out.find("\"all_pass\": true") != std::string::npos);

  rc = run_cli("no-such-suite");
  CHECK(rc == 2);

  rc = run_cli("curvature --manifold no-such-manifold --points 2");
  CHECK(rc == 3);

  {
    std::ofstream bad("/tmp/quatlike_bad_liftdata.json");
    bad << "{\"schema\": 99}";
  }
  rc = run_cli("lift --liftdata /tmp/quatlike_bad_liftdata.json --points 2", &out);
  CHECK(rc == 4);
  CHECK(out.empty());  // no partial report

  rc = run_cli("verify-structure --manifold rigid-flat --points 0");
  CHECK(rc == 5);
}

TEST_CASE("cli reports are byte-identical across repeated invocations") {
  std::string a, b;
  int ra = run_cli(
      "verify-structure --manifold rigid-flat --n 1 --points 4 --seed 9", &a);
  int rb = run_cli(
      "verify-structure --manifold rigid-flat --n 1 --points 4 --seed 9", &b);
  CHECK(ra == 0);
  CHECK(rb == 0);
  CHECK(strip_wall_time(a) == strip_wall_time(b));
}

TEST_CASE("user liftdata runs through the lift suite") {
  std::ofstream f("/tmp/quatlike_user_liftdata.json");
  f << R"({"schema":1,"n_h":1,"J":"standard-constant",
       "A":[[],[],[],[],[],[],[],[],[],[],[],[]],
       "h":null,"k_alpha":"su2-standard","z0_range":[0.5,2.0]})";
  f.close();
  std::string out;
  int rc = run_cli(
      "lift --liftdata /tmp/quatlike_user_liftdata.json --points 4 --seed 2",
      &out);
  CHECK(rc == 0);
  CHECK(out.find("lifted-nijenhuis") != std::string::npos);
}

TEST_CASE("manifest subcommand prints the catalog") {
  std::string out;
  int rc = run_cli("manifest", &out);
  CHECK(rc == 0);
  CHECK(out.find("flat-cone") != std::string::npos);
}
