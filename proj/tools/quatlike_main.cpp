// quatlike: verification suites for the cone correspondence, run against
// catalog manifolds or user LiftData, emitting machine-readable reports.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage error,
// 3 unknown manifold, 4 malformed LiftData, 5 nonpositive point count.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "quatlike/catalog.hpp"
#include "quatlike/report.hpp"

using namespace quatlike;

int main(int argc, char** argv) {
  CLI::App app{"quaternionic-like geometry verification suites"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string out_path;
  std::string suite_chosen;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--manifold", cfg.manifold,
                    "catalog entry: flat-cone, flat-cone-pos, deformed-cone, "
                    "rigid-flat");
    sub->add_option("--nh", cfg.n_h, "quaternionic dimension n_H");
    sub->add_option("--n", cfg.n_h, "block count for rigid-flat");
    sub->add_option("--points", cfg.points, "sample points per check");
    sub->add_option("--seed", cfg.seed, "sampling / deformation seed");
    sub->add_option("--tol", cfg.tol, "default residual tolerance");
    sub->add_option("--order", cfg.order, "jet order (default 3)");
    sub->add_option("--out", out_path, "write the JSON report to a file");
    sub->add_option("--parallel", cfg.parallel, "OpenMP worker count");
    sub->add_flag("--serial", cfg.serial, "force the serial reference path");
    sub->add_option("--liftdata", cfg.liftdata_path,
                    "user LiftData JSON (lift suite)");
  };
  for (const std::string& name : suite_names()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " suite");
    add_common(sub);
    sub->callback([&suite_chosen, name] { suite_chosen = name; });
  }
  CLI::App* man = app.add_subcommand("manifest", "print the catalog manifest");
  man->callback([&suite_chosen] { suite_chosen = "manifest"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (suite_chosen == "manifest") {
    std::cout << catalog_manifest_json();
    return 0;
  }

  try {
    Report rep = run_suite(suite_chosen, cfg);
    std::string json = rep.to_json();
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "cannot open " << out_path << "\n";
        return 2;
      }
      out << json;
    } else {
      std::cout << json;
    }
    return rep.all_pass() ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    if (msg.rfind("unknown manifold", 0) == 0) return 3;
    if (msg.rfind("points must be positive", 0) == 0) return 5;
    return 2;
  } catch (const std::runtime_error& e) {
    std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    if (msg.rfind("liftdata", 0) == 0) return 4;
    return 2;
  }
}
