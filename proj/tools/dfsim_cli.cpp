// Copyright 2026 The dfsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: runs one scenario config and exits with
//   0 all verdicts pass, 2 config/IO error, 3 numerical contract violation,
//   4 at least one verdict failed.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dfsim/scenario/config.hpp"
#include "dfsim/scenario/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dfsim: paired-qubit decoherence-free code and gate-constraint experiments"};
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  double tol_scale = 1.0;
  app.add_option("--config", config_path, "Scenario config (JSON)")->required();
  app.add_option("--out", out_dir, "Output directory (overrides the config's \"output\")");
  app.add_option("--seed", seed, "RNG seed (overrides params.seed)");
  app.add_option("--tol-scale", tol_scale, "Multiply all verdict tolerances (debugging only)")
      ->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  using namespace dfsim;
  try {
    const auto config = scenario::load_config(config_path);
    scenario::RunOptions options;
    options.out_dir = !out_dir.empty() ? out_dir : (!config.output.empty() ? config.output : "out/" + scenario::to_string(config.scenario));
    options.seed = seed;
    options.tol_scale = tol_scale;
    const auto report = scenario::run_scenario(config, options);
    std::cout << scenario::render(report);
    return report.all_passed() ? 0 : 4;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
