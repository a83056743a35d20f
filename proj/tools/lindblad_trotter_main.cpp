// Copyright 2026 The lindblad-trotter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lindblad/config.hpp"
#include "lindblad/errors.hpp"
#include "lindblad/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitGuard = 2;
constexpr int kExitInfeasible = 3;

struct Args {
  std::string config;
  std::string out;
  int threads = 1;
  std::uint64_t seed = 0;
  bool allow_large_n = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trotter simulation, error bounds and Richardson extrapolation for Lindblad dynamics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", lindblad::kLibraryVersion);

  Args args;
  CLI::Option* seed_opt = nullptr;
  const char* commands[][2] = {
      {"trotter-error-scan", "trace-distance Trotter error over an (n, gamma, r) grid"},
      {"extrapolate", "Richardson-extrapolated observable error vs r"},
      {"bounds", "commutator bounds and planned step counts"},
      {"verify-bch", "effective-generator checks on small systems"},
      {"simulate", "Trotter and exact expectation values on a grid"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", args.config, "JSON run config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output path prefix (overrides config output)");
    sub->add_option("--threads", args.threads, "worker threads")->check(CLI::Range(1, 256));
    CLI::Option* s = sub->add_option("--seed", args.seed, "master seed (overrides extrapolation.seed)");
    sub->add_flag("--allow-large-n", args.allow_large_n, "permit n up to 10");
    sub->callback([&, s] { seed_opt = s; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    lindblad::ConfigOverrides ov;
    ov.experiment = lindblad::parse_experiment(name);
    if (!args.out.empty()) ov.output = args.out;
    if (seed_opt && seed_opt->count() > 0) ov.seed = args.seed;
    ov.allow_large_n = args.allow_large_n;
    const lindblad::RunConfig cfg = lindblad::load_config(args.config, ov);
    const lindblad::RunSummary summary = lindblad::run(cfg, {args.threads});
    for (const auto& f : summary.files) std::cout << "wrote " << f << "\n";
    std::cout << "wall time " << summary.wall_seconds << " s\n";
    return kExitOk;
  } catch (const lindblad::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const lindblad::InfeasiblePlanError& e) {
    std::cerr << "infeasible plan: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const lindblad::GuardError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return kExitGuard;
  } catch (const lindblad::DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGuard;
  }
}
