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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lindblad/propagate.hpp"

namespace lindblad {

enum class Experiment { TrotterErrorScan, Extrapolate, Bounds, VerifyBch, Simulate };

std::string to_string(Experiment e);
Experiment parse_experiment(const std::string& name);

inline constexpr int kDefaultMaxSites = 8;
inline constexpr int kLargeMaxSites = 10;

struct ModelConfig {
  std::vector<int> n_values;
  double j_coupling = 1.0;
  double h_field = 0.5;
  std::vector<double> gammas;
};

struct TrotterConfig {
  int order = 2;
  std::vector<long> r_values;
};

// Exactly one of p, node_ratios, eps selects the nodes. eps asks the planner
// for the full plan.
struct ExtrapolationConfig {
  std::optional<int> p;
  std::vector<long> node_ratios;
  std::optional<double> eps;
  long shots = -1;  // unset: 0 for fixed nodes, the Hoeffding count for eps
  std::uint64_t seed = 0;
  int q0 = 3;
};

struct BoundsConfig {
  double eps = 1e-3;
  int q_max = 4;
  int q0 = 3;
};

struct BchConfig {
  std::vector<double> t_grid = {0.2, 0.1, 0.05, 0.025};
  double t_ref = 0.05;
  int q0 = 3;
};

struct RunConfig {
  Experiment experiment = Experiment::TrotterErrorScan;
  ModelConfig model;
  double time = 0.2;
  TrotterConfig trotter;
  std::vector<InitialState> initial_states = {InitialState::AllOnes};
  std::string observable = "total_magnetization";
  std::optional<ExtrapolationConfig> extrapolation;
  BoundsConfig bounds;
  BchConfig bch;
  std::string output = "run";
  // Canonical JSON text of the parsed document; hashed into the manifest.
  std::string canonical;
};

struct ConfigOverrides {
  std::optional<Experiment> experiment;
  std::optional<std::string> output;
  std::optional<std::uint64_t> seed;
  bool allow_large_n = false;
};

// Throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& json_text, const ConfigOverrides& overrides = {});
RunConfig load_config(const std::string& path, const ConfigOverrides& overrides = {});

// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace lindblad
