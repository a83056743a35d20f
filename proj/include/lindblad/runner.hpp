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

#include <string>
#include <vector>

#include "lindblad/config.hpp"
#include "lindblad/fit.hpp"

namespace lindblad {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Floats in CSV and JSON artifacts use 17 significant digits.
std::string format_real(double x);

struct ScanRow {
  int n = 0;
  double gamma = 0.0;
  long r = 0;
  double t = 0.0;
  int order = 2;
  InitialState initial_state = InitialState::AllOnes;
  double trace_distance_error = 0.0;
  double expectation = 0.0;        // tr[O rho_r] after r Trotter steps
  double exact_expectation = 0.0;  // tr[O e^{tL} rho_0]
};

// Rows sorted by (n, gamma, r, initial_state); independent of `threads`.
std::vector<ScanRow> run_error_scan(const RunConfig& cfg, int threads);

std::string scan_csv(const std::vector<ScanRow>& rows);
std::string simulate_csv(const std::vector<ScanRow>& rows);

struct GroupFit {
  std::string x;
  std::string y;
  double gamma = 0.0;
  long r = 0;  // 0 when the group is not keyed by r
  std::string initial_state;
  int n = 0;  // 0 when the group is not keyed by n
  FitResult fit;
  std::string error;  // set instead of fit when the data cannot be fitted
};

// log-log fit of error vs n for every (gamma, r, initial_state) group.
std::vector<GroupFit> scan_fits(const std::vector<ScanRow>& rows);

struct ExtrapolateRow {
  long r_scale = 0;
  double gamma = 0.0;
  double raw_error = 0.0;
  double extrapolated_error = 0.0;
  int p = 0;
  long shots = 0;
  std::uint64_t seed = 0;
  std::vector<long> r_nodes;
  std::vector<double> b_coeffs;
  std::vector<double> node_means;
  double exact_expectation = 0.0;
};

// Rows sorted by (gamma, r_scale). Throws InfeasiblePlanError in eps mode.
std::vector<ExtrapolateRow> run_extrapolation(const RunConfig& cfg, int threads);

std::string extrapolate_csv(const std::vector<ExtrapolateRow>& rows);

// log-log fits of raw and extrapolated error vs r_scale per gamma, restricted
// to errors above 1e-12.
std::vector<GroupFit> extrapolate_fits(const std::vector<ExtrapolateRow>& rows);

std::string fits_json(const std::string& experiment, const std::vector<GroupFit>& fits);

struct RunOptions {
  int threads = 1;
};

struct RunSummary {
  std::vector<std::string> files;
  double wall_seconds = 0.0;
};

// Runs the configured experiment and writes <output>.csv, <output>.fits.json,
// <output>.manifest.json and, for report experiments, <output>.json.
RunSummary run(const RunConfig& cfg, const RunOptions& options = {});

}  // namespace lindblad
