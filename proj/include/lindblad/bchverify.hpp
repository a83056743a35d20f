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

#include <vector>

#include "lindblad/model.hpp"

namespace lindblad {

inline constexpr int kBchMaxSites = 4;
inline constexpr int kBchTruncationMaxSites = 3;

// 4^n matrix of one second-order step S(t) on the full register.
ComplexMatrix step_superop_matrix(const LindbladModel& model, double t);

// Principal log of S(t). Throws GuardError when the spectral radius of
// S(t) - I exceeds 0.5.
ComplexMatrix effective_generator(const LindbladModel& model, double t);

struct Phi3Extraction {
  ComplexMatrix phi3;             // (4 D(t_ref / 2) - D(t_ref)) / 3
  std::vector<double> residuals;  // ||estimate(t) - estimate(t / 2)|| for t = t_ref, t_ref / 2
  double residual_ratio = 0.0;    // residuals[0] / residuals[1]
  bool converged = false;         // ratio >= 8, or both residuals at roundoff level
};

// D(t) = (effective_generator(t) - t L) / t^3.
Phi3Extraction extract_phi3(const LindbladModel& model, double t_ref);

// Exact fit of effective_generator(t) - t L at t, t/2, t/4, t/8 onto
// t^2, t^3, t^4, t^5. For a symmetric formula the t^2 coefficient vanishes.
struct EvenOrderDiagnostic {
  double c2_norm = 0.0;
  double c3_norm = 0.0;
  double relative() const { return c3_norm > 0.0 ? c2_norm / c3_norm : c2_norm; }
};
EvenOrderDiagnostic even_order_diagnostic(const LindbladModel& model, double t);

struct TruncationPoint {
  double t = 0.0;
  double distance = 0.0;  // ||expm(t L + t^3 Phi3) - S(t)||_2
  double bound = 0.0;     // e * alpha_comm,3(t)
  bool certified = false; // analytic remainder available at this t
  bool holds = false;     // distance <= bound (meaningful when certified)
};

struct TruncationReport {
  std::vector<TruncationPoint> points;
  double phi3_norm = 0.0;
  double alpha3_over_9 = 0.0;
  double phi2_relative = 0.0;
  double slope = 0.0;  // log-log fit of distance against t
  double intercept = 0.0;
  double r_squared = 0.0;
  bool phi3_converged = false;
};

// q0 must be 3. Phi3 is extracted once at t_ref and reused on the grid.
TruncationReport verify_bch_truncation(const LindbladModel& model, int q0,
                                       const std::vector<double>& t_grid, double t_ref = 0.05);

}  // namespace lindblad
