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
#include <vector>

#include "lindblad/model.hpp"
#include "lindblad/propagate.hpp"

namespace lindblad {

// Node j runs base_steps * r_nodes[j] Trotter steps of size
// s_steps[j] * t, i.e. s_j = s_0 / r_j with 1 / s_0 = base_steps.
struct ExtrapolationPlan {
  int p = 1;
  std::vector<long> r_nodes;
  long base_steps = 1;
  std::vector<double> s_steps;
  std::vector<double> b_coeffs;
  double b_l1 = 1.0;
  long shots = 0;  // 0 selects deterministic mode
  std::uint64_t seed = 0;

  long steps_at(size_t j) const { return base_steps * r_nodes[j]; }
};

// r_j = ceil(sqrt(8) p / (pi sin(pi (2j - 1) / (8p)))), j = 1..p.
std::vector<long> nodes(int p);

// b_j = prod_{l != j} 1 / (1 - r_l^2 / r_j^2).
std::vector<double> coefficients(const std::vector<long>& r_nodes);
std::vector<double> coefficients(const std::vector<double>& r_nodes);

double l1_norm(const std::vector<double>& b);

// sum_j b_j values_j
double extrapolate(const std::vector<double>& values, const std::vector<double>& b_coeffs);

// Plan with explicit node ratios (for instance {1, 2, 4}) and base step count.
ExtrapolationPlan make_ratio_plan(const std::vector<long>& ratios, long base_steps, long shots = 0,
                                  std::uint64_t seed = 0);

// Checks sum b = 1, the moment conditions, distinct nodes and consistent sizes.
void validate_plan(const ExtrapolationPlan& plan);

struct Algorithm1Result {
  double estimate = 0.0;
  std::vector<double> node_means;
};

// Shots are drawn in batches of this size; batch b of node j uses an
// mt19937_64 seeded by seed_seq{seed, j, b}.
inline constexpr long kShotBatch = 4096;

// Deterministic mode evaluates tr[O S(s_j t)^{1/s_j} rho0] exactly. Sampled
// mode measures the evolved state in the computational basis; obs must then
// be diagonal.
Algorithm1Result run_algorithm1(const LindbladModel& model, const ComplexMatrix& obs,
                                const DensityMatrix& rho0, double t, const ExtrapolationPlan& plan,
                                BackendKind backend, int threads = 1);

// Sampled means from precomputed evolved states, one per node.
std::vector<double> sample_node_means(const std::vector<DensityMatrix>& states,
                                      const ComplexMatrix& obs, long shots, std::uint64_t seed);

// Mean of `shots` computational-basis outcomes of obs on rho.
double sample_expectation(const DensityMatrix& rho, const ComplexMatrix& obs, long shots,
                          std::uint64_t seed, std::uint64_t stream);

}  // namespace lindblad
