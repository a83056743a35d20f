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

#include "lindblad/richardson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

#include "lindblad/errors.hpp"
#include "lindblad/parallel.hpp"

namespace lindblad {

std::vector<long> nodes(int p) {
  if (p < 1) throw std::invalid_argument("nodes: p must be >= 1, got " + std::to_string(p));
  std::vector<long> out;
  out.reserve(static_cast<size_t>(p));
  const double pi = std::numbers::pi;
  for (int j = 1; j <= p; ++j) {
    const double x = std::sqrt(8.0) * p / (pi * std::sin(pi * (2.0 * j - 1.0) / (8.0 * p)));
    out.push_back(static_cast<long>(std::ceil(x)));
  }
  return out;
}

std::vector<double> coefficients(const std::vector<double>& r_nodes) {
  if (r_nodes.empty()) throw std::invalid_argument("coefficients: no nodes");
  std::set<double> seen;
  for (double r : r_nodes) {
    if (!(r > 0.0)) throw std::invalid_argument("coefficients: nodes must be positive");
    if (!seen.insert(r).second) {
      throw std::invalid_argument("coefficients: duplicate node " + std::to_string(r));
    }
  }
  std::vector<double> b(r_nodes.size(), 1.0);
  for (size_t j = 0; j < r_nodes.size(); ++j) {
    for (size_t l = 0; l < r_nodes.size(); ++l) {
      if (l == j) continue;
      const double ratio = r_nodes[l] / r_nodes[j];
      b[j] /= 1.0 - ratio * ratio;
    }
  }
  return b;
}

std::vector<double> coefficients(const std::vector<long>& r_nodes) {
  return coefficients(std::vector<double>(r_nodes.begin(), r_nodes.end()));
}

double l1_norm(const std::vector<double>& b) {
  double s = 0.0;
  for (double v : b) s += std::abs(v);
  return s;
}

double extrapolate(const std::vector<double>& values, const std::vector<double>& b_coeffs) {
  if (values.size() != b_coeffs.size()) {
    throw std::invalid_argument("extrapolate: " + std::to_string(values.size()) + " values but " +
                                std::to_string(b_coeffs.size()) + " coefficients");
  }
  double s = 0.0;
  for (size_t j = 0; j < values.size(); ++j) s += b_coeffs[j] * values[j];
  return s;
}

ExtrapolationPlan make_ratio_plan(const std::vector<long>& ratios, long base_steps, long shots,
                                  std::uint64_t seed) {
  if (base_steps < 1) throw std::invalid_argument("make_ratio_plan: base_steps must be >= 1");
  ExtrapolationPlan plan;
  plan.p = static_cast<int>(ratios.size());
  plan.r_nodes = ratios;
  plan.base_steps = base_steps;
  plan.b_coeffs = coefficients(ratios);
  plan.b_l1 = l1_norm(plan.b_coeffs);
  for (long r : ratios) plan.s_steps.push_back(1.0 / static_cast<double>(base_steps * r));
  plan.shots = shots;
  plan.seed = seed;
  validate_plan(plan);
  return plan;
}

void validate_plan(const ExtrapolationPlan& plan) {
  const size_t p = plan.r_nodes.size();
  if (p == 0 || static_cast<int>(p) != plan.p || plan.b_coeffs.size() != p ||
      plan.s_steps.size() != p) {
    throw std::invalid_argument("plan: inconsistent sizes");
  }
  if (plan.base_steps < 1) throw std::invalid_argument("plan: base_steps must be >= 1");
  if (plan.shots < 0) throw std::invalid_argument("plan: shots must be >= 0");
  std::set<long> seen;
  for (size_t j = 0; j < p; ++j) {
    if (plan.r_nodes[j] < 1 || !seen.insert(plan.r_nodes[j]).second) {
      throw std::invalid_argument("plan: nodes must be distinct and >= 1");
    }
    const double inv = 1.0 / plan.s_steps[j];
    if (std::abs(inv - static_cast<double>(plan.steps_at(j))) > 1e-9 * inv) {
      throw std::invalid_argument("plan: 1/s_" + std::to_string(j + 1) + " is not the integer " +
                                  std::to_string(plan.steps_at(j)));
    }
  }
  double sum = 0.0;
  for (double b : plan.b_coeffs) sum += b;
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("plan: coefficients do not sum to 1");
  for (size_t kappa = 1; kappa < p; ++kappa) {
    double moment = 0.0;
    for (size_t j = 0; j < p; ++j) {
      moment += plan.b_coeffs[j] *
                std::pow(static_cast<double>(plan.r_nodes[j]), -2.0 * static_cast<double>(kappa));
    }
    if (std::abs(moment) > 1e-10) {
      throw std::invalid_argument("plan: moment condition " + std::to_string(kappa) + " violated");
    }
  }
}

namespace {

bool is_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

}  // namespace

double sample_expectation(const DensityMatrix& rho, const ComplexMatrix& obs, long shots,
                          std::uint64_t seed, std::uint64_t stream) {
  if (shots < 1) throw std::invalid_argument("sample_expectation: shots must be >= 1");
  const ComplexMatrix& m = rho.matrix();
  if (obs.rows() != m.rows() || obs.cols() != m.cols()) {
    throw DimensionError("sample_expectation: observable " + linalg::shape(obs) + " vs state " +
                         linalg::shape(m));
  }
  if (!is_diagonal(obs)) {
    throw std::invalid_argument("sample_expectation: observable must be diagonal in the computational basis");
  }
  const long d = m.rows();
  // Roundoff can leave tiny negative populations; they are treated as zero
  // for sampling only.
  std::vector<double> cdf(static_cast<size_t>(d));
  double acc = 0.0;
  for (long i = 0; i < d; ++i) {
    acc += std::max(0.0, m(i, i).real());
    cdf[static_cast<size_t>(i)] = acc;
  }
  if (!(acc > 0.0)) throw GuardError("sample_expectation: state has no positive population");
  double total = 0.0;
  for (long batch = 0, done = 0; done < shots; ++batch) {
    const long count = std::min(kShotBatch, shots - done);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(batch)};
    std::mt19937_64 rng(seq);
    double batch_sum = 0.0;
    for (long s = 0; s < count; ++s) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      if (it == cdf.end()) --it;
      batch_sum += obs(it - cdf.begin(), it - cdf.begin()).real();
    }
    total += batch_sum;
    done += count;
  }
  return total / static_cast<double>(shots);
}

std::vector<double> sample_node_means(const std::vector<DensityMatrix>& states,
                                      const ComplexMatrix& obs, long shots, std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(states.size());
  for (size_t j = 0; j < states.size(); ++j) {
    out.push_back(sample_expectation(states[j], obs, shots, seed, j));
  }
  return out;
}

Algorithm1Result run_algorithm1(const LindbladModel& model, const ComplexMatrix& obs,
                                const DensityMatrix& rho0, double t, const ExtrapolationPlan& plan,
                                BackendKind backend, int threads) {
  validate_plan(plan);
  if (!(t >= 0.0)) throw std::invalid_argument("run_algorithm1: t must be >= 0");
  if (plan.shots > 0 && !is_diagonal(obs)) {
    throw std::invalid_argument("run_algorithm1: sampled mode needs a diagonal observable");
  }
  const size_t p = plan.r_nodes.size();
  std::vector<DensityMatrix> states(p, rho0);
  parallel_for(p, threads, [&](size_t j) {
    states[j] = trotter_evolve(model, rho0, t, plan.steps_at(j), 2, backend);
  });
  Algorithm1Result out;
  if (plan.shots > 0) {
    out.node_means = sample_node_means(states, obs, plan.shots, plan.seed);
  } else {
    for (const auto& s : states) out.node_means.push_back(expectation(obs, s));
  }
  out.estimate = extrapolate(out.node_means, plan.b_coeffs);
  return out;
}

}  // namespace lindblad
