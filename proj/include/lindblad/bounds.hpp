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

#include <map>
#include <vector>

#include "lindblad/model.hpp"
#include "lindblad/richardson.hpp"

namespace lindblad {

// [a, b] = a o b - b o a. Empty when the supports are disjoint and
// prune_disjoint is set. The result is returned unsimplified, with
// 2 |a| |b| terms.
PairFormSuperop pairform_commutator(const PairFormSuperop& a, const PairFormSuperop& b,
                                    bool prune_disjoint = true);

struct CommutatorOptions {
  // Skip summands and components whose support misses the running commutator.
  bool prune = true;
  int threads = 1;
};

// Sum over summand tuples (j_1, ..., j_q) of a certified bound on
// ||[L_{j_1}, [L_{j_2}, ..., L_{j_q}]]||. The innermost summand is expanded
// into its local components; every outer level is the merged commutator with
// the components of L_j that touch the running support.
double alpha_comm_q(const LindbladModel& model, int q, const CommutatorOptions& options = {});

// Doubly right-nested [[L..]_{q_1}, [[L..]_{q_2}, ..., [L..]_{q_d}]]; d = 1
// coincides with alpha_comm_q. Requires sum of grades <= 6.
double alpha_doubly_nested(const LindbladModel& model, const std::vector<int>& grades,
                           const CommutatorOptions& options = {});

// (c12, c24) with one-step error <= (t^3 / 12) c12 + (t^3 / 24) c24.
struct TightBound {
  double c12 = 0.0;
  double c24 = 0.0;
  double one_step(double tau) const { return tau * tau * tau * (c12 / 12.0 + c24 / 24.0); }
};
TightBound alpha3_tight(const LindbladModel& model, int threads = 1);

// c with one-step first-order error <= (t^2 / 2) c.
double alpha2_tight_first_order(const LindbladModel& model);

// (1 / (4 k q)) q! (4 k g)^q N
double alpha_lattice_q(int n, int k, double g, int q);

// (1 / (4 k q_d)) prod_r P_{r+1} q_r! (4 k g)^{q_r} N, P_r = q_r + ... + q_d, P_{d+1} = 1.
double alpha_doubly_lattice(int n, int k, double g, const std::vector<int>& grades);

// alpha_comm,q0(t) split into a numeric part (total grades q0+1 and q0+2,
// every d >= 2) and the analytic remainder e (8 e q0 k g t)^{q0+1} N, which
// only exists when 8 e^2 q0 k g t <= 1.
class AlphaCommQ0 {
 public:
  AlphaCommQ0(const LindbladModel& model, int q0, const CommutatorOptions& options = {});

  struct Value {
    double numeric = 0.0;
    double tail = 0.0;
    bool certified = false;
    double total() const { return numeric + tail; }
  };
  Value at(double t) const;

  int q0() const { return q0_; }
  // Coefficient of t^Q in the numeric part.
  const std::map<int, double>& coefficients() const { return coeff_; }

 private:
  int q0_;
  int n_;
  int k_;
  double g_;
  std::map<int, double> coeff_;
};

AlphaCommQ0::Value alpha_comm_q0(const LindbladModel& model, int q0, double t_step);

// max over odd q in [3, q0] of alpha_comm_q(q)^(1/q).
double mu_comm_q0(const LindbladModel& model, int q0, const CommutatorOptions& options = {});

// ceil(t^{3/2} sqrt((c12/12 + c24/24) / eps)).
long plan_trotter_steps(const LindbladModel& model, double t, double eps);
long plan_trotter_steps(const TightBound& tight, double t, double eps);

struct ExtrapolationOptions {
  int q0 = 3;
  long shots_override = -1;  // < 0 keeps the Hoeffding count, 0 forces deterministic mode
  std::uint64_t seed = 0;
  int max_p = 12;
  long max_base_steps = 1L << 30;
  CommutatorOptions commutators;
};

// p is the smallest p with e^{-2p} <= eps / (8 ||b||_1); base_steps = 1/s_0 is
// the smallest integer with s_p = 1 / (base_steps r_p) satisfying
// s_p <= e^{-1} (2 mu t)^{-3/2} and a certified alpha_comm,q0(s_p t) <= s_p eps / (4 e ||b||_1);
// shots = ceil(4 ||b||_1^2 log(3p) / eps^2). Throws InfeasiblePlanError.
ExtrapolationPlan plan_extrapolation(const LindbladModel& model, double t, double eps,
                                     const ExtrapolationOptions& options = {});

struct BoundReport {
  double alpha3_numeric = 0.0;
  double alpha3_tight_c12 = 0.0;
  double alpha3_tight_c24 = 0.0;
  std::map<int, double> alpha_q;
  std::map<int, double> alpha_lattice_q;
  std::map<std::vector<int>, double> alpha_doubly;
  double alpha_comm_q0_numeric = 0.0;
  double alpha_comm_q0_tail = 0.0;
  bool alpha_comm_q0_certified = false;
  double mu_comm_q0 = 0.0;
  long r_planned = 0;
  double g = 0.0;
  int k = 0;
};

struct BoundReportOptions {
  double t = 0.2;
  double eps = 1e-3;
  int q_max = 4;
  int q0 = 3;
  double t_step = 0.0;  // step at which alpha_comm,q0 is evaluated; 0 means t / r_planned
  std::vector<std::vector<int>> doubly_grades;
  CommutatorOptions commutators;
};

BoundReport bound_report(const LindbladModel& model, const BoundReportOptions& options);

}  // namespace lindblad
