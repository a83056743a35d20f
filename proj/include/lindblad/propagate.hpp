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

#include "lindblad/lattice.hpp"
#include "lindblad/model.hpp"

namespace lindblad {

class DensityMatrix {
 public:
  // Validates Hermiticity and unit trace within 1e-10 and min eigenvalue >= -1e-8.
  DensityMatrix(ComplexMatrix matrix, int n_sites);

  // Skips the checks; for evolution outputs, which are validated on demand.
  static DensityMatrix unchecked(ComplexMatrix matrix, int n_sites);

  void validate() const;

  const ComplexMatrix& matrix() const { return matrix_; }
  int n_sites() const { return n_sites_; }

 private:
  DensityMatrix() = default;
  ComplexMatrix matrix_;
  int n_sites_ = 0;
};

enum class InitialState { AllZeros, AllOnes, AllPlus, MaximallyMixed };

std::string to_string(InitialState s);
// Throws std::invalid_argument naming the accepted values.
InitialState parse_initial_state(const std::string& name);
DensityMatrix make_initial_state(InitialState s, int n);

enum class BackendKind { SuperopExp, LocalApply };

inline constexpr int kSuperopExpMaxSites = 6;

// Precomputed channels e^{tau L_j} and e^{tau L_j / 2} for one tau.
//
// LocalApply: a coherent summand whose pieces commute pairwise becomes a
// product of local unitaries applied as U rho U^dag; any other summand becomes
// the exponential of its superoperator on the summand's support.
// SuperopExp: every summand is the exponential of its superoperator on its
// support, with no factorization.
class TrotterStepper {
 public:
  TrotterStepper(const LindbladModel& model, double tau, int order, BackendKind backend);

  double tau() const { return tau_; }
  int order() const { return order_; }

  // One step of the product formula. Second order applies L_1, ..., L_m with
  // tau/2 and then L_m, ..., L_1 with tau/2; first order applies L_1, ..., L_m
  // with tau.
  void step(ComplexMatrix& rho) const;

  // r consecutive steps; adjacent L_1 half steps are fused.
  void evolve(ComplexMatrix& rho, long r) const;

 private:
  struct Channel {
    // Either a list of local unitaries or one local superoperator matrix.
    std::vector<ComplexMatrix> unitaries;
    std::vector<ComplexMatrix> unitaries_adj;
    std::vector<SiteEmbedding> unitary_sites;
    ComplexMatrix superop;
    std::vector<SiteEmbedding> superop_sites;
    void apply(ComplexMatrix& rho) const;
  };

  Channel make_channel(const LindbladModel& model, int index, double time,
                       BackendKind backend) const;

  int n_ = 0;
  double tau_ = 0.0;
  int order_ = 2;
  std::vector<Channel> half_;  // e^{tau L_j / 2}; only for order 2
  std::vector<Channel> full_;  // e^{tau L_j}
};

DensityMatrix trotter_step_second_order(const LindbladModel& model, const DensityMatrix& rho,
                                        double tau, BackendKind backend);
DensityMatrix trotter_step_first_order(const LindbladModel& model, const DensityMatrix& rho,
                                       double tau, BackendKind backend);
DensityMatrix trotter_evolve(const LindbladModel& model, const DensityMatrix& rho0, double t,
                             long r, int order, BackendKind backend);

// rho -> L(rho) written as K rho + rho K^dag + sum_nu L_nu rho L_nu^dag with
// K = -iH - (1/2) sum_nu L_nu^dag L_nu dense on the full register.
class LiouvillianAction {
 public:
  explicit LiouvillianAction(const LindbladModel& model);
  ComplexMatrix operator()(const ComplexMatrix& rho) const;
  // Upper bound on the induced trace norm of L.
  double norm_bound() const { return norm_bound_; }
  int n_sites() const { return n_; }

 private:
  int n_;
  ComplexMatrix k_;
  ComplexMatrix k_adj_;
  std::vector<ComplexMatrix> jumps_;
  std::vector<ComplexMatrix> jumps_adj_;
  std::vector<SiteEmbedding> jump_sites_;
  double norm_bound_ = 0.0;
};

enum class ExactMethod {
  Auto,         // dense expm for n <= 4, Taylor otherwise
  SuperopExpm,  // expm of the 4^n Liouvillian
  Taylor,       // truncated Taylor series with substeps, matrix free
  RK4,          // classical RK4, step count doubled until converged to 1e-10
  Euler,        // forward Euler with a fixed step count
};

inline constexpr int kDenseExactMaxSites = 4;

struct ExactOptions {
  ExactMethod method = ExactMethod::Auto;
  long euler_steps = 100000;
};

DensityMatrix exact_evolution(const LindbladModel& model, const DensityMatrix& rho0, double t,
                              const ExactOptions& options = {});

// sum_j Z_j on n sites.
ComplexMatrix total_magnetization(int n);

// tr(O rho); throws if the imaginary part exceeds 1e-8.
double expectation(const ComplexMatrix& obs, const DensityMatrix& rho);

double trace_distance_error(const LindbladModel& model, const DensityMatrix& rho0, double t, long r,
                            int order, BackendKind backend);

// Same, against a precomputed exact state.
double trace_distance_error(const LindbladModel& model, const DensityMatrix& rho0,
                            const DensityMatrix& exact, double t, long r, int order,
                            BackendKind backend);

}  // namespace lindblad
