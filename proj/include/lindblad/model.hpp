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
#include "lindblad/linalg.hpp"

namespace lindblad {

struct LocalOperator {
  SiteList support;      // sorted, distinct
  ComplexMatrix matrix;  // 2^|support| square
};

// One coherent Trotter summand H_mu, kept as its local pieces so the bounds
// engine can see the locality. The summand's generator is -i[sum of pieces, .].
struct HamiltonianSummand {
  std::string label;
  std::vector<LocalOperator> pieces;
};

// L_nu = sum of components d_{nu,gamma}.
struct JumpOperator {
  std::string label;
  std::vector<LocalOperator> components;
};

// rho -> sum_i A_i rho B_i, every A_i and B_i acting on the same joint support.
class PairFormSuperop {
 public:
  struct Term {
    ComplexMatrix a;
    ComplexMatrix b;
  };

  PairFormSuperop() = default;
  PairFormSuperop(SiteList support, std::vector<Term> terms);

  const SiteList& support() const { return support_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  long local_dim() const { return 1L << support_.size(); }

  // sum_i ||A_i|| ||B_i|| in spectral norm; an upper bound on the diamond norm.
  double norm_bound() const;

  // Same superoperator with every term padded by identity onto `target`,
  // which must contain the current support.
  PairFormSuperop embedded(const SiteList& target) const;

  // 4^s x 4^s matrix on the own support: sum_i B_i^T kron A_i.
  ComplexMatrix local_matrix() const;

  // Applies to an operator living on exactly this superop's support.
  ComplexMatrix apply_local(const ComplexMatrix& x) const;

  PairFormSuperop scaled(Complex c) const;

  // Equivalent term list with fewer terms: terms sharing a proportional B are
  // merged (their A's summed), then likewise for A; negligible terms dropped.
  PairFormSuperop simplified() const;

  // Sum of superops, on the union of supports.
  static PairFormSuperop sum(const std::vector<PairFormSuperop>& parts);

 private:
  SiteList support_;
  std::vector<Term> terms_;
};

class LindbladModel {
 public:
  LindbladModel(int n_sites, std::vector<HamiltonianSummand> hamiltonian,
                std::vector<JumpOperator> jumps, int k, int gamma_cap);

  int n_sites() const { return n_sites_; }
  int k() const { return k_; }
  int gamma_cap() const { return gamma_cap_; }
  const std::vector<HamiltonianSummand>& hamiltonian() const { return hamiltonian_; }
  const std::vector<JumpOperator>& jumps() const { return jumps_; }

  // Trotter summands in canonical order: Hamiltonian summands, then one
  // dissipator per jump operator. m = |hamiltonian| + |jumps|.
  int summand_count() const {
    return static_cast<int>(hamiltonian_.size() + jumps_.size());
  }
  bool is_coherent(int index) const {
    return index < static_cast<int>(hamiltonian_.size());
  }
  // Union of the supports of every piece of the summand.
  SiteList summand_support(int index) const;

 private:
  int n_sites_;
  std::vector<HamiltonianSummand> hamiltonian_;
  std::vector<JumpOperator> jumps_;
  int k_;
  int gamma_cap_;
};

// Dissipative transverse-field Ising chain: H_X = -J sum X_j X_{j+1},
// H_Z = -h sum Z_j, L_j = sqrt(gamma) |0><1|_j. Summands [H_X, H_Z, D_0..D_{n-1}].
LindbladModel build_tfim(int n, double j_coupling, double h_field, double gamma);

// Coherent summand: {(-iH, I), (I, iH)}. Dissipator: {(L, L^dag), (-L^dag L / 2, I), (I, -L^dag L / 2)}.
PairFormSuperop summand_superop(const LindbladModel& model, int index);

// Sum of all summands on the full register.
PairFormSuperop model_superop(const LindbladModel& model);

inline constexpr int kLiouvillianMaxSites = 7;

// sum_i B_i^T kron A_i on the full n-site register (4^n x 4^n), n <= 7.
ComplexMatrix liouvillian_matrix(const PairFormSuperop& s, int n);
ComplexMatrix liouvillian_matrix(const LindbladModel& model);

// Local components of one summand: one per Hamiltonian piece, one per
// (gamma1, gamma2) pair of jump components:
// rho -> d1 rho d2^dag - (d2^dag d1 rho + rho d2^dag d1) / 2.
std::vector<PairFormSuperop> summand_components(const LindbladModel& model, int index);

// All components, in summand order.
std::vector<PairFormSuperop> local_components(const LindbladModel& model);

// max over sites of the summed norm bounds of the components touching it.
double extensiveness_g(const LindbladModel& model);

// -i[H, .] applied to rho, and the dissipator of L applied to rho, on a full register.
ComplexMatrix apply_summand(const LindbladModel& model, int index, const ComplexMatrix& rho);
ComplexMatrix apply_liouvillian(const LindbladModel& model, const ComplexMatrix& rho);

}  // namespace lindblad
