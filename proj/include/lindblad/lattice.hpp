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

#include "lindblad/linalg.hpp"

namespace lindblad {

// Sites are 0-indexed. On an n-site register, site s is bit (n - 1 - s) of a
// basis index, i.e. site 0 is the most significant qubit and an operator on
// sites {0, 1, ..., n-1} is kron(op_0, op_1, ..., op_{n-1}). Within a local
// operator the support is listed in increasing site order with the same
// most-significant-first convention.
using SiteList = std::vector<int>;

bool is_sorted_unique(const SiteList& sites);
SiteList merge_supports(const SiteList& a, const SiteList& b);
bool supports_overlap(const SiteList& a, const SiteList& b);
SiteList all_sites(int n);

// Index arithmetic for a set of sites embedded in a larger register.
class SiteEmbedding {
 public:
  SiteEmbedding(const SiteList& support, const SiteList& target);
  SiteEmbedding(const SiteList& support, int n_sites);

  long local_dim() const { return static_cast<long>(offsets_.size()); }
  long full_dim() const { return full_dim_; }
  // Full-register index contribution of a local basis index.
  const std::vector<long>& offsets() const { return offsets_; }
  // Full-register indices whose support bits are all zero.
  const std::vector<long>& rests() const { return rests_; }

 private:
  long full_dim_ = 1;
  std::vector<long> offsets_;
  std::vector<long> rests_;
};

// op (on `support`) tensored with identity on target \ support.
ComplexMatrix embed_operator(const ComplexMatrix& op, const SiteList& support,
                             const SiteList& target);

// rho <- op * rho and rho <- rho * op with op acting on `support` of an n-site register.
void apply_left(const ComplexMatrix& op, const SiteEmbedding& emb, ComplexMatrix& rho);
void apply_right(const ComplexMatrix& op, const SiteEmbedding& emb, ComplexMatrix& rho);
void apply_left(const ComplexMatrix& op, const SiteList& support, int n, ComplexMatrix& rho);
void apply_right(const ComplexMatrix& op, const SiteList& support, int n, ComplexMatrix& rho);

// Applies a 4^s x 4^s superoperator (column-stacking on the support's local
// space) to an n-site density matrix.
ComplexMatrix apply_local_superop(const ComplexMatrix& superop, const SiteList& support, int n,
                                  const ComplexMatrix& rho);
void apply_local_superop(const ComplexMatrix& superop, const SiteEmbedding& emb,
                         ComplexMatrix& rho);

}  // namespace lindblad
