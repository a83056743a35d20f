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

#include "lindblad/lattice.hpp"

#include <algorithm>
#include <iterator>
#include <string>

#include "lindblad/errors.hpp"

namespace lindblad {

bool is_sorted_unique(const SiteList& sites) {
  return std::adjacent_find(sites.begin(), sites.end(),
                            [](int a, int b) { return a >= b; }) == sites.end();
}

SiteList merge_supports(const SiteList& a, const SiteList& b) {
  SiteList out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool supports_overlap(const SiteList& a, const SiteList& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia == *ib) return true;
    if (*ia < *ib) {
      ++ia;
    } else {
      ++ib;
    }
  }
  return false;
}

SiteList all_sites(int n) {
  SiteList out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = i;
  return out;
}

SiteEmbedding::SiteEmbedding(const SiteList& support, const SiteList& target) {
  const int n = static_cast<int>(target.size());
  const int s = static_cast<int>(support.size());
  std::vector<int> bit_of(static_cast<size_t>(s));
  for (int i = 0; i < s; ++i) {
    auto it = std::lower_bound(target.begin(), target.end(), support[static_cast<size_t>(i)]);
    if (it == target.end() || *it != support[static_cast<size_t>(i)]) {
      throw DimensionError("embedding: site " + std::to_string(support[static_cast<size_t>(i)]) +
                           " is not in the target register");
    }
    bit_of[static_cast<size_t>(i)] = n - 1 - static_cast<int>(it - target.begin());
  }
  full_dim_ = 1L << n;
  const long local = 1L << s;
  offsets_.assign(static_cast<size_t>(local), 0);
  long mask = 0;
  for (long l = 0; l < local; ++l) {
    long off = 0;
    for (int i = 0; i < s; ++i) {
      if ((l >> (s - 1 - i)) & 1L) off |= 1L << bit_of[static_cast<size_t>(i)];
    }
    offsets_[static_cast<size_t>(l)] = off;
    mask |= off;
  }
  rests_.reserve(static_cast<size_t>(full_dim_ / local));
  for (long r = 0; r < full_dim_; ++r) {
    if ((r & mask) == 0) rests_.push_back(r);
  }
}

SiteEmbedding::SiteEmbedding(const SiteList& support, int n_sites)
    : SiteEmbedding(support, all_sites(n_sites)) {}

ComplexMatrix embed_operator(const ComplexMatrix& op, const SiteList& support,
                             const SiteList& target) {
  const SiteEmbedding emb(support, target);
  if (op.rows() != emb.local_dim() || op.cols() != emb.local_dim()) {
    throw DimensionError("embed_operator: operator " + linalg::shape(op) +
                         " does not match support of size " + std::to_string(support.size()));
  }
  ComplexMatrix out = ComplexMatrix::Zero(emb.full_dim(), emb.full_dim());
  const auto& off = emb.offsets();
  const long d = emb.local_dim();
  for (long r : emb.rests()) {
    for (long j = 0; j < d; ++j) {
      for (long i = 0; i < d; ++i) {
        out(r + off[static_cast<size_t>(i)], r + off[static_cast<size_t>(j)]) = op(i, j);
      }
    }
  }
  return out;
}

void apply_left(const ComplexMatrix& op, const SiteEmbedding& emb, ComplexMatrix& rho) {
  const long d = emb.local_dim();
  if (op.rows() != d || op.cols() != d || rho.rows() != emb.full_dim()) {
    throw DimensionError("apply_left: operator " + linalg::shape(op) + " on state " +
                         linalg::shape(rho));
  }
  const auto& off = emb.offsets();
  Eigen::VectorXcd gathered(d);
  Eigen::VectorXcd mixed(d);
  for (Eigen::Index c = 0; c < rho.cols(); ++c) {
    Complex* col = rho.data() + c * rho.rows();
    for (long r : emb.rests()) {
      for (long l = 0; l < d; ++l) gathered(l) = col[r + off[static_cast<size_t>(l)]];
      mixed.noalias() = op * gathered;
      for (long l = 0; l < d; ++l) col[r + off[static_cast<size_t>(l)]] = mixed(l);
    }
  }
}

void apply_right(const ComplexMatrix& op, const SiteEmbedding& emb, ComplexMatrix& rho) {
  const long d = emb.local_dim();
  if (op.rows() != d || op.cols() != d || rho.cols() != emb.full_dim()) {
    throw DimensionError("apply_right: operator " + linalg::shape(op) + " on state " +
                         linalg::shape(rho));
  }
  const auto& off = emb.offsets();
  ComplexMatrix block(rho.rows(), d);
  ComplexMatrix mixed(rho.rows(), d);
  for (long r : emb.rests()) {
    for (long l = 0; l < d; ++l) block.col(l) = rho.col(r + off[static_cast<size_t>(l)]);
    mixed.noalias() = block * op;
    for (long l = 0; l < d; ++l) rho.col(r + off[static_cast<size_t>(l)]) = mixed.col(l);
  }
}

void apply_left(const ComplexMatrix& op, const SiteList& support, int n, ComplexMatrix& rho) {
  apply_left(op, SiteEmbedding(support, n), rho);
}

void apply_right(const ComplexMatrix& op, const SiteList& support, int n, ComplexMatrix& rho) {
  apply_right(op, SiteEmbedding(support, n), rho);
}

void apply_local_superop(const ComplexMatrix& superop, const SiteEmbedding& emb,
                         ComplexMatrix& rho) {
  const long d = emb.local_dim();
  if (superop.rows() != d * d || superop.cols() != d * d || rho.rows() != emb.full_dim() ||
      rho.cols() != emb.full_dim()) {
    throw DimensionError("apply_local_superop: superoperator " + linalg::shape(superop) +
                         " on state " + linalg::shape(rho));
  }
  const auto& off = emb.offsets();
  std::vector<long> idx(static_cast<size_t>(d * d));
  for (long lc = 0; lc < d; ++lc) {
    for (long lr = 0; lr < d; ++lr) {
      idx[static_cast<size_t>(lr + lc * d)] =
          off[static_cast<size_t>(lr)] + off[static_cast<size_t>(lc)] * rho.rows();
    }
  }
  Eigen::VectorXcd gathered(d * d);
  Eigen::VectorXcd mixed(d * d);
  Complex* base = rho.data();
  for (long rc : emb.rests()) {
    for (long rr : emb.rests()) {
      Complex* origin = base + rr + rc * rho.rows();
      for (long i = 0; i < d * d; ++i) gathered(i) = origin[idx[static_cast<size_t>(i)]];
      mixed.noalias() = superop * gathered;
      for (long i = 0; i < d * d; ++i) origin[idx[static_cast<size_t>(i)]] = mixed(i);
    }
  }
}

ComplexMatrix apply_local_superop(const ComplexMatrix& superop, const SiteList& support, int n,
                                  const ComplexMatrix& rho) {
  ComplexMatrix out = rho;
  apply_local_superop(superop, SiteEmbedding(support, n), out);
  return out;
}

}  // namespace lindblad
