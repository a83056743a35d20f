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

#include "lindblad/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lindblad/errors.hpp"

namespace lindblad {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kDropRelTol = 1e-13;

void validate_local(const LocalOperator& op, int n_sites, const std::string& where) {
  if (op.support.empty()) throw std::invalid_argument(where + ": empty support");
  if (!is_sorted_unique(op.support)) {
    throw std::invalid_argument(where + ": support must be sorted and distinct");
  }
  if (op.support.front() < 0 || op.support.back() >= n_sites) {
    throw std::invalid_argument(where + ": support outside lattice of " +
                                std::to_string(n_sites) + " sites");
  }
  const long dim = 1L << op.support.size();
  if (op.matrix.rows() != dim || op.matrix.cols() != dim) {
    throw DimensionError(where + ": matrix " + linalg::shape(op.matrix) +
                         " does not match support size " + std::to_string(op.support.size()));
  }
}

// Scale-invariant fingerprint: proportional matrices share it up to roundoff,
// so it screens candidates before the entrywise comparison.
double signature(const ComplexMatrix& m) {
  const double mx = linalg::max_abs(m);
  if (mx == 0.0) return 0.0;
  return m.cwiseAbs().sum() / mx;
}

// Index of an entry with the largest magnitude.
Eigen::Index argmax_abs(const ComplexMatrix& m) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = std::norm(m.data()[i]);
    if (v > best_abs) {
      best_abs = v;
      best = i;
    }
  }
  return best;
}

// True with y = c x when y is (numerically) proportional to x.
bool proportional(const ComplexMatrix& x, const ComplexMatrix& y, Complex& c) {
  const Eigen::Index idx = argmax_abs(x);
  const Complex pivot = x.data()[idx];
  if (pivot == Complex(0.0)) return false;
  c = y.data()[idx] / pivot;
  const double scale = std::max(linalg::max_abs(x) * std::abs(c), linalg::max_abs(y));
  return linalg::max_abs(y - c * x) <= 1e-12 * scale;
}

// Merges terms whose `key` side is proportional, summing the other side.
std::vector<PairFormSuperop::Term> merge_on(std::vector<PairFormSuperop::Term> terms, bool key_is_b,
                                            double drop_below) {
  std::vector<PairFormSuperop::Term> out;
  std::vector<double> sigs;
  for (auto& t : terms) {
    const ComplexMatrix& key = key_is_b ? t.b : t.a;
    const double sig = signature(key);
    bool merged = false;
    for (size_t i = 0; i < out.size(); ++i) {
      if (std::abs(sigs[i] - sig) > 1e-9 * std::max(1.0, sig)) continue;
      auto& o = out[i];
      const ComplexMatrix& okey = key_is_b ? o.b : o.a;
      Complex c;
      if (proportional(okey, key, c)) {
        if (key_is_b) {
          o.a += c * t.a;
        } else {
          o.b += c * t.b;
        }
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.push_back(std::move(t));
      sigs.push_back(sig);
    }
  }
  std::vector<PairFormSuperop::Term> kept;
  kept.reserve(out.size());
  for (auto& t : out) {
    if (linalg::max_abs(t.a) * linalg::max_abs(t.b) > drop_below) kept.push_back(std::move(t));
  }
  return kept;
}

}  // namespace

PairFormSuperop::PairFormSuperop(SiteList support, std::vector<Term> terms)
    : support_(std::move(support)), terms_(std::move(terms)) {
  if (!is_sorted_unique(support_)) {
    throw std::invalid_argument("PairFormSuperop: support must be sorted and distinct");
  }
  const long dim = local_dim();
  for (const auto& t : terms_) {
    if (t.a.rows() != dim || t.a.cols() != dim || t.b.rows() != dim || t.b.cols() != dim) {
      throw DimensionError("PairFormSuperop: term " + linalg::shape(t.a) + ", " +
                           linalg::shape(t.b) + " does not match support size " +
                           std::to_string(support_.size()));
    }
  }
}

double PairFormSuperop::norm_bound() const {
  double total = 0.0;
  for (const auto& t : terms_) total += linalg::spectral_norm(t.a) * linalg::spectral_norm(t.b);
  return total;
}

PairFormSuperop PairFormSuperop::embedded(const SiteList& target) const {
  if (target == support_) return *this;
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    out.push_back({embed_operator(t.a, support_, target), embed_operator(t.b, support_, target)});
  }
  return PairFormSuperop(target, std::move(out));
}

ComplexMatrix PairFormSuperop::local_matrix() const {
  const long dim = local_dim();
  ComplexMatrix out = ComplexMatrix::Zero(dim * dim, dim * dim);
  for (const auto& t : terms_) out += linalg::kron(t.b.transpose(), t.a);
  return out;
}

ComplexMatrix PairFormSuperop::apply_local(const ComplexMatrix& x) const {
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& t : terms_) out.noalias() += t.a * x * t.b;
  return out;
}

PairFormSuperop PairFormSuperop::scaled(Complex c) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.a *= c;
  return PairFormSuperop(support_, std::move(out));
}

PairFormSuperop PairFormSuperop::simplified() const {
  double scale = 0.0;
  for (const auto& t : terms_) scale = std::max(scale, linalg::max_abs(t.a) * linalg::max_abs(t.b));
  const double drop = kDropRelTol * scale;
  auto terms = merge_on(terms_, true, drop);
  terms = merge_on(std::move(terms), false, drop);
  return PairFormSuperop(support_, std::move(terms));
}

PairFormSuperop PairFormSuperop::sum(const std::vector<PairFormSuperop>& parts) {
  SiteList joint;
  for (const auto& p : parts) joint = merge_supports(joint, p.support());
  std::vector<Term> terms;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    auto e = p.embedded(joint);
    for (auto& t : e.terms_) terms.push_back(std::move(t));
  }
  return PairFormSuperop(joint, std::move(terms));
}

LindbladModel::LindbladModel(int n_sites, std::vector<HamiltonianSummand> hamiltonian,
                             std::vector<JumpOperator> jumps, int k, int gamma_cap)
    : n_sites_(n_sites),
      hamiltonian_(std::move(hamiltonian)),
      jumps_(std::move(jumps)),
      k_(k),
      gamma_cap_(gamma_cap) {
  if (n_sites_ < 1) throw std::invalid_argument("model: n_sites must be >= 1");
  for (const auto& h : hamiltonian_) {
    for (const auto& p : h.pieces) {
      validate_local(p, n_sites_, "hamiltonian summand " + h.label);
      if (static_cast<int>(p.support.size()) > k_) {
        throw std::invalid_argument("hamiltonian summand " + h.label + ": support exceeds k");
      }
      if (!linalg::is_hermitian(p.matrix, kHermitianTol)) {
        throw std::invalid_argument("hamiltonian summand " + h.label + ": piece is not Hermitian");
      }
    }
  }
  for (const auto& j : jumps_) {
    if (j.components.empty()) throw std::invalid_argument("jump " + j.label + ": no components");
    if (static_cast<int>(j.components.size()) > gamma_cap_) {
      throw std::invalid_argument("jump " + j.label + ": component count exceeds gamma_cap");
    }
    for (const auto& c : j.components) {
      validate_local(c, n_sites_, "jump " + j.label);
      if (static_cast<int>(c.support.size()) > k_) {
        throw std::invalid_argument("jump " + j.label + ": support exceeds k");
      }
    }
  }
}

SiteList LindbladModel::summand_support(int index) const {
  if (index < 0 || index >= summand_count()) {
    throw std::out_of_range("summand index " + std::to_string(index) + " out of range [0, " +
                            std::to_string(summand_count()) + ")");
  }
  SiteList out;
  if (is_coherent(index)) {
    for (const auto& p : hamiltonian_[static_cast<size_t>(index)].pieces) {
      out = merge_supports(out, p.support);
    }
  } else {
    const auto& jump = jumps_[static_cast<size_t>(index) - hamiltonian_.size()];
    for (const auto& c : jump.components) out = merge_supports(out, c.support);
  }
  return out;
}

LindbladModel build_tfim(int n, double j_coupling, double h_field, double gamma) {
  if (n < 2) throw std::invalid_argument("build_tfim: n must be >= 2, got " + std::to_string(n));
  if (!(gamma >= 0.0)) throw std::invalid_argument("build_tfim: gamma must be >= 0");
  const ComplexMatrix x = linalg::pauli_x();
  const ComplexMatrix z = linalg::pauli_z();
  HamiltonianSummand hx{"H_X", {}};
  for (int s = 0; s + 1 < n; ++s) {
    hx.pieces.push_back({{s, s + 1}, -j_coupling * linalg::kron(x, x)});
  }
  HamiltonianSummand hz{"H_Z", {}};
  for (int s = 0; s < n; ++s) hz.pieces.push_back({{s}, -h_field * z});
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);
  lower(0, 1) = std::sqrt(gamma);
  std::vector<JumpOperator> jumps;
  for (int s = 0; s < n; ++s) {
    jumps.push_back({"L_" + std::to_string(s), {{{s}, lower}}});
  }
  return LindbladModel(n, {hx, hz}, std::move(jumps), 2, 1);
}

PairFormSuperop summand_superop(const LindbladModel& model, int index) {
  const SiteList support = model.summand_support(index);
  const long dim = 1L << support.size();
  const ComplexMatrix id = linalg::identity(dim);
  const Complex i1(0.0, 1.0);
  if (model.is_coherent(index)) {
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (const auto& p : model.hamiltonian()[static_cast<size_t>(index)].pieces) {
      h += embed_operator(p.matrix, p.support, support);
    }
    return PairFormSuperop(support, {{-i1 * h, id}, {id, i1 * h}});
  }
  const auto& jump = model.jumps()[static_cast<size_t>(index) - model.hamiltonian().size()];
  ComplexMatrix l = ComplexMatrix::Zero(dim, dim);
  for (const auto& c : jump.components) l += embed_operator(c.matrix, c.support, support);
  const ComplexMatrix ldl = -0.5 * (l.adjoint() * l);
  return PairFormSuperop(support, {{l, l.adjoint()}, {ldl, id}, {id, ldl}});
}

PairFormSuperop model_superop(const LindbladModel& model) {
  std::vector<PairFormSuperop> parts;
  for (int j = 0; j < model.summand_count(); ++j) parts.push_back(summand_superop(model, j));
  return PairFormSuperop::sum(parts).embedded(all_sites(model.n_sites()));
}

ComplexMatrix liouvillian_matrix(const PairFormSuperop& s, int n) {
  if (n > kLiouvillianMaxSites) {
    throw DimensionError("liouvillian_matrix: n = " + std::to_string(n) + " exceeds cap " +
                         std::to_string(kLiouvillianMaxSites));
  }
  const SiteList full = all_sites(n);
  if (!s.support().empty() && (s.support().front() < 0 || s.support().back() >= n)) {
    throw DimensionError("liouvillian_matrix: superop support outside register");
  }
  const long d = 1L << n;
  ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
  if (s.empty()) return out;
  // Build on the local support, then pad: the local superop acts on the
  // support factor of both the row and column index of rho.
  const ComplexMatrix local = s.local_matrix();
  const SiteEmbedding emb(s.support(), n);
  const auto& off = emb.offsets();
  const long ld = emb.local_dim();
  for (long rc : emb.rests()) {
    for (long rr : emb.rests()) {
      for (long j = 0; j < ld * ld; ++j) {
        const long col = rr + off[static_cast<size_t>(j % ld)] +
                         d * (rc + off[static_cast<size_t>(j / ld)]);
        for (long i = 0; i < ld * ld; ++i) {
          const Complex v = local(i, j);
          if (v == Complex(0.0)) continue;
          const long row = rr + off[static_cast<size_t>(i % ld)] +
                           d * (rc + off[static_cast<size_t>(i / ld)]);
          out(row, col) += v;
        }
      }
    }
  }
  return out;
}

ComplexMatrix liouvillian_matrix(const LindbladModel& model) {
  const int n = model.n_sites();
  if (n > kLiouvillianMaxSites) {
    throw DimensionError("liouvillian_matrix: n = " + std::to_string(n) + " exceeds cap " +
                         std::to_string(kLiouvillianMaxSites));
  }
  const long d = 1L << n;
  ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& c : local_components(model)) out += liouvillian_matrix(c, n);
  return out;
}

std::vector<PairFormSuperop> summand_components(const LindbladModel& model, int index) {
  (void)model.summand_support(index);  // range check
  const Complex i1(0.0, 1.0);
  std::vector<PairFormSuperop> out;
  if (model.is_coherent(index)) {
    for (const auto& p : model.hamiltonian()[static_cast<size_t>(index)].pieces) {
      const ComplexMatrix id = linalg::identity(p.matrix.rows());
      out.emplace_back(p.support,
                       std::vector<PairFormSuperop::Term>{{-i1 * p.matrix, id}, {id, i1 * p.matrix}});
    }
    return out;
  }
  const auto& jump = model.jumps()[static_cast<size_t>(index) - model.hamiltonian().size()];
  for (const auto& d1 : jump.components) {
    for (const auto& d2 : jump.components) {
      const SiteList joint = merge_supports(d1.support, d2.support);
      const ComplexMatrix a = embed_operator(d1.matrix, d1.support, joint);
      const ComplexMatrix b = embed_operator(d2.matrix, d2.support, joint);
      const ComplexMatrix id = linalg::identity(a.rows());
      const ComplexMatrix anti = -0.5 * (b.adjoint() * a);
      out.emplace_back(joint, std::vector<PairFormSuperop::Term>{
                                  {a, b.adjoint()}, {anti, id}, {id, anti}});
    }
  }
  return out;
}

std::vector<PairFormSuperop> local_components(const LindbladModel& model) {
  std::vector<PairFormSuperop> out;
  for (int j = 0; j < model.summand_count(); ++j) {
    for (auto& c : summand_components(model, j)) out.push_back(std::move(c));
  }
  return out;
}

double extensiveness_g(const LindbladModel& model) {
  std::vector<double> per_site(static_cast<size_t>(model.n_sites()), 0.0);
  for (const auto& c : local_components(model)) {
    const double b = c.norm_bound();
    for (int s : c.support()) per_site[static_cast<size_t>(s)] += b;
  }
  return *std::max_element(per_site.begin(), per_site.end());
}

ComplexMatrix apply_summand(const LindbladModel& model, int index, const ComplexMatrix& rho) {
  const int n = model.n_sites();
  const long d = 1L << n;
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError("apply_summand: rho " + linalg::shape(rho) + " for " +
                         std::to_string(n) + " sites");
  }
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& c : summand_components(model, index)) {
    for (const auto& t : c.terms()) {
      ComplexMatrix tmp = rho;
      apply_left(t.a, c.support(), n, tmp);
      apply_right(t.b, c.support(), n, tmp);
      out += tmp;
    }
  }
  return out;
}

ComplexMatrix apply_liouvillian(const LindbladModel& model, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (int j = 0; j < model.summand_count(); ++j) out += apply_summand(model, j, rho);
  return out;
}

}  // namespace lindblad
