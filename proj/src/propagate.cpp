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

#include "lindblad/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lindblad/errors.hpp"

namespace lindblad {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kNegEigTol = 1e-8;
constexpr double kCommuteTol = 1e-12;

long register_dim(int n) { return 1L << n; }

void check_state_dims(const ComplexMatrix& m, int n, const std::string& where) {
  const long d = register_dim(n);
  if (m.rows() != d || m.cols() != d) {
    throw DimensionError(where + ": state " + linalg::shape(m) + " does not match " +
                         std::to_string(n) + " sites");
  }
}

bool pieces_commute(const std::vector<LocalOperator>& pieces) {
  for (size_t a = 0; a < pieces.size(); ++a) {
    for (size_t b = a + 1; b < pieces.size(); ++b) {
      if (!supports_overlap(pieces[a].support, pieces[b].support)) continue;
      const SiteList joint = merge_supports(pieces[a].support, pieces[b].support);
      const ComplexMatrix x = embed_operator(pieces[a].matrix, pieces[a].support, joint);
      const ComplexMatrix y = embed_operator(pieces[b].matrix, pieces[b].support, joint);
      const double scale = std::max(1.0, linalg::max_abs(x) * linalg::max_abs(y));
      if (linalg::max_abs(x * y - y * x) > kCommuteTol * scale) return false;
    }
  }
  return true;
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix matrix, int n_sites)
    : matrix_(std::move(matrix)), n_sites_(n_sites) {
  validate();
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix matrix, int n_sites) {
  DensityMatrix out;
  check_state_dims(matrix, n_sites, "DensityMatrix");
  out.matrix_ = std::move(matrix);
  out.n_sites_ = n_sites;
  return out;
}

void DensityMatrix::validate() const {
  if (n_sites_ < 1) throw std::invalid_argument("DensityMatrix: n_sites must be >= 1");
  check_state_dims(matrix_, n_sites_, "DensityMatrix");
  if (!linalg::is_hermitian(matrix_, kStateTol)) {
    throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - Complex(1.0)) > kStateTol) {
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr.real()) +
                                " is not 1 within 1e-10");
  }
  const auto eig = linalg::hermitian_eig(matrix_);
  if (eig.values.front() < -kNegEigTol) {
    throw std::invalid_argument("DensityMatrix: min eigenvalue " +
                                std::to_string(eig.values.front()) + " below -1e-8");
  }
}

std::string to_string(InitialState s) {
  switch (s) {
    case InitialState::AllZeros: return "all_zeros";
    case InitialState::AllOnes: return "all_ones";
    case InitialState::AllPlus: return "all_plus";
    case InitialState::MaximallyMixed: return "maximally_mixed";
  }
  return "unknown";
}

InitialState parse_initial_state(const std::string& name) {
  for (auto s : {InitialState::AllZeros, InitialState::AllOnes, InitialState::AllPlus,
                 InitialState::MaximallyMixed}) {
    if (to_string(s) == name) return s;
  }
  throw std::invalid_argument("unknown initial state '" + name +
                              "' (expected all_zeros, all_ones, all_plus, maximally_mixed)");
}

DensityMatrix make_initial_state(InitialState s, int n) {
  if (n < 1) throw std::invalid_argument("make_initial_state: n must be >= 1");
  const long d = register_dim(n);
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  switch (s) {
    case InitialState::AllZeros: m(0, 0) = 1.0; break;
    case InitialState::AllOnes: m(d - 1, d - 1) = 1.0; break;
    case InitialState::AllPlus: m.setConstant(1.0 / static_cast<double>(d)); break;
    case InitialState::MaximallyMixed:
      m.diagonal().setConstant(1.0 / static_cast<double>(d));
      break;
  }
  return DensityMatrix(std::move(m), n);
}

void TrotterStepper::Channel::apply(ComplexMatrix& rho) const {
  for (size_t i = 0; i < unitaries.size(); ++i) {
    apply_left(unitaries[i], unitary_sites[i], rho);
    apply_right(unitaries_adj[i], unitary_sites[i], rho);
  }
  if (!superop_sites.empty()) apply_local_superop(superop, superop_sites.front(), rho);
}

TrotterStepper::Channel TrotterStepper::make_channel(const LindbladModel& model, int index,
                                                     double time, BackendKind backend) const {
  Channel ch;
  const Complex i1(0.0, 1.0);
  if (backend == BackendKind::LocalApply && model.is_coherent(index)) {
    const auto& pieces = model.hamiltonian()[static_cast<size_t>(index)].pieces;
    if (pieces_commute(pieces)) {
      for (const auto& p : pieces) {
        ComplexMatrix u = linalg::expm(-i1 * p.matrix, time);
        ch.unitaries_adj.push_back(u.adjoint());
        ch.unitaries.push_back(std::move(u));
        ch.unitary_sites.emplace_back(p.support, n_);
      }
      return ch;
    }
  }
  const PairFormSuperop s = summand_superop(model, index);
  if (backend == BackendKind::SuperopExp &&
      static_cast<int>(s.support().size()) > kSuperopExpMaxSites) {
    throw DimensionError("SuperopExp backend: summand support of " +
                         std::to_string(s.support().size()) + " sites exceeds cap " +
                         std::to_string(kSuperopExpMaxSites));
  }
  ch.superop = linalg::expm(s.local_matrix(), time);
  ch.superop_sites.emplace_back(s.support(), n_);
  return ch;
}

TrotterStepper::TrotterStepper(const LindbladModel& model, double tau, int order,
                               BackendKind backend)
    : n_(model.n_sites()), tau_(tau), order_(order) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("trotter step: tau must be finite and >= 0");
  }
  if (order != 1 && order != 2) {
    throw std::invalid_argument("trotter step: order must be 1 or 2, got " + std::to_string(order));
  }
  if (backend == BackendKind::SuperopExp && n_ > kSuperopExpMaxSites) {
    throw DimensionError("SuperopExp backend supports at most " +
                         std::to_string(kSuperopExpMaxSites) + " sites");
  }
  const int m = model.summand_count();
  for (int j = 0; j < m; ++j) {
    full_.push_back(make_channel(model, j, tau, backend));
    if (order == 2) half_.push_back(make_channel(model, j, tau / 2.0, backend));
  }
}

void TrotterStepper::step(ComplexMatrix& rho) const { evolve(rho, 1); }

void TrotterStepper::evolve(ComplexMatrix& rho, long r) const {
  check_state_dims(rho, n_, "trotter step");
  const int m = static_cast<int>(full_.size());
  if (m == 0 || r <= 0) return;
  if (order_ == 1) {
    for (long s = 0; s < r; ++s) {
      for (const auto& ch : full_) ch.apply(rho);
    }
    return;
  }
  if (m == 1) {
    for (long s = 0; s < r; ++s) full_[0].apply(rho);
    return;
  }
  half_[0].apply(rho);
  for (long s = 0; s < r; ++s) {
    for (int j = 1; j < m - 1; ++j) half_[static_cast<size_t>(j)].apply(rho);
    full_[static_cast<size_t>(m - 1)].apply(rho);
    for (int j = m - 2; j >= 1; --j) half_[static_cast<size_t>(j)].apply(rho);
    if (s + 1 < r) {
      full_[0].apply(rho);
    } else {
      half_[0].apply(rho);
    }
  }
}

DensityMatrix trotter_step_second_order(const LindbladModel& model, const DensityMatrix& rho,
                                        double tau, BackendKind backend) {
  TrotterStepper stepper(model, tau, 2, backend);
  ComplexMatrix m = rho.matrix();
  stepper.step(m);
  return DensityMatrix::unchecked(std::move(m), rho.n_sites());
}

DensityMatrix trotter_step_first_order(const LindbladModel& model, const DensityMatrix& rho,
                                       double tau, BackendKind backend) {
  TrotterStepper stepper(model, tau, 1, backend);
  ComplexMatrix m = rho.matrix();
  stepper.step(m);
  return DensityMatrix::unchecked(std::move(m), rho.n_sites());
}

DensityMatrix trotter_evolve(const LindbladModel& model, const DensityMatrix& rho0, double t,
                             long r, int order, BackendKind backend) {
  if (r < 1) throw std::invalid_argument("trotter_evolve: r must be >= 1, got " + std::to_string(r));
  if (!(t >= 0.0)) throw std::invalid_argument("trotter_evolve: t must be >= 0");
  TrotterStepper stepper(model, t / static_cast<double>(r), order, backend);
  ComplexMatrix m = rho0.matrix();
  stepper.evolve(m, r);
  return DensityMatrix::unchecked(std::move(m), rho0.n_sites());
}

LiouvillianAction::LiouvillianAction(const LindbladModel& model) : n_(model.n_sites()) {
  const long d = register_dim(n_);
  const SiteList full = all_sites(n_);
  const Complex i1(0.0, 1.0);
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (const auto& summand : model.hamiltonian()) {
    for (const auto& p : summand.pieces) h += embed_operator(p.matrix, p.support, full);
  }
  k_ = -i1 * h;
  double jump_bound = 0.0;
  for (int j = static_cast<int>(model.hamiltonian().size()); j < model.summand_count(); ++j) {
    const auto& jump = model.jumps()[static_cast<size_t>(j) - model.hamiltonian().size()];
    const SiteList support = model.summand_support(j);
    const long ld = 1L << support.size();
    ComplexMatrix l = ComplexMatrix::Zero(ld, ld);
    for (const auto& c : jump.components) l += embed_operator(c.matrix, c.support, support);
    k_ -= 0.5 * embed_operator(l.adjoint() * l, support, full);
    const double ln = linalg::spectral_norm(l);
    jump_bound += ln * ln;
    jumps_adj_.push_back(l.adjoint());
    jumps_.push_back(std::move(l));
    jump_sites_.emplace_back(support, n_);
  }
  k_adj_ = k_.adjoint();
  norm_bound_ = 2.0 * linalg::spectral_norm(k_) + jump_bound;
}

ComplexMatrix LiouvillianAction::operator()(const ComplexMatrix& rho) const {
  ComplexMatrix out(rho.rows(), rho.cols());
  out.noalias() = k_ * rho;
  out.noalias() += rho * k_adj_;
  for (size_t i = 0; i < jumps_.size(); ++i) {
    ComplexMatrix tmp = rho;
    apply_left(jumps_[i], jump_sites_[i], tmp);
    apply_right(jumps_adj_[i], jump_sites_[i], tmp);
    out += tmp;
  }
  return out;
}

namespace {

ComplexMatrix evolve_dense(const LindbladModel& model, const ComplexMatrix& rho0, double t) {
  const ComplexMatrix lm = liouvillian_matrix(model);
  const ComplexMatrix prop = linalg::expm(lm, t);
  const Eigen::Map<const Eigen::VectorXcd> v(rho0.data(), rho0.size());
  const Eigen::VectorXcd w = prop * v;
  return Eigen::Map<const ComplexMatrix>(w.data(), rho0.rows(), rho0.cols());
}

ComplexMatrix evolve_taylor(const LiouvillianAction& action, const ComplexMatrix& rho0, double t) {
  constexpr double kTheta = 1.0;
  constexpr int kMaxTerms = 80;
  const long substeps =
      std::max(1L, static_cast<long>(std::ceil(t * action.norm_bound() / kTheta)));
  const double h = t / static_cast<double>(substeps);
  ComplexMatrix rho = rho0;
  for (long s = 0; s < substeps; ++s) {
    ComplexMatrix term = rho;
    ComplexMatrix acc = rho;
    int small = 0;
    int k = 1;
    for (; k <= kMaxTerms; ++k) {
      term = action(term) * (h / static_cast<double>(k));
      acc += term;
      small = linalg::max_abs(term) <= 1e-18 * linalg::max_abs(acc) ? small + 1 : 0;
      if (small >= 2) break;
    }
    if (k > kMaxTerms) throw GuardError("exact_evolution: Taylor series did not converge");
    rho = std::move(acc);
  }
  return rho;
}

ComplexMatrix evolve_rk4_fixed(const LiouvillianAction& action, const ComplexMatrix& rho0, double t,
                               long steps) {
  const double h = t / static_cast<double>(steps);
  ComplexMatrix rho = rho0;
  for (long s = 0; s < steps; ++s) {
    const ComplexMatrix k1 = action(rho);
    const ComplexMatrix k2 = action(rho + (h / 2.0) * k1);
    const ComplexMatrix k3 = action(rho + (h / 2.0) * k2);
    const ComplexMatrix k4 = action(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

ComplexMatrix evolve_rk4(const LiouvillianAction& action, const ComplexMatrix& rho0, double t) {
  constexpr long kMaxSteps = 1L << 24;
  long steps = std::max(1L, static_cast<long>(std::ceil(1e4 * t)));
  ComplexMatrix prev = evolve_rk4_fixed(action, rho0, t, steps);
  while (steps < kMaxSteps) {
    steps *= 2;
    ComplexMatrix next = evolve_rk4_fixed(action, rho0, t, steps);
    const double change = linalg::trace_norm(next - prev);
    prev = std::move(next);
    if (change < 1e-10) return prev;
  }
  throw GuardError("exact_evolution: RK4 did not converge to 1e-10");
}

ComplexMatrix evolve_euler(const LiouvillianAction& action, const ComplexMatrix& rho0, double t,
                           long steps) {
  const double h = t / static_cast<double>(steps);
  ComplexMatrix rho = rho0;
  for (long s = 0; s < steps; ++s) rho += h * action(rho);
  return rho;
}

}  // namespace

DensityMatrix exact_evolution(const LindbladModel& model, const DensityMatrix& rho0, double t,
                              const ExactOptions& options) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("exact_evolution: t must be finite and >= 0");
  }
  if (rho0.n_sites() != model.n_sites()) {
    throw DimensionError("exact_evolution: state has " + std::to_string(rho0.n_sites()) +
                         " sites, model has " + std::to_string(model.n_sites()));
  }
  if (t == 0.0) return rho0;
  ExactMethod method = options.method;
  if (method == ExactMethod::Auto) {
    method = model.n_sites() <= kDenseExactMaxSites ? ExactMethod::SuperopExpm
                                                      : ExactMethod::Taylor;
  }
  ComplexMatrix out;
  if (method == ExactMethod::SuperopExpm) {
    out = evolve_dense(model, rho0.matrix(), t);
  } else {
    const LiouvillianAction action(model);
    switch (method) {
      case ExactMethod::Taylor: out = evolve_taylor(action, rho0.matrix(), t); break;
      case ExactMethod::RK4: out = evolve_rk4(action, rho0.matrix(), t); break;
      case ExactMethod::Euler:
        if (options.euler_steps < 1) {
          throw std::invalid_argument("exact_evolution: euler_steps must be >= 1");
        }
        out = evolve_euler(action, rho0.matrix(), t, options.euler_steps);
        break;
      default: break;
    }
  }
  return DensityMatrix::unchecked(std::move(out), rho0.n_sites());
}

ComplexMatrix total_magnetization(int n) {
  const long d = register_dim(n);
  ComplexMatrix o = ComplexMatrix::Zero(d, d);
  for (long i = 0; i < d; ++i) {
    const int ones = __builtin_popcountl(static_cast<unsigned long>(i));
    o(i, i) = static_cast<double>(n - 2 * ones);
  }
  return o;
}

double expectation(const ComplexMatrix& obs, const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  if (obs.rows() != m.rows() || obs.cols() != m.cols()) {
    throw DimensionError("expectation: observable " + linalg::shape(obs) + " vs state " +
                         linalg::shape(m));
  }
  if (!linalg::is_hermitian(obs, 1e-10)) {
    throw std::invalid_argument("expectation: observable is not Hermitian");
  }
  const Complex v = (obs.transpose().cwiseProduct(m)).sum();
  if (std::abs(v.imag()) > 1e-8) {
    throw GuardError("expectation: imaginary part " + std::to_string(v.imag()) + " exceeds 1e-8");
  }
  return v.real();
}

double trace_distance_error(const LindbladModel& model, const DensityMatrix& rho0, double t, long r,
                            int order, BackendKind backend) {
  return trace_distance_error(model, rho0, exact_evolution(model, rho0, t), t, r, order, backend);
}

double trace_distance_error(const LindbladModel& model, const DensityMatrix& rho0,
                            const DensityMatrix& exact, double t, long r, int order,
                            BackendKind backend) {
  const DensityMatrix approx = trotter_evolve(model, rho0, t, r, order, backend);
  return linalg::trace_norm(exact.matrix() - approx.matrix());
}

}  // namespace lindblad
