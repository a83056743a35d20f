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

#include "lindblad/bchverify.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lindblad/bounds.hpp"
#include "lindblad/errors.hpp"
#include "lindblad/fit.hpp"

namespace lindblad {

namespace {

void check_sites(const LindbladModel& model, int cap, const char* what) {
  if (model.n_sites() > cap) {
    throw DimensionError(std::string(what) + ": n = " + std::to_string(model.n_sites()) +
                         " exceeds cap " + std::to_string(cap));
  }
}

void check_time(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(what) + ": t must be finite and > 0");
  }
}

}  // namespace

ComplexMatrix step_superop_matrix(const LindbladModel& model, double t) {
  check_sites(model, kBchMaxSites, "step_superop_matrix");
  const int n = model.n_sites();
  const int m = model.summand_count();
  const long d = 1L << (2 * n);
  std::vector<ComplexMatrix> half;
  for (int j = 0; j < m; ++j) {
    half.push_back(linalg::expm(liouvillian_matrix(summand_superop(model, j), n), t / 2.0));
  }
  // L_1 acts first and last: S = E_1 E_2 ... E_m E_m ... E_2 E_1.
  ComplexMatrix s = ComplexMatrix::Identity(d, d);
  for (int j = 0; j < m; ++j) s = half[static_cast<size_t>(j)] * s;
  for (int j = m - 1; j >= 0; --j) s = half[static_cast<size_t>(j)] * s;
  return s;
}

ComplexMatrix effective_generator(const LindbladModel& model, double t) {
  check_time(t, "effective_generator");
  const ComplexMatrix s = step_superop_matrix(model, t);
  const ComplexMatrix shifted = s - ComplexMatrix::Identity(s.rows(), s.cols());
  Eigen::ComplexEigenSolver<ComplexMatrix> eig(shifted, false);
  const double radius = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (radius > 0.5) {
    throw GuardError("effective_generator: spectral radius of S(t) - I is " +
                     std::to_string(radius) + " > 0.5 at t = " + std::to_string(t) +
                     "; use a smaller t");
  }
  return linalg::matrix_log_scaling_squaring(s);
}

namespace {

ComplexMatrix d_of(const LindbladModel& model, const ComplexMatrix& lm, double t) {
  return (effective_generator(model, t) - t * lm) / (t * t * t);
}

ComplexMatrix phi3_estimate(const LindbladModel& model, const ComplexMatrix& lm, double t) {
  return (4.0 * d_of(model, lm, t / 2.0) - d_of(model, lm, t)) / 3.0;
}

}  // namespace

Phi3Extraction extract_phi3(const LindbladModel& model, double t_ref) {
  check_time(t_ref, "extract_phi3");
  const ComplexMatrix lm = liouvillian_matrix(model);
  const ComplexMatrix e0 = phi3_estimate(model, lm, t_ref);
  const ComplexMatrix e1 = phi3_estimate(model, lm, t_ref / 2.0);
  const ComplexMatrix e2 = phi3_estimate(model, lm, t_ref / 4.0);
  Phi3Extraction out;
  out.phi3 = e0;
  out.residuals = {linalg::spectral_norm(e0 - e1), linalg::spectral_norm(e1 - e2)};
  out.residual_ratio = out.residuals[1] > 0.0 ? out.residuals[0] / out.residuals[1] : INFINITY;
  // At roundoff level the ratio carries no information. The log loses about
  // kappa eps ||t L|| absolutely, which D(t) divides by t^3; the finest
  // estimate reaches down to t_ref / 8 with Richardson weight 4/3.
  constexpr double kappa = 1e3;
  const double h = t_ref / 8.0;
  const double roundoff =
      (4.0 / 3.0) * kappa * std::numeric_limits<double>::epsilon() * linalg::spectral_norm(lm) / (h * h);
  const double floor = std::max(1e-9 * std::max(1.0, linalg::spectral_norm(e0)), roundoff);
  out.converged = out.residual_ratio >= 8.0 || (out.residuals[0] <= floor && out.residuals[1] <= floor);
  if (!out.converged) {
    throw GuardError("extract_phi3: residual shrank only by " + std::to_string(out.residual_ratio) +
                     " when halving t_ref; use a smaller t_ref");
  }
  return out;
}

EvenOrderDiagnostic even_order_diagnostic(const LindbladModel& model, double t) {
  check_time(t, "even_order_diagnostic");
  const ComplexMatrix lm = liouvillian_matrix(model);
  constexpr int kPoints = 4;
  Eigen::Matrix4d vander;
  std::vector<ComplexMatrix> rhs;
  for (int i = 0; i < kPoints; ++i) {
    const double ti = t / std::ldexp(1.0, i);
    // Columns are (t_i / t)^{2..5} so the system stays well scaled.
    for (int k = 0; k < kPoints; ++k) vander(i, k) = std::pow(ti / t, k + 2);
    rhs.push_back(effective_generator(model, ti) - ti * lm);
  }
  const Eigen::Matrix4d inv = vander.inverse();
  auto coeff = [&](int k) {
    ComplexMatrix c = ComplexMatrix::Zero(lm.rows(), lm.cols());
    for (int i = 0; i < kPoints; ++i) c += inv(k, i) * rhs[static_cast<size_t>(i)];
    return ComplexMatrix(c / std::pow(t, k + 2));
  };
  EvenOrderDiagnostic out;
  out.c2_norm = linalg::spectral_norm(coeff(0));
  out.c3_norm = linalg::spectral_norm(coeff(1));
  return out;
}

TruncationReport verify_bch_truncation(const LindbladModel& model, int q0,
                                       const std::vector<double>& t_grid, double t_ref) {
  if (q0 != 3) throw std::invalid_argument("verify_bch_truncation: only q0 = 3 is implemented");
  check_sites(model, kBchTruncationMaxSites, "verify_bch_truncation");
  if (t_grid.size() < 3) throw std::invalid_argument("verify_bch_truncation: need >= 3 grid points");
  const ComplexMatrix lm = liouvillian_matrix(model);
  const Phi3Extraction phi = extract_phi3(model, t_ref);
  TruncationReport rep;
  rep.phi3_converged = phi.converged;
  rep.phi3_norm = linalg::spectral_norm(phi.phi3);
  rep.alpha3_over_9 = alpha_comm_q(model, 3) / 9.0;
  rep.phi2_relative = even_order_diagnostic(model, t_ref).relative();
  const AlphaCommQ0 acq(model, q0);
  std::vector<double> ts;
  std::vector<double> ds;
  for (double t : t_grid) {
    check_time(t, "verify_bch_truncation");
    TruncationPoint pt;
    pt.t = t;
    const ComplexMatrix approx = linalg::expm(t * lm + t * t * t * phi.phi3);
    pt.distance = linalg::spectral_norm(approx - step_superop_matrix(model, t));
    const auto v = acq.at(t);
    pt.certified = v.certified;
    pt.bound = std::numbers::e * v.total();
    pt.holds = pt.distance <= pt.bound;
    rep.points.push_back(pt);
    if (pt.distance > 0.0) {
      ts.push_back(t);
      ds.push_back(pt.distance);
    }
  }
  if (ts.size() >= 3) {
    const FitResult f = fit_loglog(ts, ds);
    rep.slope = f.slope;
    rep.intercept = f.intercept;
    rep.r_squared = f.r_squared;
  }
  return rep;
}

}  // namespace lindblad
