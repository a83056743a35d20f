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

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "lindblad/bounds.hpp"
#include "lindblad/errors.hpp"
#include "lindblad/linalg.hpp"
#include "lindblad/model.hpp"
#include "lindblad/propagate.hpp"
#include "oracles.hpp"

using namespace lindblad;
using oracle::C;
using oracle::M;

namespace {

double diff(const M& a, const M& b) { return (a - b).cwiseAbs().maxCoeff(); }

PairFormSuperop coherent(const M& h, int site) {
  const C i1(0, 1);
  const M id = M::Identity(h.rows(), h.cols());
  return PairFormSuperop({site}, {{-i1 * h, id}, {id, i1 * h}});
}

// Dense superoperators of the TFIM summands.
std::vector<M> dense_superops(int n, double j, double h, double gamma) {
  std::vector<M> out;
  for (const auto& p : oracle::tfim_summands(n, j, h, gamma))
    out.push_back(oracle::superop_matrix([&](const M& x) { return oracle::rhs(p, x); }, 1L << n));
  return out;
}

// Sum over all index tuples of the spectral norm of the nested matrix commutator.
double brute_alpha(const std::vector<M>& ls, int q) {
  const int m = static_cast<int>(ls.size());
  double total = 0.0;
  std::function<void(int, const M&)> rec = [&](int depth, const M& inner) {
    for (int j = 0; j < m; ++j) {
      const M c = ls[j] * inner - inner * ls[j];
      if (depth + 1 == q) {
        total += oracle::spectral_norm(c);
      } else {
        rec(depth + 1, c);
      }
    }
  };
  for (int j = 0; j < m; ++j) rec(1, ls[j]);
  return total;
}

double one_step_error(const LindbladModel& m, int n, double tau) {
  const DensityMatrix rho = make_initial_state(InitialState::AllPlus, n);
  return trace_distance_error(m, rho, tau, 1, 2, BackendKind::LocalApply);
}

LindbladModel commuting_model() {
  return LindbladModel(3, {{"Z0", {{{0}, oracle::Z()}}}, {"Z2", {{{2}, 0.5 * oracle::Z()}}}},
                       {{"D1", {{{1}, oracle::lower()}}}}, 1, 1);
}

}  // namespace

TEST_CASE("pairform_commutator: locality and small cases") {
  const PairFormSuperop z0 = coherent(oracle::Z(), 0), x1 = coherent(oracle::X(), 1);
  const PairFormSuperop c = pairform_commutator(z0, x1);
  CHECK(c.terms().empty());
  CHECK(c.norm_bound() == 0.0);
  const PairFormSuperop zz = pairform_commutator(z0, z0);
  CHECK(zz.terms().size() == 8);
  CHECK(zz.local_matrix().cwiseAbs().maxCoeff() < 1e-12);
  CHECK(zz.norm_bound() > 0.0);
  // [ad_X, ad_Z] = ad_[X,Z] with ad_H = -i[H, .]: [X,Z] = -2iY gives -i ad_{-2iY}... checked densely.
  const PairFormSuperop x0 = coherent(oracle::X(), 0);
  const M ax = oracle::coherent_matrix(oracle::X()), az = oracle::coherent_matrix(oracle::Z());
  const M xz = pairform_commutator(x0, z0).local_matrix();
  CHECK(diff(xz, ax * az - az * ax) < 1e-12);
  const C i1(0, 1);
  CHECK(diff(xz, -i1 * oracle::coherent_matrix(-2.0 * i1 * oracle::Y())) < 1e-12);
  CHECK(pairform_commutator(x0, z0).terms().size() == 2 * 2 * 2);
  // Unpruned disjoint commutator is the zero map with the full term count.
  const PairFormSuperop raw = pairform_commutator(z0, x1, false);
  CHECK(raw.terms().size() == 8);
  CHECK(raw.local_matrix().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("alpha_comm_q: range guard and commuting model") {
  const LindbladModel m = build_tfim(3, 1.0, 0.5, 0.1);
  CHECK_THROWS_AS(alpha_comm_q(m, 1), std::invalid_argument);
  CHECK_THROWS_AS(alpha_comm_q(m, 6), std::invalid_argument);
  for (int q = 2; q <= 5; ++q) CHECK(alpha_comm_q(commuting_model(), q) == 0.0);
}

TEST_CASE("alpha_comm_q dominates a brute-force matrix enumeration on N = 3") {
  const LindbladModel m = build_tfim(3, 1.0, 0.5, 0.1);
  const std::vector<M> ls = dense_superops(3, 1.0, 0.5, 0.1);
  for (int q : {2, 3, 4}) {
    const double ours = alpha_comm_q(m, q);
    const double brute = brute_alpha(ls, q);
    MESSAGE("q=" << q << " pair-form " << ours << " matrix " << brute << " slack " << ours / brute);
    CHECK(brute <= ours * (1 + 1e-12));
    // Documented slack between the pair-form bound and the matrix 2-norm.
    CHECK(ours <= 2.0 * brute);
  }
}

TEST_CASE("pruning does not change alpha values") {
  for (int n : {2, 3}) {
    const LindbladModel m = build_tfim(n, 1.0, 0.5, 0.3);
    for (int q : {2, 3, 4}) {
      const double a = alpha_comm_q(m, q, {true, 1});
      const double b = alpha_comm_q(m, q, {false, 1});
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
    }
    const double a = alpha_doubly_nested(m, {2, 2}, {true, 1});
    const double b = alpha_doubly_nested(m, {2, 2}, {false, 1});
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
  }
}

TEST_CASE("alpha values are bit-stable across thread counts") {
  const LindbladModel m = build_tfim(5, 1.0, 0.5, 0.1);
  CHECK(alpha_comm_q(m, 3, {true, 1}) == alpha_comm_q(m, 3, {true, 3}));
  CHECK(alpha_doubly_nested(m, {1, 2}, {true, 1}) == alpha_doubly_nested(m, {1, 2}, {true, 3}));
}

TEST_CASE("lattice formula dominates numeric alpha on TFIM") {
  for (int n = 2; n <= 6; ++n) {
    for (double gamma : {0.1, 1.0}) {
      const LindbladModel m = build_tfim(n, 1.0, 0.5, gamma);
      const double g = extensiveness_g(m);
      for (int q : {2, 3, 4}) CHECK(alpha_comm_q(m, q) <= alpha_lattice_q(n, m.k(), g, q));
    }
  }
}

TEST_CASE("alpha3 tau^3 bounds the one-step error") {
  for (int n = 2; n <= 5; ++n) {
    const LindbladModel m = build_tfim(n, 1.0, 0.5, 0.1);
    const double a3 = alpha_comm_q(m, 3);
    const TightBound tight = alpha3_tight(m);
    for (double tau : {0.05, 0.1, 0.2}) {
      const double err = one_step_error(m, n, tau);
      CHECK(err <= a3 * tau * tau * tau);
      CHECK(err <= tight.one_step(tau));
    }
  }
}

TEST_CASE("alpha3_tight: trivial cases and ordering") {
  const LindbladModel single(1, {{"H", {{{0}, oracle::X()}}}}, {}, 1, 1);
  const TightBound t1 = alpha3_tight(single);
  CHECK(t1.c12 == 0.0);
  CHECK(t1.c24 == 0.0);
  const TightBound tc = alpha3_tight(commuting_model());
  CHECK(tc.c12 == 0.0);
  CHECK(tc.c24 == 0.0);
  const LindbladModel m = build_tfim(4, 1.0, 0.5, 0.1);
  const TightBound t = alpha3_tight(m);
  CHECK(t.c12 > 0.0);
  CHECK(t.c24 > 0.0);
  CHECK(t.c12 / 12 + t.c24 / 24 <= alpha_comm_q(m, 3));
  CHECK(alpha2_tight_first_order(commuting_model()) == 0.0);
  CHECK(alpha2_tight_first_order(m) > 0.0);
}

TEST_CASE("alpha_lattice_q: formula instances") {
  // (1/24) 6 (41.6)^3 4 = 41.6^3
  CHECK(alpha_lattice_q(4, 2, 5.2, 3) == doctest::Approx(71991.296).epsilon(1e-12));
  CHECK(alpha_lattice_q(4, 2, 0.0, 3) == 0.0);
  CHECK(alpha_lattice_q(1, 1, 1.0, 2) == doctest::Approx(4.0));
  CHECK_THROWS_AS(alpha_lattice_q(4, 2, 1.0, 1), std::invalid_argument);
}

TEST_CASE("alpha_doubly_nested: collapses and lattice dominance") {
  const LindbladModel m = build_tfim(3, 1.0, 0.5, 0.1);
  for (int q : {2, 3, 4}) CHECK(alpha_doubly_nested(m, {q}) == doctest::Approx(alpha_comm_q(m, q)).epsilon(1e-12));
  CHECK(alpha_doubly_nested(m, {1, 1}) == doctest::Approx(alpha_comm_q(m, 2)).epsilon(1e-12));
  const double g = extensiveness_g(m);
  for (const std::vector<int>& gr : std::vector<std::vector<int>>{{2, 2}, {1, 2}, {2, 1}, {1, 1, 1}})
    CHECK(alpha_doubly_nested(m, gr) <= alpha_doubly_lattice(3, m.k(), g, gr));
  // (1/(4k q_2)) P_2 q_1! (4kg)^{q_1} q_2! (4kg)^{q_2} N with P_2 = q_2
  const double x = 4 * 2 * g;
  CHECK(alpha_doubly_lattice(3, 2, g, {2, 2}) == doctest::Approx(2 * 2 * x * x * 2 * x * x * 3 / 16.0));
  CHECK(alpha_doubly_lattice(3, 2, g, {3}) == doctest::Approx(alpha_lattice_q(3, 2, g, 3)));
  CHECK_THROWS_AS(alpha_doubly_nested(m, {4, 3}), std::invalid_argument);
  CHECK(alpha_doubly_nested(commuting_model(), {2, 1}) == 0.0);
}

TEST_CASE("alpha_comm_q0: zero step, commuting model and the small-step cap") {
  const LindbladModel m = build_tfim(3, 1.0, 0.5, 0.1);
  const AlphaCommQ0 a(m, 3);
  const AlphaCommQ0::Value v0 = a.at(0.0);
  CHECK(v0.total() == 0.0);
  CHECK(v0.certified);
  CHECK(AlphaCommQ0(commuting_model(), 3).at(0.1).numeric == 0.0);
  const double g = extensiveness_g(m);
  const double x_edge = 1.0 / (8 * std::exp(2.0) * 3 * m.k() * g);
  for (double frac : {0.5, 0.25, 0.1}) {
    const AlphaCommQ0::Value v = a.at(frac * x_edge);
    CHECK(v.certified);
    CHECK(v.total() <= 3 * std::exp(-3.0));
  }
  CHECK_FALSE(a.at(2 * x_edge).certified);
  CHECK(a.at(2 * x_edge).tail == 0.0);
  CHECK_THROWS_AS(a.at(-1.0), std::invalid_argument);
  CHECK(alpha_comm_q0(m, 3, 0.5 * x_edge).total() == doctest::Approx(a.at(0.5 * x_edge).total()));
}

TEST_CASE("mu_comm_q0 takes odd grades only") {
  const LindbladModel m = build_tfim(3, 1.0, 0.5, 0.1);
  CHECK(mu_comm_q0(m, 3) == doctest::Approx(std::cbrt(alpha_comm_q(m, 3))));
  CHECK(mu_comm_q0(m, 4) == doctest::Approx(std::cbrt(alpha_comm_q(m, 3))));
}

TEST_CASE("plan_trotter_steps: scaling laws and errors") {
  const LindbladModel m = build_tfim(4, 1.0, 0.5, 0.1);
  const TightBound tight = alpha3_tight(m);
  const long r1 = plan_trotter_steps(tight, 1.0, 1e-4);
  const long r4 = plan_trotter_steps(tight, 1.0, 0.25e-4);
  CHECK(std::abs(r4 - 2 * r1) <= 2);
  const long rt = plan_trotter_steps(tight, 8.0, 1e-4);
  CHECK(std::abs(static_cast<double>(rt) / r1 - std::pow(8.0, 1.5)) < 0.05 * std::pow(8.0, 1.5));
  // r tau^3 (c12/12 + c24/24) <= eps
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const long r = plan_trotter_steps(tight, 1.0, eps);
    CHECK(r * tight.one_step(1.0 / r) <= eps * (1 + 1e-12));
    if (r > 1) CHECK((r - 1) * tight.one_step(1.0 / (r - 1)) > eps);
  }
  CHECK_THROWS_AS(plan_trotter_steps(m, 0.0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(plan_trotter_steps(m, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(plan_trotter_steps(m, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("planned step counts meet the target error") {
  for (int n = 2; n <= 5; ++n) {
    const LindbladModel m = build_tfim(n, 1.0, 0.5, 0.1);
    const DensityMatrix rho = make_initial_state(InitialState::AllOnes, n);
    for (double eps : {1e-2, 1e-3}) {
      const long r = plan_trotter_steps(m, 1.0, eps);
      CHECK(trace_distance_error(m, rho, 1.0, r, 2, BackendKind::LocalApply) <= eps);
    }
  }
}

TEST_CASE("plan_extrapolation: feasible small model") {
  const LindbladModel m = build_tfim(2, 1.0, 0.5, 0.1);
  const double t = 0.2, eps = 0.5;
  const ExtrapolationPlan plan = plan_extrapolation(m, t, eps);
  CHECK(plan.p <= 3);
  CHECK(std::exp(-2.0 * plan.p) <= eps / (8 * plan.b_l1));
  if (plan.p > 1) {
    const double b_prev = l1_norm(coefficients(nodes(plan.p - 1)));
    CHECK(std::exp(-2.0 * (plan.p - 1)) > eps / (8 * b_prev));
  }
  CHECK_NOTHROW(validate_plan(plan));
  const double sp = plan.s_steps.back();
  const double mu = mu_comm_q0(m, 3);
  CHECK(sp <= std::pow(2 * mu * t, -1.5) / std::exp(1.0));
  const AlphaCommQ0::Value v = alpha_comm_q0(m, 3, sp * t);
  CHECK(v.certified);
  CHECK(v.total() <= sp * eps / (4 * std::exp(1.0) * plan.b_l1));
  CHECK(plan.shots == static_cast<long>(std::ceil(4 * plan.b_l1 * plan.b_l1 * std::log(3.0 * plan.p) / (eps * eps))));
}

TEST_CASE("plan_extrapolation: shot scaling and infeasibility") {
  const LindbladModel m = build_tfim(2, 1.0, 0.5, 0.1);
  const ExtrapolationPlan a = plan_extrapolation(m, 0.2, 0.2);
  const ExtrapolationPlan b = plan_extrapolation(m, 0.2, 0.02);
  // 100x from eps, the rest from the larger ||b||_1 and log(3p).
  const double expected = 100.0 * (b.b_l1 * b.b_l1 * std::log(3.0 * b.p)) / (a.b_l1 * a.b_l1 * std::log(3.0 * a.p));
  CHECK(static_cast<double>(b.shots) / a.shots == doctest::Approx(expected).epsilon(1e-3));
  ExtrapolationOptions opt;
  opt.max_p = 2;
  CHECK_THROWS_AS(plan_extrapolation(m, 0.2, 1e-6, opt), InfeasiblePlanError);
  opt = {};
  opt.max_base_steps = 1;
  CHECK_THROWS_AS(plan_extrapolation(m, 5.0, 0.1, opt), InfeasiblePlanError);
  CHECK_THROWS_AS(plan_extrapolation(m, 0.2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(plan_extrapolation(m, -0.2, 0.1), std::invalid_argument);
}

TEST_CASE("bound_report: fields are consistent") {
  const LindbladModel m = build_tfim(3, 1.0, 0.5, 0.1);
  BoundReportOptions opt;
  opt.doubly_grades = {{1, 2}, {2, 2}};
  const BoundReport r = bound_report(m, opt);
  CHECK(r.alpha3_numeric == doctest::Approx(alpha_comm_q(m, 3)));
  CHECK(r.alpha3_numeric <= r.alpha_lattice_q.at(3));
  CHECK(r.alpha_q.size() == 3);
  CHECK(r.alpha_doubly.size() == 2);
  CHECK(r.r_planned == plan_trotter_steps(m, 0.2, 1e-3));
  CHECK(r.k == 2);
  CHECK(r.g == doctest::Approx(extensiveness_g(m)));
  CHECK(r.alpha_comm_q0_numeric >= 0.0);
  CHECK(r.mu_comm_q0 == doctest::Approx(mu_comm_q0(m, 3)));
}
