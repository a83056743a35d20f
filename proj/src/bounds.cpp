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

#include "lindblad/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lindblad/errors.hpp"
#include "lindblad/parallel.hpp"

namespace lindblad {

namespace {

constexpr double kE = std::numbers::e;

using Components = std::vector<PairFormSuperop>;

struct SummandData {
  std::vector<Components> comps;  // per summand
  std::vector<SiteList> supports;
};

SummandData summand_data(const LindbladModel& model) {
  SummandData d;
  for (int j = 0; j < model.summand_count(); ++j) {
    d.comps.push_back(summand_components(model, j));
    SiteList sup;
    for (const auto& c : d.comps.back()) sup = merge_supports(sup, c.support());
    d.supports.push_back(std::move(sup));
  }
  return d;
}

// sum over c in comps of [c, x], merged and simplified. With pruning, only
// the c touching supp(x) contribute.
PairFormSuperop merged_commutator(const Components& comps, const PairFormSuperop& x, bool prune) {
  std::vector<PairFormSuperop> parts;
  for (const auto& c : comps) {
    if (prune && !supports_overlap(c.support(), x.support())) continue;
    PairFormSuperop part = pairform_commutator(c, x, prune);
    if (!part.empty()) parts.push_back(std::move(part));
  }
  if (parts.empty()) return {};
  return PairFormSuperop::sum(parts).simplified();
}

// Local pieces of all grade-q nested commutators, grouped by summand tuple.
struct PieceGroup {
  SiteList support;  // union over pieces
  Components pieces;
};

// Walks outward from `w` through `levels` more summand levels; calls
// visit(result) for every nonzero commutator reached, in deterministic order.
template <typename Visit>
void nest_outward(const SummandData& data, const PairFormSuperop& w, int levels, bool prune,
                  Visit&& visit) {
  if (levels == 0) {
    visit(w);
    return;
  }
  for (size_t j = 0; j < data.comps.size(); ++j) {
    if (prune && !supports_overlap(data.supports[j], w.support())) continue;
    PairFormSuperop next = merged_commutator(data.comps[j], w, prune);
    if (next.empty()) continue;
    nest_outward(data, next, levels - 1, prune, visit);
  }
}

// Innermost components in summand order.
std::vector<const PairFormSuperop*> roots_of(const SummandData& data) {
  std::vector<const PairFormSuperop*> roots;
  for (const auto& comps : data.comps) {
    for (const auto& c : comps) roots.push_back(&c);
  }
  return roots;
}

// Grade-q pieces grouped by summand tuple (j_1, ..., j_q); the pieces of a
// tuple are indexed by the innermost component.
std::vector<PieceGroup> grade_groups(const SummandData& data, int q, bool prune) {
  if (q == 1) {
    std::vector<PieceGroup> out;
    for (size_t j = 0; j < data.comps.size(); ++j) out.push_back({data.supports[j], data.comps[j]});
    return out;
  }
  // Tuples are enumerated as (inner summand, outer path); group by path.
  std::map<std::vector<int>, PieceGroup> groups;
  for (size_t jq = 0; jq < data.comps.size(); ++jq) {
    for (const auto& c : data.comps[jq]) {
      // Track the summand path explicitly.
      struct Frame {
        PairFormSuperop w;
        std::vector<int> path;
      };
      std::vector<Frame> frontier{{c, {static_cast<int>(jq)}}};
      for (int level = 1; level < q; ++level) {
        std::vector<Frame> next;
        for (const auto& f : frontier) {
          for (size_t j = 0; j < data.comps.size(); ++j) {
            if (prune && !supports_overlap(data.supports[j], f.w.support())) continue;
            PairFormSuperop w = merged_commutator(data.comps[j], f.w, prune);
            if (w.empty()) continue;
            std::vector<int> path = f.path;
            path.push_back(static_cast<int>(j));
            next.push_back({std::move(w), std::move(path)});
          }
        }
        frontier = std::move(next);
      }
      for (auto& f : frontier) {
        auto& g = groups[f.path];
        g.support = merge_supports(g.support, f.w.support());
        g.pieces.push_back(std::move(f.w));
      }
    }
  }
  std::vector<PieceGroup> out;
  for (auto& kv : groups) out.push_back(std::move(kv.second));
  return out;
}

void check_grade(int q, int lo, int hi, const char* what) {
  if (q < lo || q > hi) {
    throw std::invalid_argument(std::string(what) + ": grade " + std::to_string(q) +
                                " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "]");
  }
}

}  // namespace

PairFormSuperop pairform_commutator(const PairFormSuperop& a, const PairFormSuperop& b,
                                    bool prune_disjoint) {
  if (a.empty() || b.empty()) return {};
  if (prune_disjoint && !supports_overlap(a.support(), b.support())) return {};
  const SiteList joint = merge_supports(a.support(), b.support());
  const PairFormSuperop ae = a.embedded(joint);
  const PairFormSuperop be = b.embedded(joint);
  std::vector<PairFormSuperop::Term> terms;
  terms.reserve(2 * ae.terms().size() * be.terms().size());
  for (const auto& x : ae.terms()) {
    for (const auto& y : be.terms()) {
      terms.push_back({x.a * y.a, y.b * x.b});
      terms.push_back({-(y.a * x.a), x.b * y.b});
    }
  }
  return PairFormSuperop(joint, std::move(terms));
}

double alpha_comm_q(const LindbladModel& model, int q, const CommutatorOptions& options) {
  check_grade(q, 2, 5, "alpha_comm_q");
  const SummandData data = summand_data(model);
  const auto roots = roots_of(data);
  std::vector<double> partial(roots.size(), 0.0);
  parallel_for(roots.size(), options.threads, [&](size_t i) {
    double s = 0.0;
    nest_outward(data, *roots[i], q - 1, options.prune,
                 [&](const PairFormSuperop& w) { s += w.norm_bound(); });
    partial[i] = s;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

double alpha_doubly_nested(const LindbladModel& model, const std::vector<int>& grades,
                           const CommutatorOptions& options) {
  if (grades.empty()) throw std::invalid_argument("alpha_doubly_nested: no grades");
  int total_grade = 0;
  for (int q : grades) {
    check_grade(q, 1, 6, "alpha_doubly_nested");
    total_grade += q;
  }
  if (total_grade > 6) {
    throw std::invalid_argument("alpha_doubly_nested: grade sum " + std::to_string(total_grade) +
                                " exceeds 6");
  }
  if (grades.size() == 1) {
    if (grades[0] > 1) return alpha_comm_q(model, grades[0], options);
    double total = 0.0;
    for (const auto& c : local_components(model)) total += c.norm_bound();
    return total;
  }
  const bool prune = options.prune;
  const SummandData data = summand_data(model);
  // Outer slots, listed from the second-innermost outward.
  std::vector<std::vector<PieceGroup>> outer;
  for (size_t r = grades.size() - 1; r-- > 0;) outer.push_back(grade_groups(data, grades[r], prune));

  // Innermost slot pieces, one per (tuple, innermost component).
  std::vector<PairFormSuperop> inner;
  for (auto& g : grade_groups(data, grades.back(), prune)) {
    for (auto& p : g.pieces) inner.push_back(std::move(p));
  }

  std::vector<double> partial(inner.size(), 0.0);
  parallel_for(inner.size(), options.threads, [&](size_t i) {
    double s = 0.0;
    auto rec = [&](auto&& self, const PairFormSuperop& w, size_t level) -> void {
      if (level == outer.size()) {
        s += w.norm_bound();
        return;
      }
      for (const auto& group : outer[level]) {
        if (prune && !supports_overlap(group.support, w.support())) continue;
        PairFormSuperop next = merged_commutator(group.pieces, w, prune);
        if (next.empty()) continue;
        self(self, next, level + 1);
      }
    };
    rec(rec, inner[i], 0);
    partial[i] = s;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

TightBound alpha3_tight(const LindbladModel& model, int threads) {
  const SummandData data = summand_data(model);
  const size_t m = data.comps.size();
  std::vector<TightBound> partial(m);
  parallel_for(m, threads, [&](size_t j1) {
    Components later;
    for (size_t j = j1 + 1; j < m; ++j) {
      for (const auto& c : data.comps[j]) later.push_back(c);
    }
    TightBound b;
    if (!later.empty()) {
      for (const auto& u : data.comps[j1]) {
        const PairFormSuperop inner = merged_commutator(later, u, true);
        if (inner.empty()) continue;
        b.c12 += merged_commutator(later, inner, true).norm_bound();
      }
      for (const auto& w : later) {
        const PairFormSuperop inner = merged_commutator(data.comps[j1], w, true);
        if (inner.empty()) continue;
        b.c24 += merged_commutator(data.comps[j1], inner, true).norm_bound();
      }
    }
    partial[j1] = b;
  });
  TightBound total;
  for (const auto& b : partial) {
    total.c12 += b.c12;
    total.c24 += b.c24;
  }
  return total;
}

double alpha2_tight_first_order(const LindbladModel& model) {
  const SummandData data = summand_data(model);
  const size_t m = data.comps.size();
  double total = 0.0;
  for (size_t j1 = 0; j1 < m; ++j1) {
    Components later;
    for (size_t j = j1 + 1; j < m; ++j) {
      for (const auto& c : data.comps[j]) later.push_back(c);
    }
    for (const auto& u : data.comps[j1]) total += merged_commutator(later, u, true).norm_bound();
  }
  return total;
}

double alpha_lattice_q(int n, int k, double g, int q) {
  if (q < 2) throw std::invalid_argument("alpha_lattice_q: q must be >= 2");
  if (k < 1) throw std::invalid_argument("alpha_lattice_q: k must be >= 1");
  return std::tgamma(q + 1.0) * std::pow(4.0 * k * g, q) * n / (4.0 * k * q);
}

double alpha_doubly_lattice(int n, int k, double g, const std::vector<int>& grades) {
  if (grades.empty()) throw std::invalid_argument("alpha_doubly_lattice: no grades");
  const size_t d = grades.size();
  double prod = 1.0;
  for (size_t r = 0; r < d; ++r) {
    int p_next = 1;  // P_{r+1}
    if (r + 1 < d) {
      p_next = 0;
      for (size_t j = r + 1; j < d; ++j) p_next += grades[j];
    }
    prod *= p_next * std::tgamma(grades[r] + 1.0) * std::pow(4.0 * k * g, grades[r]);
  }
  return prod * n / (4.0 * k * grades.back());
}

namespace {

void compositions(int total, int max_part, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (total == 0) {
    out.push_back(cur);
    return;
  }
  for (int q = 1; q <= std::min(total, max_part); ++q) {
    cur.push_back(q);
    compositions(total - q, max_part, cur, out);
    cur.pop_back();
  }
}

}  // namespace

AlphaCommQ0::AlphaCommQ0(const LindbladModel& model, int q0, const CommutatorOptions& options)
    : q0_(q0), n_(model.n_sites()), k_(model.k()), g_(extensiveness_g(model)) {
  if (q0 < 1) throw std::invalid_argument("alpha_comm_q0: q0 must be >= 1");
  if (q0 + 2 > 6) {
    throw std::invalid_argument("alpha_comm_q0: q0 = " + std::to_string(q0) +
                                " needs grade " + std::to_string(q0 + 2) +
                                " commutators, above the cost guard of 6");
  }
  std::map<std::vector<int>, double> cache;
  for (int total = q0 + 1; total <= q0 + 2; ++total) {
    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(total, q0, cur, comps);
    double coeff = 0.0;
    for (const auto& c : comps) {
      if (c.size() < 2) continue;
      // [[A], [slot]] is the right-nested [A, slot], so a grade-1 slot
      // directly outside the innermost one folds into it.
      std::vector<int> key = c;
      while (key.size() >= 2 && key[key.size() - 2] == 1) {
        key[key.size() - 2] = 1 + key.back();
        key.pop_back();
      }
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, alpha_doubly_nested(model, key, options)).first;
      coeff += it->second / std::tgamma(static_cast<double>(c.size()) + 1.0);
    }
    coeff_[total] = coeff;
  }
}

AlphaCommQ0::Value AlphaCommQ0::at(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("alpha_comm_q0: t must be >= 0");
  Value v;
  for (const auto& [q, c] : coeff_) v.numeric += c * std::pow(t, q);
  const double x = 8.0 * kE * kE * q0_ * k_ * g_ * t;
  v.certified = x <= 1.0;
  if (v.certified) v.tail = kE * std::pow(8.0 * kE * q0_ * k_ * g_ * t, q0_ + 1) * n_;
  return v;
}

AlphaCommQ0::Value alpha_comm_q0(const LindbladModel& model, int q0, double t_step) {
  return AlphaCommQ0(model, q0).at(t_step);
}

double mu_comm_q0(const LindbladModel& model, int q0, const CommutatorOptions& options) {
  double mu = 0.0;
  for (int q = 3; q <= q0; q += 2) {
    mu = std::max(mu, std::pow(alpha_comm_q(model, q, options), 1.0 / q));
  }
  return mu;
}

long plan_trotter_steps(const TightBound& tight, double t, double eps) {
  if (!(t > 0.0)) throw std::invalid_argument("plan_trotter_steps: t must be > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("plan_trotter_steps: eps must be in (0, 1)");
  const double c = tight.c12 / 12.0 + tight.c24 / 24.0;
  const double r = std::ceil(std::pow(t, 1.5) * std::sqrt(c / eps));
  return std::max(1L, static_cast<long>(r));
}

long plan_trotter_steps(const LindbladModel& model, double t, double eps) {
  return plan_trotter_steps(alpha3_tight(model), t, eps);
}

ExtrapolationPlan plan_extrapolation(const LindbladModel& model, double t, double eps,
                                     const ExtrapolationOptions& options) {
  if (!(t > 0.0)) throw std::invalid_argument("plan_extrapolation: t must be > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("plan_extrapolation: eps must be in (0, 1)");
  ExtrapolationPlan plan;
  bool found = false;
  for (int p = 1; p <= options.max_p; ++p) {
    const auto r = nodes(p);
    const auto b = coefficients(r);
    const double bl1 = l1_norm(b);
    if (std::exp(-2.0 * p) <= eps / (8.0 * bl1)) {
      plan.p = p;
      plan.r_nodes = r;
      plan.b_coeffs = b;
      plan.b_l1 = bl1;
      found = true;
      break;
    }
  }
  if (!found) {
    throw InfeasiblePlanError("plan_extrapolation: no order p <= " + std::to_string(options.max_p) +
                              " satisfies e^{-2p} <= eps / (8 ||b||_1)");
  }
  const double mu = mu_comm_q0(model, options.q0, options.commutators);
  const AlphaCommQ0 acq(model, options.q0, options.commutators);
  const double r_p = static_cast<double>(plan.r_nodes.back());
  const double s_cap = mu > 0.0 ? std::pow(2.0 * mu * t, -1.5) / kE : INFINITY;
  auto feasible = [&](long n) {
    const double s = 1.0 / (static_cast<double>(n) * r_p);
    if (s > s_cap) return false;
    const auto v = acq.at(s * t);
    return v.certified && v.total() <= s * eps / (4.0 * kE * plan.b_l1);
  };
  long hi = 1;
  while (!feasible(hi)) {
    if (hi >= options.max_base_steps) {
      throw InfeasiblePlanError("plan_extrapolation: no step size with 1/s_0 <= " +
                                std::to_string(options.max_base_steps) +
                                " meets the commutator conditions");
    }
    hi *= 2;
  }
  long lo = hi / 2;  // infeasible (or 0)
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  plan.base_steps = hi;
  plan.s_steps.clear();
  for (long r : plan.r_nodes) plan.s_steps.push_back(1.0 / static_cast<double>(hi * r));
  const double shots =
      std::ceil(4.0 * plan.b_l1 * plan.b_l1 * std::log(3.0 * plan.p) / (eps * eps));
  plan.shots = options.shots_override >= 0 ? options.shots_override : static_cast<long>(shots);
  plan.seed = options.seed;
  validate_plan(plan);
  return plan;
}

BoundReport bound_report(const LindbladModel& model, const BoundReportOptions& options) {
  BoundReport rep;
  rep.g = extensiveness_g(model);
  rep.k = model.k();
  const auto& copts = options.commutators;
  for (int q = 2; q <= options.q_max; ++q) {
    rep.alpha_q[q] = alpha_comm_q(model, q, copts);
    rep.alpha_lattice_q[q] = alpha_lattice_q(model.n_sites(), rep.k, rep.g, q);
  }
  rep.alpha3_numeric = rep.alpha_q.count(3) ? rep.alpha_q[3] : alpha_comm_q(model, 3, copts);
  const TightBound tight = alpha3_tight(model, copts.threads);
  rep.alpha3_tight_c12 = tight.c12;
  rep.alpha3_tight_c24 = tight.c24;
  rep.r_planned = plan_trotter_steps(tight, options.t, options.eps);
  for (const auto& grades : options.doubly_grades) {
    rep.alpha_doubly[grades] = alpha_doubly_nested(model, grades, copts);
  }
  const double t_step =
      options.t_step > 0.0 ? options.t_step : options.t / static_cast<double>(rep.r_planned);
  const auto v = AlphaCommQ0(model, options.q0, copts).at(t_step);
  rep.alpha_comm_q0_numeric = v.numeric;
  rep.alpha_comm_q0_tail = v.tail;
  rep.alpha_comm_q0_certified = v.certified;
  rep.mu_comm_q0 = mu_comm_q0(model, options.q0, copts);
  return rep;
}

}  // namespace lindblad
