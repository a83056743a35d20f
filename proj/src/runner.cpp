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

#include "lindblad/runner.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "lindblad/bchverify.hpp"
#include "lindblad/bounds.hpp"
#include "lindblad/errors.hpp"
#include "lindblad/parallel.hpp"
#include "lindblad/richardson.hpp"

namespace lindblad {

using nlohmann::ordered_json;

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

constexpr BackendKind kBackend = BackendKind::LocalApply;

LindbladModel tfim(const RunConfig& cfg, int n, double gamma) {
  return build_tfim(n, cfg.model.j_coupling, cfg.model.h_field, gamma);
}

struct ExactKey {
  int n;
  double gamma;
  InitialState state;
  auto operator<=>(const ExactKey&) const = default;
};

// json numbers from format_real keep the CSV and JSON views identical.
ordered_json real_json(double x) { return ordered_json::parse(format_real(x)); }

ordered_json fit_to_json(const GroupFit& g) {
  ordered_json j;
  j["x"] = g.x;
  j["y"] = g.y;
  j["gamma"] = real_json(g.gamma);
  if (g.r > 0) j["r"] = g.r;
  if (g.n > 0) j["n"] = g.n;
  if (!g.initial_state.empty()) j["initial_state"] = g.initial_state;
  if (g.error.empty()) {
    j["slope"] = real_json(g.fit.slope);
    j["intercept"] = real_json(g.fit.intercept);
    j["r_squared"] = real_json(g.fit.r_squared);
    j["points"] = g.fit.points;
  } else {
    j["error"] = g.error;
  }
  return j;
}

GroupFit make_fit(GroupFit g, const std::vector<double>& xs, const std::vector<double>& ys) {
  try {
    g.fit = fit_loglog(xs, ys);
  } catch (const std::exception& e) {
    g.error = e.what();
  }
  return g;
}

void write_file(const std::string& path, const std::string& body) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << body;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string hex64(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::vector<ScanRow> run_error_scan(const RunConfig& cfg, int threads) {
  std::vector<ExactKey> keys;
  for (int n : cfg.model.n_values) {
    for (double g : cfg.model.gammas) {
      for (InitialState s : cfg.initial_states) keys.push_back({n, g, s});
    }
  }
  std::sort(keys.begin(), keys.end());
  // Largest systems first so the slowest tasks start early.
  std::vector<size_t> order(keys.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
  std::vector<ComplexMatrix> exact(keys.size());
  parallel_for(keys.size(), threads, [&](size_t i) {
    const ExactKey& k = keys[order[i]];
    const LindbladModel model = tfim(cfg, k.n, k.gamma);
    exact[order[i]] = exact_evolution(model, make_initial_state(k.state, k.n), cfg.time).matrix();
  });

  std::vector<ScanRow> rows;
  for (size_t i = 0; i < keys.size(); ++i) {
    for (long r : cfg.trotter.r_values) {
      ScanRow row;
      row.n = keys[i].n;
      row.gamma = keys[i].gamma;
      row.r = r;
      row.t = cfg.time;
      row.order = cfg.trotter.order;
      row.initial_state = keys[i].state;
      rows.push_back(row);
    }
  }
  const size_t per_key = cfg.trotter.r_values.size();
  parallel_for(rows.size(), threads, [&](size_t idx) {
    const size_t i = rows.size() - 1 - idx;
    ScanRow& row = rows[i];
    const ExactKey& k = keys[i / per_key];
    const LindbladModel model = tfim(cfg, row.n, row.gamma);
    const DensityMatrix rho0 = make_initial_state(k.state, k.n);
    const DensityMatrix ex = DensityMatrix::unchecked(exact[i / per_key], k.n);
    const DensityMatrix approx = trotter_evolve(model, rho0, row.t, row.r, row.order, kBackend);
    row.trace_distance_error = linalg::trace_norm(approx.matrix() - ex.matrix());
    const ComplexMatrix obs = total_magnetization(k.n);
    row.expectation = expectation(obs, approx);
    row.exact_expectation = expectation(obs, ex);
  });
  std::sort(rows.begin(), rows.end(), [](const ScanRow& a, const ScanRow& b) {
    return std::tie(a.n, a.gamma, a.r, a.initial_state) < std::tie(b.n, b.gamma, b.r, b.initial_state);
  });
  return rows;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  out << "n,gamma,r,t,order,initial_state,trace_distance_error\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_real(r.gamma) << ',' << r.r << ',' << format_real(r.t) << ','
        << r.order << ',' << to_string(r.initial_state) << ',' << format_real(r.trace_distance_error)
        << '\n';
  }
  return out.str();
}

std::string simulate_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream out;
  out << "n,gamma,r,t,order,initial_state,trace_distance_error,expectation,exact_expectation\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_real(r.gamma) << ',' << r.r << ',' << format_real(r.t) << ','
        << r.order << ',' << to_string(r.initial_state) << ',' << format_real(r.trace_distance_error)
        << ',' << format_real(r.expectation) << ',' << format_real(r.exact_expectation) << '\n';
  }
  return out.str();
}

std::vector<GroupFit> scan_fits(const std::vector<ScanRow>& rows) {
  std::map<std::tuple<double, long, InitialState>, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : rows) {
    auto& g = groups[{r.gamma, r.r, r.initial_state}];
    g.first.push_back(r.n);
    g.second.push_back(r.trace_distance_error);
  }
  std::vector<GroupFit> fits;
  for (const auto& [key, data] : groups) {
    GroupFit g;
    g.x = "n";
    g.y = "trace_distance_error";
    g.gamma = std::get<0>(key);
    g.r = std::get<1>(key);
    g.initial_state = to_string(std::get<2>(key));
    fits.push_back(make_fit(g, data.first, data.second));
  }
  return fits;
}

std::vector<ExtrapolateRow> run_extrapolation(const RunConfig& cfg, int threads) {
  if (cfg.model.n_values.size() != 1) {
    throw ConfigError("model.n: extrapolate takes a single n");
  }
  if (cfg.initial_states.size() != 1) {
    throw ConfigError("initial_state: extrapolate takes a single initial state");
  }
  if (cfg.trotter.order != 2) {
    throw ConfigError("trotter.order: extrapolate uses the second-order formula");
  }
  const ExtrapolationConfig& x = *cfg.extrapolation;
  const int n = cfg.model.n_values.front();
  const InitialState state = cfg.initial_states.front();
  const ComplexMatrix obs = total_magnetization(n);
  const DensityMatrix rho0 = make_initial_state(state, n);

  struct Task {
    double gamma;
    long r_scale;
  };
  std::vector<Task> tasks;
  std::map<double, ExtrapolationPlan> auto_plans;
  for (double g : cfg.model.gammas) {
    if (x.eps) {
      ExtrapolationOptions opts;
      opts.q0 = x.q0;
      opts.shots_override = x.shots;
      opts.seed = x.seed;
      const ExtrapolationPlan plan = plan_extrapolation(tfim(cfg, n, g), cfg.time, *x.eps, opts);
      auto_plans[g] = plan;
      tasks.push_back({g, plan.base_steps});
    } else {
      for (long r : cfg.trotter.r_values) tasks.push_back({g, r});
    }
  }
  std::map<double, double> exact;
  for (double g : cfg.model.gammas) {
    exact[g] = expectation(obs, exact_evolution(tfim(cfg, n, g), rho0, cfg.time));
  }

  std::vector<ExtrapolateRow> rows(tasks.size());
  parallel_for(tasks.size(), threads, [&](size_t i) {
    const Task& task = tasks[i];
    const LindbladModel model = tfim(cfg, n, task.gamma);
    const long shots = x.shots < 0 ? 0 : x.shots;
    ExtrapolationPlan plan;
    if (x.eps) {
      plan = auto_plans.at(task.gamma);
    } else if (x.p) {
      plan = make_ratio_plan(nodes(*x.p), task.r_scale, shots, x.seed);
    } else {
      plan = make_ratio_plan(x.node_ratios, task.r_scale, shots, x.seed);
    }
    const Algorithm1Result res = run_algorithm1(model, obs, rho0, cfg.time, plan, kBackend, 1);
    // Raw error is taken at the finest node, base_steps * max r_j.
    const long finest = plan.base_steps * *std::max_element(plan.r_nodes.begin(), plan.r_nodes.end());
    const DensityMatrix raw = trotter_evolve(model, rho0, cfg.time, finest, cfg.trotter.order, kBackend);
    ExtrapolateRow& row = rows[i];
    row.r_scale = task.r_scale;
    row.gamma = task.gamma;
    row.exact_expectation = exact.at(task.gamma);
    row.raw_error = std::abs(expectation(obs, raw) - row.exact_expectation);
    row.extrapolated_error = std::abs(res.estimate - row.exact_expectation);
    row.p = plan.p;
    row.shots = plan.shots;
    row.seed = plan.seed;
    row.r_nodes = plan.r_nodes;
    row.b_coeffs = plan.b_coeffs;
    row.node_means = res.node_means;
  });
  std::sort(rows.begin(), rows.end(), [](const ExtrapolateRow& a, const ExtrapolateRow& b) {
    return std::tie(a.gamma, a.r_scale) < std::tie(b.gamma, b.r_scale);
  });
  return rows;
}

std::string extrapolate_csv(const std::vector<ExtrapolateRow>& rows) {
  std::ostringstream out;
  out << "r_scale,gamma,raw_error,extrapolated_error,p,shots,seed\n";
  for (const auto& r : rows) {
    out << r.r_scale << ',' << format_real(r.gamma) << ',' << format_real(r.raw_error) << ','
        << format_real(r.extrapolated_error) << ',' << r.p << ',' << r.shots << ',' << r.seed << '\n';
  }
  return out.str();
}

std::vector<GroupFit> extrapolate_fits(const std::vector<ExtrapolateRow>& rows) {
  constexpr double kFloor = 1e-12;
  std::map<double, std::array<std::pair<std::vector<double>, std::vector<double>>, 2>> groups;
  for (const auto& r : rows) {
    auto& g = groups[r.gamma];
    if (r.raw_error > kFloor) {
      g[0].first.push_back(static_cast<double>(r.r_scale));
      g[0].second.push_back(r.raw_error);
    }
    if (r.extrapolated_error > kFloor) {
      g[1].first.push_back(static_cast<double>(r.r_scale));
      g[1].second.push_back(r.extrapolated_error);
    }
  }
  std::vector<GroupFit> fits;
  for (const auto& [gamma, data] : groups) {
    for (int k = 0; k < 2; ++k) {
      GroupFit g;
      g.x = "r_scale";
      g.y = k == 0 ? "raw_error" : "extrapolated_error";
      g.gamma = gamma;
      fits.push_back(make_fit(g, data[static_cast<size_t>(k)].first, data[static_cast<size_t>(k)].second));
    }
  }
  return fits;
}

std::string fits_json(const std::string& experiment, const std::vector<GroupFit>& fits) {
  ordered_json j;
  j["experiment"] = experiment;
  j["fits"] = ordered_json::array();
  for (const auto& g : fits) j["fits"].push_back(fit_to_json(g));
  return j.dump(2) + "\n";
}

namespace {

struct Artifacts {
  std::string csv;
  std::vector<GroupFit> fits;
  std::string report;  // empty when the experiment has no JSON report
};

Artifacts bounds_artifacts(const RunConfig& cfg, int threads) {
  struct Item {
    int n;
    double gamma;
    BoundReport rep;
  };
  std::vector<Item> items;
  for (int n : cfg.model.n_values) {
    for (double g : cfg.model.gammas) items.push_back({n, g, {}});
  }
  for (auto& it : items) {
    BoundReportOptions opts;
    opts.t = cfg.time;
    opts.eps = cfg.bounds.eps;
    opts.q_max = cfg.bounds.q_max;
    opts.q0 = cfg.bounds.q0;
    opts.doubly_grades = {{1, 2}, {2, 1}, {2, 2}};
    opts.commutators.threads = threads;
    it.rep = bound_report(tfim(cfg, it.n, it.gamma), opts);
  }
  Artifacts a;
  std::ostringstream csv;
  csv << "n,gamma,g,k,alpha_comm_3,alpha_lattice_3,c12,c24,r_planned,mu_comm_q0,"
         "alpha_comm_q0_numeric,alpha_comm_q0_tail,alpha_comm_q0_certified\n";
  ordered_json reports = ordered_json::array();
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> by_gamma;
  for (const auto& it : items) {
    const BoundReport& r = it.rep;
    const double a3 = r.alpha_q.count(3) ? r.alpha_q.at(3) : r.alpha3_numeric;
    const double l3 = r.alpha_lattice_q.count(3) ? r.alpha_lattice_q.at(3) : 0.0;
    csv << it.n << ',' << format_real(it.gamma) << ',' << format_real(r.g) << ',' << r.k << ','
        << format_real(a3) << ',' << format_real(l3) << ',' << format_real(r.alpha3_tight_c12) << ','
        << format_real(r.alpha3_tight_c24) << ',' << r.r_planned << ',' << format_real(r.mu_comm_q0)
        << ',' << format_real(r.alpha_comm_q0_numeric) << ',' << format_real(r.alpha_comm_q0_tail)
        << ',' << (r.alpha_comm_q0_certified ? 1 : 0) << '\n';
    by_gamma[it.gamma].first.push_back(it.n);
    by_gamma[it.gamma].second.push_back(a3);
    ordered_json j;
    j["n"] = it.n;
    j["gamma"] = real_json(it.gamma);
    j["g"] = real_json(r.g);
    j["k"] = r.k;
    j["alpha3_numeric"] = real_json(r.alpha3_numeric);
    j["alpha3_tight_c12"] = real_json(r.alpha3_tight_c12);
    j["alpha3_tight_c24"] = real_json(r.alpha3_tight_c24);
    ordered_json aq = ordered_json::object();
    for (const auto& [q, v] : r.alpha_q) aq[std::to_string(q)] = real_json(v);
    j["alpha_q"] = aq;
    ordered_json lq = ordered_json::object();
    for (const auto& [q, v] : r.alpha_lattice_q) lq[std::to_string(q)] = real_json(v);
    j["alpha_lattice_q"] = lq;
    ordered_json dn = ordered_json::array();
    for (const auto& [grades, v] : r.alpha_doubly) dn.push_back({{"grades", grades}, {"value", real_json(v)}});
    j["alpha_doubly"] = dn;
    j["q0"] = cfg.bounds.q0;
    j["alpha_comm_q0_numeric"] = real_json(r.alpha_comm_q0_numeric);
    j["alpha_comm_q0_tail"] = real_json(r.alpha_comm_q0_tail);
    j["alpha_comm_q0_certified"] = r.alpha_comm_q0_certified;
    j["mu_comm_q0"] = real_json(r.mu_comm_q0);
    j["r_planned"] = r.r_planned;
    j["eps"] = real_json(cfg.bounds.eps);
    j["t"] = real_json(cfg.time);
    reports.push_back(j);
  }
  a.csv = csv.str();
  for (const auto& [gamma, data] : by_gamma) {
    GroupFit g;
    g.x = "n";
    g.y = "alpha_comm_3";
    g.gamma = gamma;
    a.fits.push_back(make_fit(g, data.first, data.second));
  }
  a.report = ordered_json{{"experiment", "bounds"}, {"reports", reports}}.dump(2) + "\n";
  return a;
}

Artifacts bch_artifacts(const RunConfig& cfg) {
  Artifacts a;
  std::ostringstream csv;
  csv << "n,gamma,t,distance,bound,certified,holds\n";
  ordered_json reports = ordered_json::array();
  for (int n : cfg.model.n_values) {
    for (double gamma : cfg.model.gammas) {
      const TruncationReport rep =
          verify_bch_truncation(tfim(cfg, n, gamma), cfg.bch.q0, cfg.bch.t_grid, cfg.bch.t_ref);
      std::vector<TruncationPoint> pts = rep.points;
      std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.t < y.t; });
      std::vector<double> ts;
      std::vector<double> ds;
      ordered_json jp = ordered_json::array();
      for (const auto& p : pts) {
        csv << n << ',' << format_real(gamma) << ',' << format_real(p.t) << ',' << format_real(p.distance)
            << ',' << format_real(p.bound) << ',' << (p.certified ? 1 : 0) << ',' << (p.holds ? 1 : 0)
            << '\n';
        ts.push_back(p.t);
        ds.push_back(p.distance);
        jp.push_back({{"t", real_json(p.t)},
                      {"distance", real_json(p.distance)},
                      {"bound", real_json(p.bound)},
                      {"certified", p.certified},
                      {"holds", p.holds}});
      }
      GroupFit g;
      g.x = "t";
      g.y = "distance";
      g.gamma = gamma;
      g.n = n;
      a.fits.push_back(make_fit(g, ts, ds));
      reports.push_back({{"n", n},
                         {"gamma", real_json(gamma)},
                         {"phi3_norm", real_json(rep.phi3_norm)},
                         {"alpha3_over_9", real_json(rep.alpha3_over_9)},
                         {"phi2_relative", real_json(rep.phi2_relative)},
                         {"phi3_converged", rep.phi3_converged},
                         {"truncation_slope", real_json(rep.slope)},
                         {"points", jp}});
    }
  }
  a.csv = csv.str();
  a.report = ordered_json{{"experiment", "verify-bch"}, {"reports", reports}}.dump(2) + "\n";
  return a;
}

std::string extrapolate_report(const std::vector<ExtrapolateRow>& rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json b = ordered_json::array();
    for (double v : r.b_coeffs) b.push_back(real_json(v));
    ordered_json m = ordered_json::array();
    for (double v : r.node_means) m.push_back(real_json(v));
    arr.push_back({{"gamma", real_json(r.gamma)},
                   {"r_scale", r.r_scale},
                   {"r_nodes", r.r_nodes},
                   {"b_coeffs", b},
                   {"node_means", m},
                   {"exact_expectation", real_json(r.exact_expectation)}});
  }
  return ordered_json{{"experiment", "extrapolate"}, {"plans", arr}}.dump(2) + "\n";
}

void write_manifest(const RunConfig& cfg, const RunOptions& options, double wall,
                    const std::string& status, const std::string& reason,
                    const std::vector<std::string>& files) {
  ordered_json m;
  m["experiment"] = to_string(cfg.experiment);
  m["status"] = status;
  if (!reason.empty()) m["reason"] = reason;
  m["config"] = ordered_json::parse(cfg.canonical);
  m["config_hash"] = "fnv1a64:" + hex64(fnv1a64(cfg.canonical));
  m["versions"] = {{"lindblad_trotter", kLibraryVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                 "." + std::to_string(EIGEN_MINOR_VERSION)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                   {"compiler", __VERSION__}};
  m["threads"] = options.threads;
  m["wall_time_seconds"] = wall;
  m["outputs"] = files;
  write_file(cfg.output + ".manifest.json", m.dump(2) + "\n");
}

}  // namespace

RunSummary run(const RunConfig& cfg, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  const int threads = std::max(1, options.threads);
  Artifacts a;
  try {
    switch (cfg.experiment) {
      case Experiment::TrotterErrorScan: {
        const auto rows = run_error_scan(cfg, threads);
        a.csv = scan_csv(rows);
        a.fits = scan_fits(rows);
        break;
      }
      case Experiment::Simulate: {
        a.csv = simulate_csv(run_error_scan(cfg, threads));
        break;
      }
      case Experiment::Extrapolate: {
        const auto rows = run_extrapolation(cfg, threads);
        a.csv = extrapolate_csv(rows);
        a.fits = extrapolate_fits(rows);
        a.report = extrapolate_report(rows);
        break;
      }
      case Experiment::Bounds:
        a = bounds_artifacts(cfg, threads);
        break;
      case Experiment::VerifyBch:
        a = bch_artifacts(cfg);
        break;
    }
  } catch (const InfeasiblePlanError& e) {
    write_manifest(cfg, options, elapsed(), "infeasible", e.what(), {});
    throw;
  } catch (const GuardError& e) {
    write_manifest(cfg, options, elapsed(), "guard", e.what(), {});
    throw;
  }
  RunSummary summary;
  summary.files.push_back(cfg.output + ".csv");
  write_file(summary.files.back(), a.csv);
  summary.files.push_back(cfg.output + ".fits.json");
  write_file(summary.files.back(), fits_json(to_string(cfg.experiment), a.fits));
  if (!a.report.empty()) {
    summary.files.push_back(cfg.output + ".json");
    write_file(summary.files.back(), a.report);
  }
  summary.wall_seconds = elapsed();
  write_manifest(cfg, options, summary.wall_seconds, "ok", "", summary.files);
  summary.files.push_back(cfg.output + ".manifest.json");
  return summary;
}

}  // namespace lindblad
