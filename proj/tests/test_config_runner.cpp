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
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "lindblad/config.hpp"
#include "lindblad/errors.hpp"
#include "lindblad/fit.hpp"
#include "lindblad/runner.hpp"
#include "oracles.hpp"

using namespace lindblad;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lindblad_trotter_tests_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const char* kScan = R"({
  "experiment": "trotter-error-scan",
  "model": {"n_range": [2, 4], "gamma_list": [0.1, 1.0]},
  "time": 0.2,
  "trotter": {"order": 2, "r_list": [4, 8, 16]},
  "initial_state": "all_ones",
  "observable": "total_magnetization",
  "output": "scan"
})";

}  // namespace

TEST_CASE("config: a full document parses with defaults") {
  const RunConfig c = parse_config(kScan);
  CHECK(c.experiment == Experiment::TrotterErrorScan);
  CHECK(c.model.n_values == std::vector<int>{2, 3, 4});
  CHECK(c.model.j_coupling == 1.0);
  CHECK(c.model.h_field == 0.5);
  CHECK(c.model.gammas == std::vector<double>{0.1, 1.0});
  CHECK(c.trotter.r_values == std::vector<long>{4, 8, 16});
  CHECK(c.initial_states == std::vector<InitialState>{InitialState::AllOnes});
  CHECK(c.output == "scan");
  CHECK_FALSE(c.extrapolation.has_value());
  CHECK(parse_config(kScan).canonical == c.canonical);
  for (auto e : {Experiment::TrotterErrorScan, Experiment::Extrapolate, Experiment::Bounds, Experiment::VerifyBch,
                 Experiment::Simulate})
    CHECK(parse_experiment(to_string(e)) == e);
}

TEST_CASE("config: rejections name the field") {
  auto fails_on = [](const std::string& text, const std::string& field, ConfigOverrides ov = {}) {
    try {
      parse_config(text, ov);
    } catch (const ConfigError& e) {
      const std::string msg = e.what();
      INFO(msg);
      CHECK(msg.find(field) != std::string::npos);
      return;
    }
    FAIL("no ConfigError for " << field);
  };
  json base = json::parse(kScan);
  auto with = [&](const std::function<void(json&)>& edit) {
    json j = base;
    edit(j);
    return j.dump();
  };
  fails_on(with([](json& j) { j["colour"] = 1; }), "colour");
  fails_on(with([](json& j) { j["model"]["spin"] = 1; }), "model");
  fails_on(with([](json& j) { j["model"]["n_range"] = {1, 4}; }), "model.n_range");
  fails_on(with([](json& j) { j["model"]["n_range"] = {4, 11}; }), "model.n_range");
  fails_on(with([](json& j) { j["model"]["n_range"] = {4, 9}; }), "model");
  fails_on(with([](json& j) { j["model"]["n"] = 3; }), "model.n");
  fails_on(with([](json& j) { j["model"]["gamma_list"] = {0.1, -1.0}; }), "model.gamma");
  fails_on(with([](json& j) { j["trotter"]["order"] = 3; }), "trotter.order");
  fails_on(with([](json& j) { j["trotter"]["r_list"] = {4, 0}; }), "trotter.r");
  fails_on(with([](json& j) { j["initial_state"] = "ghz"; }), "initial_state");
  fails_on(with([](json& j) { j["observable"] = "energy"; }), "observable");
  fails_on(with([](json& j) { j["time"] = "soon"; }), "time");
  fails_on(with([](json& j) { j["extrapolation"] = {{"p", 3}, {"node_ratios", {1, 2, 4}}}; }), "extrapolation");
  fails_on(with([](json& j) { j["extrapolation"] = {{"eps", 2.0}}; }), "extrapolation.eps");
  fails_on(with([](json& j) { j.erase("experiment"); }), "experiment");
  ConfigOverrides ov;
  ov.experiment = Experiment::Bounds;
  fails_on(kScan, "experiment", ov);
  fails_on("{not json", "");
}

TEST_CASE("config: overrides and the large-N flag") {
  json j = json::parse(kScan);
  j["model"]["n_range"] = {4, 9};
  ConfigOverrides ov;
  ov.allow_large_n = true;
  ov.output = "elsewhere";
  ov.seed = 77;
  const RunConfig c = parse_config(j.dump(), ov);
  CHECK(c.model.n_values.back() == 9);
  CHECK(c.output == "elsewhere");
  CHECK(c.canonical.find("elsewhere") != std::string::npos);
  json no_exp = json::parse(kScan);
  no_exp.erase("experiment");
  ConfigOverrides sub;
  sub.experiment = Experiment::TrotterErrorScan;
  CHECK(parse_config(no_exp.dump(), sub).experiment == Experiment::TrotterErrorScan);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("fit_loglog: exact power laws and errors") {
  const std::vector<double> xs{1, 2, 3, 5, 8};
  std::vector<double> sq, cst;
  for (double x : xs) {
    sq.push_back(x * x);
    cst.push_back(4.2);
  }
  const FitResult a = fit_loglog(xs, sq);
  CHECK(std::abs(a.slope - 2.0) < 1e-12);
  CHECK(std::abs(a.intercept) < 1e-12);
  CHECK(a.r_squared == doctest::Approx(1.0));
  CHECK(a.points == 5);
  CHECK(std::abs(fit_loglog(xs, cst).slope) < 1e-12);
  try {
    fit_loglog({1, 2, 3}, {1, 0, 3});
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("row 1") != std::string::npos);
  }
  CHECK_THROWS_AS(fit_loglog({1, 2}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(fit_loglog({1, 2, 3}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(fit_linear({1, 1, 1}, {1, 2, 3}), std::invalid_argument);
  const FitResult noisy = fit_loglog({1, 2, 3, 4}, {1, 3, 2, 5});
  CHECK(noisy.r_squared >= 0.0);
  CHECK(noisy.r_squared <= 1.0);
}

TEST_CASE("runner: scan rows are sorted and thread independent") {
  const RunConfig c = parse_config(kScan);
  const auto a = run_error_scan(c, 1);
  const auto b = run_error_scan(c, 3);
  REQUIRE(a.size() == 18);
  CHECK(scan_csv(a) == scan_csv(b));
  for (size_t i = 1; i < a.size(); ++i) {
    const auto key = [](const ScanRow& r) { return std::make_tuple(r.n, r.gamma, r.r); };
    CHECK(key(a[i - 1]) < key(a[i]));
  }
  CHECK(scan_csv(a).rfind("n,gamma,r,t,order,initial_state,trace_distance_error\n", 0) == 0);
}

TEST_CASE("runner: rows are re-derivable by targeted simulate runs") {
  const RunConfig c = parse_config(kScan);
  const auto rows = run_error_scan(c, 2);
  for (size_t i : {size_t{0}, size_t{7}, size_t{17}}) {
    const ScanRow& row = rows[i];
    json j = json::parse(kScan);
    j["experiment"] = "simulate";
    j["model"].erase("n_range");
    j["model"]["n"] = row.n;
    j["model"].erase("gamma_list");
    j["model"]["gamma"] = row.gamma;
    j["trotter"].erase("r_list");
    j["trotter"]["r"] = row.r;
    const auto sim = run_error_scan(parse_config(j.dump()), 1);
    REQUIRE(sim.size() == 1);
    CHECK(std::abs(sim[0].trace_distance_error - row.trace_distance_error) <= 1e-12);
  }
}

TEST_CASE("runner: simulate at t = 0") {
  json j = json::parse(kScan);
  j["experiment"] = "simulate";
  j["time"] = 0.0;
  j["model"] = {{"n", 3}, {"gamma", 0.1}};
  j["trotter"] = {{"order", 2}, {"r", 4}};
  const auto rows = run_error_scan(parse_config(j.dump()), 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].trace_distance_error == 0.0);
  CHECK(rows[0].expectation == doctest::Approx(-3.0));
  CHECK(rows[0].exact_expectation == doctest::Approx(-3.0));
  CHECK(simulate_csv(rows).rfind("n,gamma,r,t,order,initial_state,trace_distance_error,expectation,exact_expectation\n",
                                 0) == 0);
}

TEST_CASE("runner: files, byte-identical reruns and fits.json schema") {
  const auto dir = scratch_dir("run");
  RunConfig c = parse_config(kScan, {std::nullopt, (dir / "a" / "scan").string(), std::nullopt, false});
  const RunSummary s1 = run(c, {1});
  CHECK(s1.files.size() == 3);
  const std::string csv1 = slurp((dir / "a" / "scan.csv").string());
  run(c, {2});
  CHECK(slurp((dir / "a" / "scan.csv").string()) == csv1);
  const json fits = json::parse(slurp((dir / "a" / "scan.fits.json").string()));
  CHECK(fits["experiment"] == "trotter-error-scan");
  REQUIRE(fits["fits"].size() == 6);
  // Slopes recomputed from the CSV agree with fits.json.
  const auto table = parse_csv(csv1);
  for (const auto& f : fits["fits"]) {
    CHECK(f.contains("slope"));
    CHECK(f.contains("intercept"));
    CHECK(f.contains("r_squared"));
    CHECK(f["points"] == 3);
    std::vector<double> xs, ys;
    for (size_t i = 1; i < table.size(); ++i) {
      if (std::stod(table[i][1]) == f["gamma"].get<double>() && std::stol(table[i][2]) == f["r"].get<long>()) {
        xs.push_back(std::stod(table[i][0]));
        ys.push_back(std::stod(table[i][6]));
      }
    }
    CHECK(std::abs(oracle::least_squares_slope(xs, ys) - f["slope"].get<double>()) <= 1e-9);
  }
  const json manifest = json::parse(slurp((dir / "a" / "scan.manifest.json").string()));
  CHECK(manifest["status"] == "ok");
  CHECK(manifest["config_hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK(manifest["versions"].contains("eigen"));
  CHECK(manifest["outputs"].size() == 2);
}

TEST_CASE("runner: extrapolation CSV and fits") {
  json j = {{"experiment", "extrapolate"},
            {"model", {{"n", 3}, {"gamma_list", {0.1, 1.0}}}},
            {"time", 0.2},
            {"trotter", {{"order", 2}, {"r_list", {1, 2, 3}}}},
            {"initial_state", "all_ones"},
            {"extrapolation", {{"node_ratios", {1, 2, 4}}, {"seed", 5}}}};
  const auto rows = run_extrapolation(parse_config(j.dump()), 2);
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.p == 3);
    CHECK(r.r_nodes == std::vector<long>{1, 2, 4});
    CHECK(r.extrapolated_error <= r.raw_error);
  }
  CHECK(extrapolate_csv(rows).rfind("r_scale,gamma,raw_error,extrapolated_error,p,shots,seed\n", 0) == 0);
  const auto fits = extrapolate_fits(rows);
  CHECK(fits.size() == 4);
  CHECK(json::parse(fits_json("extrapolate", fits))["fits"].size() == 4);
}
