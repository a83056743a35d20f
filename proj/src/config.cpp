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

#include "lindblad/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lindblad/errors.hpp"

namespace lindblad {

using nlohmann::json;

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::TrotterErrorScan: return "trotter-error-scan";
    case Experiment::Extrapolate: return "extrapolate";
    case Experiment::Bounds: return "bounds";
    case Experiment::VerifyBch: return "verify-bch";
    case Experiment::Simulate: return "simulate";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::TrotterErrorScan, Experiment::Extrapolate, Experiment::Bounds,
                       Experiment::VerifyBch, Experiment::Simulate}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("experiment: unknown value '" + name + "'");
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError(field + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(keys.begin(), keys.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double as_real(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

long as_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) fail(field, "expected an integer");
  return v.get<long>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  return v.get<std::string>();
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

// Accepts either `single` (a scalar) or `list` (an array), never both.
template <typename T, typename Conv>
std::vector<T> scalar_or_list(const json& obj, const std::string& path, const char* single,
                              const char* list, Conv conv, bool required) {
  const json* s = find(obj, single);
  const json* l = find(obj, list);
  if (s && l) fail(join(path, single), std::string("give either '") + single + "' or '" + list + "', not both");
  std::vector<T> out;
  if (s) out.push_back(conv(*s, join(path, single)));
  if (l) {
    const std::string field = join(path, list);
    if (!l->is_array() || l->empty()) fail(field, "expected a nonempty array");
    for (size_t i = 0; i < l->size(); ++i) {
      out.push_back(conv((*l)[i], field + "[" + std::to_string(i) + "]"));
    }
  }
  if (out.empty() && required) {
    fail(join(path, single), std::string("missing; give '") + single + "' or '" + list + "'");
  }
  return out;
}

template <typename T>
void require_unique(std::vector<T>& v, const std::string& field) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) fail(field, "duplicate values");
}

void parse_model(const json& m, RunConfig& cfg, bool allow_large_n) {
  reject_unknown(m, "model", {"n", "n_range", "j_coupling", "h_field", "gamma", "gamma_list"});
  const json* n = find(m, "n");
  const json* range = find(m, "n_range");
  if (n && range) fail("model.n", "give either 'n' or 'n_range', not both");
  if (n) {
    const long v = as_integer(*n, "model.n");
    if (v < 2 || v > kLargeMaxSites) fail("model.n", "must lie in [2, 10]");
    cfg.model.n_values = {static_cast<int>(v)};
  } else if (range) {
    if (!range->is_array() || range->size() != 2) fail("model.n_range", "expected [lo, hi]");
    const long lo = as_integer((*range)[0], "model.n_range[0]");
    const long hi = as_integer((*range)[1], "model.n_range[1]");
    if (lo > hi) fail("model.n_range", "lo must not exceed hi");
    if (lo < 2 || hi > kLargeMaxSites) fail("model.n_range", "must lie in [2, 10]");
    for (long v = lo; v <= hi; ++v) cfg.model.n_values.push_back(static_cast<int>(v));
  } else {
    fail("model.n", "missing; give 'n' or 'n_range'");
  }
  const int cap = allow_large_n ? kLargeMaxSites : kDefaultMaxSites;
  const std::string nfield = n ? "model.n" : "model.n_range";
  for (int v : cfg.model.n_values) {
    if (v < 2 || v > kLargeMaxSites) fail(nfield, "must lie in [2, 10]");
    if (v > cap) fail(nfield, "n = " + std::to_string(v) + " exceeds 8; pass --allow-large-n");
  }
  if (*std::max_element(cfg.model.n_values.begin(), cfg.model.n_values.end()) > kDefaultMaxSites) {
    std::cerr << "warning: n > 8 needs about 16 MB per density matrix and long runtimes\n";
  }
  if (const json* v = find(m, "j_coupling")) cfg.model.j_coupling = as_real(*v, "model.j_coupling");
  if (const json* v = find(m, "h_field")) cfg.model.h_field = as_real(*v, "model.h_field");
  cfg.model.gammas = scalar_or_list<double>(m, "model", "gamma", "gamma_list", as_real, true);
  for (double g : cfg.model.gammas) {
    if (g < 0.0) fail(find(m, "gamma") ? "model.gamma" : "model.gamma_list", "must be >= 0");
  }
  require_unique(cfg.model.gammas, "model.gamma_list");
}

void parse_trotter(const json& t, RunConfig& cfg, bool r_required) {
  reject_unknown(t, "trotter", {"order", "r", "r_list"});
  if (const json* v = find(t, "order")) {
    const long order = as_integer(*v, "trotter.order");
    if (order != 1 && order != 2) fail("trotter.order", "must be 1 or 2");
    cfg.trotter.order = static_cast<int>(order);
  }
  cfg.trotter.r_values = scalar_or_list<long>(t, "trotter", "r", "r_list", as_integer, r_required);
  for (long r : cfg.trotter.r_values) {
    if (r < 1) fail(find(t, "r") ? "trotter.r" : "trotter.r_list", "must be >= 1");
  }
  require_unique(cfg.trotter.r_values, "trotter.r_list");
}

void parse_extrapolation(const json& e, RunConfig& cfg) {
  reject_unknown(e, "extrapolation", {"p", "node_ratios", "eps", "shots", "seed", "q0"});
  ExtrapolationConfig x;
  const int chosen = (find(e, "p") ? 1 : 0) + (find(e, "node_ratios") ? 1 : 0) + (find(e, "eps") ? 1 : 0);
  if (chosen != 1) fail("extrapolation", "give exactly one of 'p', 'node_ratios', 'eps'");
  if (const json* v = find(e, "p")) {
    const long p = as_integer(*v, "extrapolation.p");
    if (p < 1 || p > 12) fail("extrapolation.p", "must lie in [1, 12]");
    x.p = static_cast<int>(p);
  }
  if (const json* v = find(e, "node_ratios")) {
    if (!v->is_array() || v->empty()) fail("extrapolation.node_ratios", "expected a nonempty array");
    for (size_t i = 0; i < v->size(); ++i) {
      const std::string f = "extrapolation.node_ratios[" + std::to_string(i) + "]";
      const long r = as_integer((*v)[i], f);
      if (r < 1) fail(f, "must be >= 1");
      x.node_ratios.push_back(r);
    }
    std::vector<long> sorted = x.node_ratios;
    require_unique(sorted, "extrapolation.node_ratios");
  }
  if (const json* v = find(e, "eps")) {
    x.eps = as_real(*v, "extrapolation.eps");
    if (!(*x.eps > 0.0 && *x.eps <= 1.0)) fail("extrapolation.eps", "must lie in (0, 1]");
  }
  if (const json* v = find(e, "shots")) {
    x.shots = as_integer(*v, "extrapolation.shots");
    if (x.shots < 0) fail("extrapolation.shots", "must be >= 0");
  }
  if (const json* v = find(e, "seed")) {
    if (!v->is_number_unsigned()) fail("extrapolation.seed", "expected a nonnegative integer");
    x.seed = v->get<std::uint64_t>();
  }
  if (const json* v = find(e, "q0")) {
    const long q0 = as_integer(*v, "extrapolation.q0");
    if (q0 < 3 || q0 > 4) fail("extrapolation.q0", "must be 3 or 4");
    x.q0 = static_cast<int>(q0);
  }
  cfg.extrapolation = x;
}

void parse_bounds(const json& b, RunConfig& cfg) {
  reject_unknown(b, "bounds", {"eps", "q_max", "q0"});
  if (const json* v = find(b, "eps")) {
    cfg.bounds.eps = as_real(*v, "bounds.eps");
    if (!(cfg.bounds.eps > 0.0)) fail("bounds.eps", "must be > 0");
  }
  if (const json* v = find(b, "q_max")) {
    const long q = as_integer(*v, "bounds.q_max");
    if (q < 2 || q > 5) fail("bounds.q_max", "must lie in [2, 5]");
    cfg.bounds.q_max = static_cast<int>(q);
  }
  if (const json* v = find(b, "q0")) {
    const long q0 = as_integer(*v, "bounds.q0");
    if (q0 < 3 || q0 > 4) fail("bounds.q0", "must be 3 or 4");
    cfg.bounds.q0 = static_cast<int>(q0);
  }
}

void parse_bch(const json& b, RunConfig& cfg) {
  reject_unknown(b, "bch", {"t_grid", "t_ref"});
  if (const json* v = find(b, "t_grid")) {
    if (!v->is_array() || v->size() < 3) fail("bch.t_grid", "expected an array of >= 3 times");
    cfg.bch.t_grid.clear();
    for (size_t i = 0; i < v->size(); ++i) {
      const std::string f = "bch.t_grid[" + std::to_string(i) + "]";
      const double t = as_real((*v)[i], f);
      if (!(t > 0.0)) fail(f, "must be > 0");
      cfg.bch.t_grid.push_back(t);
    }
  }
  if (const json* v = find(b, "t_ref")) {
    cfg.bch.t_ref = as_real(*v, "bch.t_ref");
    if (!(cfg.bch.t_ref > 0.0)) fail("bch.t_ref", "must be > 0");
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const ConfigOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<root>: invalid JSON: ") + e.what());
  }
  reject_unknown(doc, "", {"experiment", "model", "time", "trotter", "initial_state", "observable",
                           "extrapolation", "bounds", "bch", "output"});
  RunConfig cfg;
  const json* exp = find(doc, "experiment");
  if (exp) cfg.experiment = parse_experiment(as_string(*exp, "experiment"));
  if (overrides.experiment) {
    if (exp && cfg.experiment != *overrides.experiment) {
      fail("experiment", "config says '" + to_string(cfg.experiment) + "' but the subcommand is '" +
                             to_string(*overrides.experiment) + "'");
    }
    cfg.experiment = *overrides.experiment;
  } else if (!exp) {
    fail("experiment", "missing");
  }
  doc["experiment"] = to_string(cfg.experiment);

  const json* model = find(doc, "model");
  if (!model) fail("model", "missing");
  parse_model(*model, cfg, overrides.allow_large_n);

  if (const json* v = find(doc, "time")) {
    cfg.time = as_real(*v, "time");
    if (cfg.time < 0.0) fail("time", "must be >= 0");
  }

  const json* ex = find(doc, "extrapolation");
  if (ex) parse_extrapolation(*ex, cfg);
  if (cfg.experiment == Experiment::Extrapolate && !cfg.extrapolation) fail("extrapolation", "missing");
  if (overrides.seed) {
    if (!cfg.extrapolation) cfg.extrapolation = ExtrapolationConfig{};
    cfg.extrapolation->seed = *overrides.seed;
    doc["extrapolation"]["seed"] = *overrides.seed;
  }

  const bool needs_r = cfg.experiment == Experiment::TrotterErrorScan ||
                       cfg.experiment == Experiment::Simulate ||
                       (cfg.experiment == Experiment::Extrapolate && !cfg.extrapolation->eps);
  const json* trotter = find(doc, "trotter");
  if (trotter) {
    parse_trotter(*trotter, cfg, needs_r);
  } else if (needs_r) {
    fail("trotter", "missing");
  }

  if (const json* v = find(doc, "initial_state")) {
    const auto conv = [](const json& s, const std::string& field) {
      try {
        return parse_initial_state(as_string(s, field));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(field + ": " + e.what());
      }
    };
    cfg.initial_states.clear();
    if (v->is_array()) {
      if (v->empty()) fail("initial_state", "expected a nonempty array");
      for (size_t i = 0; i < v->size(); ++i) {
        cfg.initial_states.push_back(conv((*v)[i], "initial_state[" + std::to_string(i) + "]"));
      }
    } else {
      cfg.initial_states.push_back(conv(*v, "initial_state"));
    }
    std::vector<InitialState> sorted = cfg.initial_states;
    require_unique(sorted, "initial_state");
  }

  if (const json* v = find(doc, "observable")) {
    cfg.observable = as_string(*v, "observable");
    if (cfg.observable != "total_magnetization") fail("observable", "only 'total_magnetization' is supported");
  }
  if (const json* v = find(doc, "bounds")) parse_bounds(*v, cfg);
  if (const json* v = find(doc, "bch")) parse_bch(*v, cfg);
  if (const json* v = find(doc, "output")) {
    cfg.output = as_string(*v, "output");
    if (cfg.output.empty()) fail("output", "must not be empty");
  }
  if (overrides.output) {
    cfg.output = *overrides.output;
    doc["output"] = cfg.output;
  }
  cfg.canonical = doc.dump();
  return cfg;
}

RunConfig load_config(const std::string& path, const ConfigOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

}  // namespace lindblad
