// Copyright 2026 The awfl Authors.
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

#include "awfl/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <utility>

#include "awfl/error.hpp"

namespace awfl {

namespace {

using nlohmann::json;

class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "$" : path_, "must be a JSON object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    return convert<T>(*v, at(key));
  }

  template <class T>
  std::optional<T> optional(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    return convert<T>(*v, at(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
  }

  template <class T>
  static T convert(const json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
      return v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
      if (std::is_unsigned_v<T> && v.get<long long>() < 0)
        throw ConfigError(path, "expected a non-negative integer");
      return v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(path, "expected a number");
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
      return d;
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(path, "expected a string");
      return v.get<std::string>();
    } else {
      if (!v.is_array()) throw ConfigError(path, "expected a list");
      T out;
      for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(convert<typename T::value_type>(v[i], path + "[" + std::to_string(i) + "]"));
      return out;
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError(field, what);
}

void parse_cell(Fields& f, ExperimentConfig& cfg) {
  cfg.cell.cell_radius_m = f.get("radius_m", cfg.cell.cell_radius_m);
  require(cfg.cell.cell_radius_m > 0.0, f.at("radius_m"), "must be positive");
  cfg.cell.total_bandwidth_hz = f.get("total_bandwidth_hz", cfg.cell.total_bandwidth_hz);
  require(cfg.cell.total_bandwidth_hz > 0.0, f.at("total_bandwidth_hz"), "must be positive");
  cfg.noise_dbm_per_hz = f.get("noise_dbm_per_hz", cfg.noise_dbm_per_hz);
  cfg.cell.noise_density_w_per_hz = dbm_per_hz_to_w_per_hz(cfg.noise_dbm_per_hz);
  if (const auto s = f.optional<double>("model_size_bits")) {
    require(*s >= 1.0, f.at("model_size_bits"), "must be at least 1");
    cfg.cell.model_size_bits = *s;
    cfg.model_size_from_task = false;
  }
  cfg.tx_power_w = f.get("tx_power_w", cfg.tx_power_w);
  require(cfg.tx_power_w > 0.0, f.at("tx_power_w"), "must be positive");
  const std::string fading = f.get<std::string>("fading", "rayleigh");
  if (fading == "rayleigh") cfg.fading.kind = FadingKind::rayleigh;
  else if (fading == "none") cfg.fading.kind = FadingKind::none;
  else throw ConfigError(f.at("fading"), "expected \"rayleigh\" or \"none\"");
  f.finish();
}

void parse_placement(Fields& f, ExperimentConfig& cfg) {
  PlacementConfig& p = cfg.placement;
  const std::string kind = f.get<std::string>("kind", "uniform");
  const double radius = cfg.cell.cell_radius_m;
  if (kind == "uniform") {
    p.kind = PlacementKind::uniform;
  } else if (kind == "scenario1") {
    p.kind = PlacementKind::scenario1;
    p.scenario_inner_m = 100.0;
    p.scenario_outer_m = 200.0;
  } else if (kind == "scenario2") {
    p.kind = PlacementKind::scenario2;
    p.scenario_inner_m = 900.0;
    p.scenario_outer_m = 1000.0;
  } else if (kind == "explicit") {
    p.kind = PlacementKind::explicit_distances;
  } else {
    throw ConfigError(f.at("kind"),
                      "expected \"uniform\", \"scenario1\", \"scenario2\" or \"explicit\"");
  }
  p.min_radius_m = f.get("min_radius_m", p.min_radius_m);
  require(p.min_radius_m > 0.0 && p.min_radius_m < radius, f.at("min_radius_m"),
          "must lie in (0, cell.radius_m)");
  p.scenario_inner_m = f.get("scenario_inner_m", p.scenario_inner_m);
  p.scenario_outer_m = f.get("scenario_outer_m", p.scenario_outer_m);
  p.scenario_clients = f.get("scenario_clients", std::min(5, cfg.clients));
  if (p.kind == PlacementKind::scenario1 || p.kind == PlacementKind::scenario2) {
    require(p.scenario_inner_m > 0.0 && p.scenario_inner_m < p.scenario_outer_m &&
                p.scenario_outer_m <= radius,
            f.at("scenario_outer_m"), "scenario annulus must lie inside the cell");
    require(p.scenario_clients >= 0 && p.scenario_clients <= cfg.clients,
            f.at("scenario_clients"), "must lie in [0, clients]");
  }
  p.seed = f.optional<std::uint64_t>("seed");
  p.distances_km = f.get("distances_km", std::vector<double>{});
  if (p.kind == PlacementKind::explicit_distances) {
    require(static_cast<int>(p.distances_km.size()) == cfg.clients, f.at("distances_km"),
            "needs one distance per client");
    for (double d : p.distances_km)
      require(d > 0.0 && d * 1000.0 <= radius, f.at("distances_km"),
              "distances must lie in (0, cell.radius_m]");
  }
  f.finish();
}

void parse_task(Fields& f, ExperimentConfig& cfg) {
  SyntheticTaskSpec& t = cfg.task;
  t.data.classes = f.get("classes", t.data.classes);
  t.data.dims = f.get("dims", t.data.dims);
  t.data.per_class = f.get("per_class", t.data.per_class);
  t.data.separation = f.get("separation", t.data.separation);
  t.test_fraction = f.get("test_fraction", t.test_fraction);
  t.shards_per_client = f.get("shards_per_client", t.shards_per_client);
  t.hidden = f.get("hidden", t.hidden);
  t.train.steps = f.get("local_steps", t.train.steps);
  t.train.learning_rate = f.get("learning_rate", t.train.learning_rate);
  t.train.batch_size = f.get("batch_size", t.train.batch_size);
  require(t.data.classes >= 2, f.at("classes"), "must be at least 2");
  require(t.data.dims >= 1, f.at("dims"), "must be positive");
  require(t.data.per_class >= 1, f.at("per_class"), "must be positive");
  require(t.data.separation >= 0.0, f.at("separation"), "must be non-negative");
  require(t.test_fraction >= 0.0 && t.test_fraction < 1.0, f.at("test_fraction"),
          "must lie in [0, 1)");
  require(t.shards_per_client >= 1 && t.shards_per_client <= t.data.classes,
          f.at("shards_per_client"), "must lie in [1, classes]");
  require(t.hidden >= 0, f.at("hidden"), "must be non-negative");
  require(t.train.steps >= 0, f.at("local_steps"), "must be non-negative");
  require(t.train.learning_rate >= 0.0, f.at("learning_rate"), "must be non-negative");
  require(t.train.batch_size >= 1, f.at("batch_size"), "must be positive");
  f.finish();
}

void parse_scheme(Fields& f, ExperimentConfig& cfg) {
  const std::string name = f.get<std::string>("name", "proposed");
  if (name == "proposed") cfg.scheme.kind = SchemeKind::proposed;
  else if (name == "random") cfg.scheme.kind = SchemeKind::random;
  else if (name == "greedy") cfg.scheme.kind = SchemeKind::greedy;
  else if (name == "age_based") cfg.scheme.kind = SchemeKind::age_based;
  else
    throw ConfigError(f.at("name"),
                      "expected \"proposed\", \"random\", \"greedy\" or \"age_based\"");
  if (const json* p = f.find("p"); p != nullptr && !(p->is_string() && *p == "auto")) {
    cfg.scheme.p_const = Fields::convert<double>(*p, f.at("p"));
    require(*cfg.scheme.p_const >= 0.0 && *cfg.scheme.p_const <= 1.0, f.at("p"),
            "must lie in [0, 1]");
  }
  if (const json* k = f.find("k_sel"); k != nullptr && !(k->is_string() && *k == "auto")) {
    cfg.scheme.k_sel = Fields::convert<int>(*k, f.at("k_sel"));
    require(*cfg.scheme.k_sel >= 1 && *cfg.scheme.k_sel <= cfg.clients, f.at("k_sel"),
            "must lie in [1, clients]");
  }
  f.finish();
}

void parse_engine(Fields& f, ExperimentConfig& cfg) {
  const std::string divisor = f.get<std::string>("divisor", "clients");
  if (divisor == "clients") cfg.divisor = AggregationDivisor::total_clients;
  else if (divisor == "participants") cfg.divisor = AggregationDivisor::participants;
  else throw ConfigError(f.at("divisor"), "expected \"clients\" or \"participants\"");
  if (const json* cap = f.find("force_cap")) {
    if (cap->is_array()) {
      cfg.force_cap = Fields::convert<std::vector<int>>(*cap, f.at("force_cap"));
      require(static_cast<int>(cfg.force_cap.size()) == cfg.clients, f.at("force_cap"),
              "needs one entry per client");
    } else {
      cfg.force_cap.assign(cfg.clients, Fields::convert<int>(*cap, f.at("force_cap")));
    }
    for (int c : cfg.force_cap) require(c >= 1, f.at("force_cap"), "caps must be at least 1");
  }
  cfg.eval_every = f.get("eval_every", cfg.eval_every);
  require(cfg.eval_every >= 1, f.at("eval_every"), "must be positive");
  f.finish();
}

void parse_solver(Fields& f, SolverSettings& s) {
  s.bcd_tol = f.get("bcd_tol", s.bcd_tol);
  s.dual_tol = f.get("dual_tol", s.dual_tol);
  s.outer_tol = f.get("outer_tol", s.outer_tol);
  s.max_bcd_sweeps = f.get("max_bcd_sweeps", s.max_bcd_sweeps);
  s.max_dual_iterations = f.get("max_dual_iterations", s.max_dual_iterations);
  s.max_outer_iterations = f.get("max_outer_iterations", s.max_outer_iterations);
  s.max_line_search = f.get("max_line_search", s.max_line_search);
  s.epsilon = f.get("epsilon", s.epsilon);
  s.zeta = f.get("zeta", s.zeta);
  s.dual_step_scale = f.get("dual_step_scale", s.dual_step_scale);
  const std::string dir = f.get<std::string>("direction", "newton");
  if (dir == "newton") s.direction = OuterDirection::newton;
  else if (dir == "fixed_point") s.direction = OuterDirection::fixed_point;
  else throw ConfigError(f.at("direction"), "expected \"newton\" or \"fixed_point\"");
  s.warm_start = f.get("warm_start", s.warm_start);
  s.max_warm_start_sweeps = f.get("max_warm_start_sweeps", s.max_warm_start_sweeps);
  s.warm_start_tol = f.get("warm_start_tol", s.warm_start_tol);
  f.finish();
  try {
    s.validate();
  } catch (const std::exception& e) {
    throw ConfigError("solver", e.what());
  }
}

void parse_bounds(Fields& f, ExperimentConfig& cfg) {
  BoundsConfig b;
  b.constants.smoothness = f.get("L", b.constants.smoothness);
  b.constants.g_max = f.get("G_max", b.constants.g_max);
  b.constants.sigma_sq = f.get("sigma_sq", b.constants.sigma_sq);
  b.constants.f_max = f.get("f_max", b.constants.f_max);
  b.constants.eta = f.get("eta", b.constants.eta);
  require(b.constants.smoothness > 0.0, f.at("L"), "must be positive");
  require(b.constants.g_max > 0.0, f.at("G_max"), "must be positive");
  require(b.constants.sigma_sq >= 0.0, f.at("sigma_sq"), "must be non-negative");
  require(b.constants.f_max > 0.0, f.at("f_max"), "must be positive");
  require(b.constants.eta > 0.0, f.at("eta"), "must be positive");
  b.p_uniform = f.optional<double>("p_uniform");
  if (b.p_uniform)
    require(*b.p_uniform > 0.0 && *b.p_uniform <= 1.0, f.at("p_uniform"), "must lie in (0, 1]");
  const auto rows = f.get("p", std::vector<std::vector<double>>{});
  if (!rows.empty()) {
    require(static_cast<int>(rows.size()) == cfg.clients, f.at("p"), "needs one row per client");
    b.p = Grid(rows.size(), rows.front().size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      require(rows[k].size() == rows.front().size() && !rows[k].empty(), f.at("p"),
              "rows must be non-empty and of equal length");
      for (std::size_t t = 0; t < rows[k].size(); ++t) {
        require(rows[k][t] > 0.0 && rows[k][t] <= 1.0, f.at("p"), "entries must lie in (0, 1]");
        b.p(k, t) = rows[k][t];
      }
    }
  }
  require(b.p_uniform.has_value() != (b.p.size() > 0), f.at("p"),
          "give exactly one of p_uniform and p");
  b.deltas = f.get("deltas", std::vector<double>{});
  if (!b.deltas.empty())
    require(static_cast<int>(b.deltas.size()) == cfg.clients, f.at("deltas"),
            "needs one interval per client");
  f.finish();
  cfg.bounds = std::move(b);
}

}  // namespace

std::string scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::proposed: return "proposed";
    case SchemeKind::random: return "random";
    case SchemeKind::greedy: return "greedy";
    case SchemeKind::age_based: return "age_based";
  }
  return "unknown";
}

SeedSet seeds_for(const ExperimentConfig& cfg, std::uint64_t base_seed) {
  if (cfg.named_seeds) return *cfg.named_seeds;
  return SeedSet::from_base(base_seed);
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  Fields root(j, "");
  cfg.clients = root.get("clients", cfg.clients);
  require(cfg.clients >= 1, "clients", "must be at least 1");
  cfg.rounds = root.get("rounds", cfg.rounds);
  require(cfg.rounds >= 0, "rounds", "must be non-negative");
  cfg.rho = root.get("rho", cfg.rho);
  require(cfg.rho >= 1e-4 && cfg.rho <= 1.0 - 1e-4, "rho", "must lie in [1e-4, 1 - 1e-4]");
  cfg.lambda_min = root.get("lambda_min", cfg.lambda_min);
  require(cfg.lambda_min > 0.0 && cfg.lambda_min <= 1.0, "lambda_min", "must lie in (0, 1]");

  if (const json* s = root.find("seeds")) {
    if (s->is_object()) {
      Fields f(*s, "seeds");
      SeedSet named;
      named.selection = f.get("selection", named.selection);
      named.fading = f.get("fading", named.fading);
      named.data = f.get("data", named.data);
      named.init = f.get("init", named.init);
      named.placement = f.get("placement", named.placement);
      f.finish();
      cfg.named_seeds = named;
      cfg.seeds = {0};
    } else {
      cfg.seeds = Fields::convert<std::vector<std::uint64_t>>(*s, "seeds");
      require(!cfg.seeds.empty(), "seeds", "must not be empty");
    }
  }

  if (const json* c = root.find("cell")) {
    Fields f(*c, "cell");
    parse_cell(f, cfg);
  } else {
    cfg.cell.noise_density_w_per_hz = dbm_per_hz_to_w_per_hz(cfg.noise_dbm_per_hz);
  }
  {
    const json empty = json::object();
    const json* p = root.find("placement");
    Fields f(p ? *p : empty, "placement");
    parse_placement(f, cfg);
  }
  if (const json* t = root.find("task")) {
    Fields f(*t, "task");
    parse_task(f, cfg);
  }
  if (cfg.model_size_from_task) {
    const MlpShape shape{cfg.task.data.dims, cfg.task.hidden, cfg.task.data.classes};
    cfg.cell.model_size_bits = 32.0 * static_cast<double>(shape.parameter_count());
  }
  if (const json* s = root.find("scheme")) {
    Fields f(*s, "scheme");
    parse_scheme(f, cfg);
  }
  if (const json* e = root.find("engine")) {
    Fields f(*e, "engine");
    parse_engine(f, cfg);
  }
  if (const json* s = root.find("solver")) {
    Fields f(*s, "solver");
    parse_solver(f, cfg.solver);
  }
  if (const json* s = root.find("solve")) {
    Fields f(*s, "solve");
    const std::string mode = f.get<std::string>("mode", "offline");
    if (mode == "online") cfg.solve_online = true;
    else if (mode != "offline") throw ConfigError("solve.mode", "expected \"offline\" or \"online\"");
    const auto rows = f.get("gains", std::vector<std::vector<double>>{});
    if (!rows.empty()) {
      require(static_cast<int>(rows.size()) == cfg.clients, "solve.gains",
              "needs one row per client");
      cfg.solve_gains = Grid(rows.size(), rows.front().size());
      for (std::size_t k = 0; k < rows.size(); ++k) {
        require(rows[k].size() == rows.front().size() && !rows[k].empty(), "solve.gains",
                "rows must be non-empty and of equal length");
        for (std::size_t t = 0; t < rows[k].size(); ++t) {
          require(rows[k][t] > 0.0, "solve.gains", "gains must be positive");
          cfg.solve_gains(k, t) = rows[k][t];
        }
      }
    }
    f.finish();
  }
  if (const json* s = root.find("sweep")) {
    Fields f(*s, "sweep");
    cfg.sweep_rho = f.get("rho", cfg.sweep_rho);
    for (double r : cfg.sweep_rho)
      require(r >= 1e-4 && r <= 1.0 - 1e-4, "sweep.rho", "values must lie in [1e-4, 1 - 1e-4]");
    f.finish();
  }
  if (const json* b = root.find("bounds")) {
    Fields f(*b, "bounds");
    parse_bounds(f, cfg);
  }
  root.finish();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["clients"] = cfg.clients;
  j["rounds"] = cfg.rounds;
  j["rho"] = cfg.rho;
  j["lambda_min"] = cfg.lambda_min;
  if (cfg.named_seeds) {
    const SeedSet& s = *cfg.named_seeds;
    j["seeds"] = {{"selection", s.selection}, {"fading", s.fading}, {"data", s.data},
                  {"init", s.init}, {"placement", s.placement}};
  } else {
    j["seeds"] = cfg.seeds;
  }
  j["cell"] = {{"radius_m", cfg.cell.cell_radius_m},
               {"total_bandwidth_hz", cfg.cell.total_bandwidth_hz},
               {"noise_dbm_per_hz", cfg.noise_dbm_per_hz},
               {"model_size_bits", cfg.cell.model_size_bits},
               {"tx_power_w", cfg.tx_power_w},
               {"fading", cfg.fading.kind == FadingKind::rayleigh ? "rayleigh" : "none"}};
  const PlacementConfig& p = cfg.placement;
  const char* kinds[] = {"uniform", "scenario1", "scenario2", "explicit"};
  j["placement"] = {{"kind", kinds[static_cast<int>(p.kind)]},
                    {"min_radius_m", p.min_radius_m}};
  if (p.kind == PlacementKind::scenario1 || p.kind == PlacementKind::scenario2) {
    j["placement"]["scenario_inner_m"] = p.scenario_inner_m;
    j["placement"]["scenario_outer_m"] = p.scenario_outer_m;
    j["placement"]["scenario_clients"] = p.scenario_clients;
  }
  if (p.kind == PlacementKind::explicit_distances) j["placement"]["distances_km"] = p.distances_km;
  if (p.seed) j["placement"]["seed"] = *p.seed;
  const SyntheticTaskSpec& t = cfg.task;
  j["task"] = {{"classes", t.data.classes},       {"dims", t.data.dims},
               {"per_class", t.data.per_class},   {"separation", t.data.separation},
               {"test_fraction", t.test_fraction}, {"shards_per_client", t.shards_per_client},
               {"hidden", t.hidden},              {"local_steps", t.train.steps},
               {"learning_rate", t.train.learning_rate}, {"batch_size", t.train.batch_size}};
  j["scheme"] = {{"name", scheme_name(cfg.scheme.kind)}};
  j["scheme"]["p"] = cfg.scheme.p_const ? json(*cfg.scheme.p_const) : json("auto");
  j["scheme"]["k_sel"] = cfg.scheme.k_sel ? json(*cfg.scheme.k_sel) : json("auto");
  j["engine"] = {
      {"divisor", cfg.divisor == AggregationDivisor::total_clients ? "clients" : "participants"},
      {"force_cap", cfg.force_cap.empty() ? json(nullptr) : json(cfg.force_cap)},
      {"eval_every", cfg.eval_every}};
  const SolverSettings& s = cfg.solver;
  j["solver"] = {{"bcd_tol", s.bcd_tol},
                 {"dual_tol", s.dual_tol},
                 {"outer_tol", s.outer_tol},
                 {"max_bcd_sweeps", s.max_bcd_sweeps},
                 {"max_dual_iterations", s.max_dual_iterations},
                 {"max_outer_iterations", s.max_outer_iterations},
                 {"max_line_search", s.max_line_search},
                 {"epsilon", s.epsilon},
                 {"zeta", s.zeta},
                 {"dual_step_scale", s.dual_step_scale},
                 {"direction", s.direction == OuterDirection::newton ? "newton" : "fixed_point"},
                 {"warm_start", s.warm_start},
                 {"max_warm_start_sweeps", s.max_warm_start_sweeps},
                 {"warm_start_tol", s.warm_start_tol}};
  j["solve"] = {{"mode", cfg.solve_online ? "online" : "offline"}};
  if (cfg.solve_gains.size() > 0) {
    json rows = json::array();
    for (std::size_t k = 0; k < cfg.solve_gains.rows(); ++k) {
      const auto r = cfg.solve_gains.row(k);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["solve"]["gains"] = rows;
  }
  if (!cfg.sweep_rho.empty()) j["sweep"] = {{"rho", cfg.sweep_rho}};
  if (cfg.bounds) {
    const BoundsConfig& b = *cfg.bounds;
    j["bounds"] = {{"L", b.constants.smoothness}, {"G_max", b.constants.g_max},
                   {"sigma_sq", b.constants.sigma_sq}, {"f_max", b.constants.f_max},
                   {"eta", b.constants.eta}};
    if (b.p_uniform) j["bounds"]["p_uniform"] = *b.p_uniform;
    if (b.p.size() > 0) {
      json rows = json::array();
      for (std::size_t k = 0; k < b.p.rows(); ++k) {
        const auto r = b.p.row(k);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
      }
      j["bounds"]["p"] = rows;
    }
    if (!b.deltas.empty()) j["bounds"]["deltas"] = b.deltas;
  }
  return j;
}

}  // namespace awfl
