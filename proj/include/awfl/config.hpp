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

// Experiment configuration. JSON with explicit units in field names; every
// unknown key is rejected with a ConfigError naming its path.
//
// {
//   "clients": 10, "rounds": 100, "rho": 0.05, "lambda_min": 0.05,
//   "seeds": [1, 2, 3],
//   "cell": {"radius_m": 1000, "total_bandwidth_hz": 5e6,
//            "noise_dbm_per_hz": -174, "model_size_bits": null,
//            "tx_power_w": 0.2, "fading": "rayleigh"},
//   "placement": {"kind": "uniform", "min_radius_m": 50},
//   "task": {"classes": 10, "dims": 20, "per_class": 500, "separation": 3,
//            "test_fraction": 0.2, "shards_per_client": 5, "hidden": 32,
//            "local_steps": 5, "learning_rate": 0.01, "batch_size": 10},
//   "scheme": {"name": "proposed", "p": "auto", "k_sel": "auto"},
//   "engine": {"divisor": "clients", "force_cap": null, "eval_every": 1},
//   "solver": {"outer_tol": 1e-8, ...},
//   "solve": {"mode": "offline", "gains": null},
//   "sweep": {"rho": [0.01, 0.05]},
//   "bounds": {"L": 1, "G_max": 1, "sigma_sq": 0, "f_max": 1, "eta": 0.01,
//              "p_uniform": 0.5}
// }

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "awfl/engine.hpp"
#include "awfl/metrics.hpp"
#include "awfl/solver.hpp"
#include "awfl/tasks.hpp"
#include "awfl/wireless.hpp"

namespace awfl {

enum class PlacementKind { uniform, scenario1, scenario2, explicit_distances };

struct PlacementConfig {
  PlacementKind kind = PlacementKind::uniform;
  double min_radius_m = 50.0;
  // Annulus of the first clients in the two scenarios.
  double scenario_inner_m = 0.0;
  double scenario_outer_m = 0.0;
  int scenario_clients = 5;
  std::vector<double> distances_km;
  // Pins the placement across run seeds; empty: drawn from each run's seeds.
  std::optional<std::uint64_t> seed;
};

enum class SchemeKind { proposed, random, greedy, age_based };

struct SchemeConfig {
  SchemeKind kind = SchemeKind::proposed;
  std::optional<double> p_const;  // random; empty: calibrated
  std::optional<int> k_sel;       // greedy, age_based; empty: calibrated
};

struct BoundsConfig {
  BoundConstants constants;
  std::optional<double> p_uniform;
  Grid p;                      // K x T when given explicitly
  std::vector<double> deltas;  // Lemma-1 intervals; empty: the approximations
};

struct ExperimentConfig {
  int clients = 10;
  int rounds = 100;
  double rho = 0.05;
  double lambda_min = 0.05;
  std::vector<std::uint64_t> seeds{1};
  std::optional<SeedSet> named_seeds;  // overrides the derivation from seeds[0]

  CellConfig cell;
  double noise_dbm_per_hz = -174.0;
  bool model_size_from_task = true;
  double tx_power_w = 0.2;
  FadingConfig fading{FadingKind::rayleigh};
  PlacementConfig placement;

  SyntheticTaskSpec task;
  SchemeConfig scheme;
  SolverSettings solver;
  AggregationDivisor divisor = AggregationDivisor::total_clients;
  std::vector<int> force_cap;
  int eval_every = 1;

  bool solve_online = false;
  Grid solve_gains;  // K x T channel gains replacing the placement model in `solve`
  std::vector<double> sweep_rho;
  std::optional<BoundsConfig> bounds;
};

ExperimentConfig parse_config(const nlohmann::json& j);
// Throws ConfigError("<path>", ...) for unreadable or non-JSON files.
ExperimentConfig load_config(const std::string& path);

// Fully resolved configuration, including every default.
nlohmann::json to_json(const ExperimentConfig& cfg);

std::string scheme_name(SchemeKind kind);
SeedSet seeds_for(const ExperimentConfig& cfg, std::uint64_t base_seed);

}  // namespace awfl
