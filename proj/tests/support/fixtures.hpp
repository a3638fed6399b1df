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

#pragma once

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "awfl/solver.hpp"
#include "awfl/wireless.hpp"

namespace awfl::testing {

inline nlohmann::json load_fixture(const std::string& name) {
  std::ifstream in(std::string(AWFL_FIXTURE_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  return nlohmann::json::parse(in);
}

inline CellConfig reference_cell() {
  CellConfig cell;
  cell.noise_density_w_per_hz = dbm_per_hz_to_w_per_hz(-174.0);
  return cell;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// K clients uniform in distance over [0.05, 1] km with Rayleigh fading.
inline ProblemInstance random_instance(int k_count, int t_count, double rho, double lambda,
                                       std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> distance(0.05, 1.0);
  ProblemInstance inst;
  inst.rho = rho;
  inst.lambda_min = lambda;
  inst.cell = reference_cell();
  inst.gains = Grid(k_count, t_count);
  for (int k = 0; k < k_count; ++k) {
    const ClientProfile c{k + 1, distance(gen), 0.2};
    inst.profiles.push_back(c);
    for (int t = 0; t < t_count; ++t)
      inst.gains(k, t) = channel_gain(c, t, {FadingKind::rayleigh}, seed).gain;
  }
  return inst;
}

inline ProblemInstance fixture_instance(const nlohmann::json& row, int t_count = 1) {
  ProblemInstance inst;
  inst.rho = row["rho"];
  inst.lambda_min = row.value("lambda_min", 0.05);
  inst.cell = reference_cell();
  const auto& gains = row["gains"];
  inst.gains = Grid(gains.size(), t_count);
  for (std::size_t k = 0; k < gains.size(); ++k) {
    inst.profiles.push_back({static_cast<int>(k) + 1, 0.5, row["tx_power_w"][k].get<double>()});
    if (gains[k].is_array()) {
      for (int t = 0; t < t_count; ++t) inst.gains(k, t) = gains[k][t];
    } else {
      inst.gains(k, 0) = gains[k];
    }
  }
  return inst;
}

}  // namespace awfl::testing
