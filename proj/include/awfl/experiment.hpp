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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "awfl/config.hpp"
#include "awfl/engine.hpp"
#include "awfl/schemes.hpp"
#include "awfl/tasks.hpp"

namespace awfl {

// Distances are area-uniform over the annulus [min_radius, radius]; in the
// two scenarios the first `scenario_clients` clients are area-uniform over
// the scenario annulus instead.
std::vector<ClientProfile> place_clients(const ExperimentConfig& cfg, std::uint64_t seed);

Environment make_environment(const ExperimentConfig& cfg, const SeedSet& seeds);
MlpTask make_task(const ExperimentConfig& cfg, const SeedSet& seeds);

// Participation of the proposed policy on the same channel realizations:
// the mean over rounds of sum_k p_k, and the benchmark parameters matched to
// it.
struct Calibration {
  double mean_sum_p = 0.0;
  int k_sel = 1;
  double p_const = 0.0;
};

Calibration calibrate(const ExperimentConfig& cfg, const Environment& env,
                      std::uint64_t fading_seed);

std::unique_ptr<Policy> make_policy(const ExperimentConfig& cfg,
                                    const std::optional<Calibration>& calibration);

struct RunResult {
  std::string run_id;
  SchemeKind scheme = SchemeKind::proposed;
  double rho = 0.0;
  std::uint64_t seed = 0;
  SeedSet seeds;
  std::optional<Calibration> calibration;
  std::vector<ClientProfile> profiles;
  RunTrace trace;
};

std::string run_id(SchemeKind scheme, double rho, std::uint64_t seed);

RunResult run_simulation(const ExperimentConfig& cfg, std::uint64_t seed,
                         Exec exec = Exec::serial);

// One run per (rho, seed), rho-major. Runs are spread over the OpenMP
// threads when exec is parallel; the output order does not depend on it.
std::vector<RunResult> run_batch(const ExperimentConfig& cfg, const std::vector<double>& rhos,
                                 const std::vector<std::uint64_t>& seeds, Exec exec);

}  // namespace awfl
