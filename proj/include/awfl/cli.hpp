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

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "awfl/experiment.hpp"

namespace awfl {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitSimulation = 4,
};

inline constexpr const char* kResultsHeader =
    "run_id,scheme,rho,seed,round,n_participants,expected_energy_j,realized_energy_j,"
    "cum_energy_j,train_loss,test_acc,grad_norm_sq";
inline constexpr const char* kSweepHeader =
    "rho,seed,scheme,total_energy_j,final_test_acc,final_train_loss,final_grad_norm_sq,"
    "mean_participants";
inline constexpr const char* kClientDiagnosticsHeader =
    "run_id,client,distance_km,energy_j,uploads,max_interval,mean_p";
inline constexpr const char* kSolverDiagnosticsHeader =
    "iteration,residual_sq,objective,step,line_search_trials";
inline constexpr const char* kResultsSchema = "awfl-results/1";

void write_results_csv(std::ostream& os, const nlohmann::json& provenance,
                       const std::vector<RunResult>& runs);
void write_client_diagnostics_csv(std::ostream& os, const nlohmann::json& provenance,
                                  const std::vector<RunResult>& runs);
// Per-(rho, seed) rows followed by one "mean" row per rho.
void write_sweep_csv(std::ostream& os, const nlohmann::json& provenance,
                     const std::vector<RunResult>& runs);
nlohmann::json run_summary(const RunResult& run);
nlohmann::json bounds_report(const ExperimentConfig& cfg);

// Entry point of the `awfl` executable. Diagnostics go to `err`, the
// bounds report to `out`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace awfl
