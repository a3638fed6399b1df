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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "awfl/learn.hpp"
#include "awfl/solver.hpp"
#include "awfl/wireless.hpp"

namespace {

using namespace awfl;

Exec exec_arg(const benchmark::State& state) {
  return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

const Dataset& bench_data() {
  static const Dataset ds = generate_synthetic({10, 20, 20000, 1.0}, 3);
  return ds;
}

void BM_LossAndGradient(benchmark::State& state) {
  const Dataset& ds = bench_data();
  const MlpModel model = init_model({20, 64, 10}, 5);
  std::vector<double> grad(model.params.size());
  for (auto _ : state)
    benchmark::DoNotOptimize(loss_and_gradient(model, ds, {}, grad, exec_arg(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(ds.size()));
}

void BM_Evaluate(benchmark::State& state) {
  const Dataset& ds = bench_data();
  const MlpModel model = init_model({20, 64, 10}, 5);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(model, ds, exec_arg(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(ds.size()));
}

ProblemInstance bench_instance(int k_count, int t_count) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> distance(0.05, 1.0);
  ProblemInstance inst;
  inst.rho = 0.05;
  inst.lambda_min = 0.05;
  inst.cell.noise_density_w_per_hz = dbm_per_hz_to_w_per_hz(-174.0);
  inst.gains = Grid(k_count, t_count);
  for (int k = 0; k < k_count; ++k) {
    const ClientProfile c{k + 1, distance(gen), 0.2};
    inst.profiles.push_back(c);
    for (int t = 0; t < t_count; ++t)
      inst.gains(k, t) = channel_gain(c, t, {FadingKind::rayleigh}, 7).gain;
  }
  return inst;
}

void BM_SolveJoint(benchmark::State& state) {
  const ProblemInstance inst = bench_instance(10, static_cast<int>(state.range(1)));
  SolverSettings settings;
  settings.exec = exec_arg(state);
  for (auto _ : state) benchmark::DoNotOptimize(solve_joint(inst, settings).objective);
}

}  // namespace

BENCHMARK(BM_LossAndGradient)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Evaluate)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveJoint)
    ->ArgNames({"parallel", "rounds"})
    ->ArgsProduct({{0, 1}, {20, 100}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
