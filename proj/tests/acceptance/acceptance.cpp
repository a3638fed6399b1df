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

// Acceptance checks. Prints one PASS/FAIL line per criterion; `--only N`
// runs a single criterion. Exit status is non-zero if any selected check
// fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "awfl/config.hpp"
#include "awfl/engine.hpp"
#include "awfl/experiment.hpp"
#include "awfl/lambert_w.hpp"
#include "awfl/learn.hpp"
#include "awfl/metrics.hpp"
#include "awfl/solver.hpp"
#include "awfl/tasks.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "policies.hpp"

namespace {

using namespace awfl;
using awfl::testing::rel_err;
using nlohmann::json;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: no limit
  std::function<Verdict()> run;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Verdict lambert_identity() {
  std::mt19937_64 gen(1);
  const double branch = -1.0 / std::numbers::e;
  std::uniform_real_distribution<double> u(std::log(1e-12), std::log(1e6 - branch));
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = branch + std::exp(u(gen));
    const double y = lambert_w0(x);
    worst = std::max(worst, std::abs(y * std::exp(y) - x) / std::max(1.0, std::abs(x)));
  }
  return {worst <= 1e-12, "max scaled error " + fmt("%.3g", worst) + " on 10^4 points"};
}

Verdict bandwidth_closed_form() {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int underflow = 0;
  for (int i = 0; i < 1000; ++i) {
    CellConfig cell;
    cell.total_bandwidth_hz = std::pow(10.0, 6.0 + 1.3 * unit(gen));
    cell.noise_density_w_per_hz = std::pow(10.0, -21.0 + unit(gen));
    const double alpha = std::pow(10.0, -8.0 + 2.0 * unit(gen));
    const double beta = std::pow(10.0, -2.0 + 2.0 * unit(gen));
    const double h = std::pow(10.0, -14.0 + 4.0 * unit(gen));
    const double p_tx = 0.05 + 0.5 * unit(gen);
    const double b = p_tx * h / (cell.total_bandwidth_hz * cell.noise_density_w_per_hz);
    const double marginal =
        alpha * beta * cell.total_bandwidth_hz * (std::log1p(b) - b / (1.0 + b));
    const double v = marginal * std::pow(10.0, -1.0 + 3.0 * unit(gen));
    const double got = optimal_w_closed_form(alpha, beta, v, p_tx, h, cell);
    const double want = awfl::testing::bisect_share(alpha * beta, v, p_tx, h, cell);
    if (want < 1e-290) {
      ++underflow;
      if (got > 1e-290) worst = INFINITY;
      continue;
    }
    worst = std::max(worst, rel_err(got, want));
  }
  return {worst <= 1e-8, "max relative error " + fmt("%.3g", worst) + " on 10^3 tuples (" +
                             std::to_string(underflow) + " with a share below 1e-290)"};
}

bool plan_feasible(const JointSolution& s, const ProblemInstance& inst) {
  try {
    check_feasible(s.p, s.w, inst);
  } catch (const InfeasiblePlanError&) {
    return false;
  }
  return true;
}

Verdict termination() {
  const int ks[] = {2, 5, 10}, ts[] = {1, 5, 20};
  const double rhos[] = {0.05, 0.5};
  int ok = 0, count = 0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int k = ks[i % 3], t = ts[(i / 3) % 3];
    const double rho = rhos[(i / 9) % 2];
    const ProblemInstance inst = awfl::testing::random_instance(k, t, rho, 0.05, 500 + i);
    ++count;
    try {
      const JointSolution s = solve_joint(inst, SolverSettings{});
      const double r = residuals(s.p, s.w, s.aux, inst).squared_norm();
      worst = std::max(worst, r);
      if (r <= 1e-8 && plan_feasible(s, inst)) ++ok;
    } catch (const SolverError& e) {
      worst = std::max(worst, e.residual());
    }
  }
  return {ok == count, std::to_string(ok) + "/" + std::to_string(count) +
                           " converged and feasible, max residual " + fmt("%.3g", worst)};
}

Verdict grid_oracle() {
  const json cases = awfl::testing::load_fixture("solver_oracles.json")["grid_k2_t1_acceptance"];
  int ok = 0;
  double worst = -1.0;
  for (const json& row : cases) {
    const ProblemInstance inst = awfl::testing::fixture_instance(row);
    const JointSolution s = solve_joint(inst, SolverSettings{});
    const double ratio = s.objective / row["grid_min"].get<double>();
    worst = std::max(worst, ratio);
    if (ratio <= 1.0 + 1e-3) ++ok;
  }
  return {ok == static_cast<int>(cases.size()),
          std::to_string(ok) + "/" + std::to_string(cases.size()) +
              " within grid minimum x (1 + 1e-3), max ratio " + fmt("%.6f", worst)};
}

Verdict bcd_kkt() {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long checked = 0, bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k_count = 1 + trial % 3, t_count = 1 + trial % 10;
    const double rho = 0.02 + 0.9 * unit(gen);
    const ProblemInstance inst =
        awfl::testing::random_instance(k_count, t_count, rho, 0.05, 900 + trial);
    Grid alpha(k_count, t_count);
    for (int k = 0; k < k_count; ++k)
      for (int t = 0; t < t_count; ++t) {
        const double w = 0.05 + 0.9 * unit(gen);
        alpha(k, t) = 1.0 / transmission_rate(w, inst.cell, inst.profiles[k].tx_power_w,
                                              inst.gains(k, t));
      }
    const SelectionPlan p = solve_p_bcd(alpha, std::vector<double>(k_count, 1.0), inst,
                                        SolverSettings{});
    for (int k = 0; k < k_count; ++k)
      for (int t = 0; t < t_count; ++t) {
        const double scale = alpha(k, t) * awfl::testing::energy_coeff(inst, k);
        const double g =
            awfl::testing::selection_gradient(inst, k, p.p.row(k), alpha(k, t)) / scale;
        const double x = p.p(k, t);
        ++checked;
        if (!(std::abs(g) <= 1e-6 || (x == 1.0 && g < 0.0) || (x == inst.lambda_min && g > 0.0)))
          ++bad;
      }
  }
  return {bad == 0, std::to_string(checked - bad) + "/" + std::to_string(checked) +
                        " coordinates stationary or clamped outward"};
}

Verdict online_offline() {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const ProblemInstance inst =
        awfl::testing::random_instance(2 + i % 8, 1, 0.05 + 0.09 * i, 0.05, 700 + i);
    OnlineInstance online;
    online.rho = inst.rho;
    online.lambda_min = inst.lambda_min;
    online.horizon_rounds = 1;
    online.cell = inst.cell;
    online.profiles = inst.profiles;
    online.gains = inst.gains.column(0);
    const JointSolution off = solve_joint(inst, SolverSettings{});
    const OnlineSolution on = solve_online(online, SolverSettings{});
    for (int k = 0; k < inst.clients(); ++k) {
      worst = std::max(worst, std::abs(off.p.p(k, 0) - on.p[k]));
      worst = std::max(worst, std::abs(off.w.w(k, 0) - on.w[k]));
    }
  }
  return {worst <= 1e-6, "max |difference| in p and w " + fmt("%.3g", worst)};
}

Verdict gradients() {
  long checked = 0, bad = 0;
  double worst = 0.0, worst_abs = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int hidden = trial % 4 == 0 ? 0 : 3 + trial % 5;
    const MlpShape shape{3 + trial % 4, hidden, 2 + trial % 4};
    const Dataset ds = generate_synthetic({shape.classes, shape.dims, 5, 1.0}, 40 + trial);
    MlpModel m = init_model(shape, 60 + trial);
    std::vector<double> grad(m.params.size());
    loss_and_gradient(m, ds, {}, grad);
    for (std::size_t j = 0; j < m.params.size(); ++j) {
      const double saved = m.params[j];
      m.params[j] = saved + 1e-5;
      const double up = loss_and_gradient(m, ds, {}, {});
      m.params[j] = saved - 1e-5;
      const double down = loss_and_gradient(m, ds, {}, {});
      m.params[j] = saved;
      const double fd = (up - down) / 2e-5;
      const double err =
          std::abs(grad[j] - fd) / std::max({std::abs(grad[j]), std::abs(fd), 1e-8});
      ++checked;
      worst = std::max(worst, err);
      worst_abs = std::max(worst_abs, std::abs(grad[j] - fd));
      if (err > 1e-4 && std::abs(grad[j] - fd) > 1e-9) ++bad;
    }
  }
  return {bad == 0, std::to_string(checked - bad) + "/" + std::to_string(checked) +
                        " parameters, max relative error " + fmt("%.3g", worst) +
                        ", max absolute error " + fmt("%.3g", worst_abs)};
}

Verdict protocol_oracle() {
  const std::vector<std::vector<double>> centers{{2.0, -1.0, 0.25, 3.0}, {-1.5, 0.5, 4.0, -2.0}};
  const std::vector<std::vector<int>> script{{1, 1}, {0, 1}, {0, 0}, {1, 0}, {1, 0},
                                             {0, 1}, {1, 1}, {0, 0}, {0, 1}, {1, 0}};
  const QuadraticTask task(centers, 0.05, 5);
  awfl::testing::ScriptedPolicy policy(script);
  EngineSettings s;
  s.rounds = 10;
  Simulation sim(task, policy,
                 awfl::testing::static_environment(2, awfl::testing::reference_cell()), s);
  const auto expected = awfl::testing::unrolled_protocol(centers, 0.05, 5, script, 10);
  int matched = 0;
  for (int t = 0; t < 10; ++t) {
    sim.run_round();
    if (sim.server().global_model == expected[t]) ++matched;
  }
  return {matched == 10, std::to_string(matched) + "/10 rounds bitwise equal"};
}

Verdict energy_consistency() {
  const QuadraticTask task(std::vector<std::vector<double>>(4, {0.0}), 0.1, 1);
  awfl::testing::FixedPolicy policy({0.2, 0.45, 0.7, 0.95}, {0.1, 0.2, 0.3, 0.4});
  EngineSettings s;
  s.rounds = 10000;
  s.eval_every = s.rounds;
  const RunTrace trace = run_training(
      task, policy, awfl::testing::static_environment(4, awfl::testing::reference_cell()), s);
  double expected = 0.0;
  for (const RoundMetrics& m : trace.rounds) expected += m.expected_energy_j;
  const double ratio = trace.total_energy_j / expected;
  return {std::abs(ratio - 1.0) <= 0.02,
          "realized / expected = " + fmt("%.4f", ratio) + " over 10^4 rounds"};
}

Verdict interval_approximation() {
  std::string detail;
  bool pass = true;
  for (double p : {0.2, 0.5, 0.9}) {
    const GapEstimate e = monte_carlo_gap(std::vector<double>(1000, p), 10000, 10, Exec::parallel);
    const double ratio = e.mean_gap * p;
    pass = pass && std::abs(ratio - 1.0) <= 0.05;
    detail += fmt("p=%.1f: ", p) + fmt("%.4f", e.mean_gap) + " vs " + fmt("%.4f; ", 1.0 / p);
  }
  return {pass, detail};
}

Verdict fairness() {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.05, 20.0);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> d(2 + trial % 15);
    double h = 0.0;
    for (double& v : d) {
      v = u(gen);
      h += 1.0 / v;
    }
    const double target = 0.5 * static_cast<double>(d.size());
    for (double& v : d) v *= h / target;
    const FairnessGap g = fairness_gap(d);
    if (g.sum_sq < g.uniform_sum_sq * (1.0 - 1e-12)) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " violations in 10^3 vectors"};
}

json trend_config() {
  return {{"clients", 10},
          {"rounds", 100},
          {"seeds", {1, 2, 3, 4, 5}},
          {"cell", {{"model_size_bits", 6.37e6}}},
          {"task", {{"separation", 1.0}, {"shards_per_client", 5}}}};
}

struct SchemeTotals {
  std::vector<double> energy, expected_energy, loss, accuracy;
  std::vector<std::vector<double>> client_energy;
};

SchemeTotals run_scheme(json j) {
  const ExperimentConfig cfg = parse_config(j);
  SchemeTotals out;
  const auto runs = run_batch(cfg, {cfg.rho}, cfg.seeds, Exec::parallel);
  for (const RunResult& r : runs) {
    double expected = 0.0;
    for (const RoundMetrics& m : r.trace.rounds) expected += m.expected_energy_j;
    out.energy.push_back(r.trace.total_energy_j);
    out.expected_energy.push_back(expected);
    out.loss.push_back(r.trace.final.train_loss);
    out.accuracy.push_back(r.trace.final.test_accuracy);
    out.client_energy.push_back(r.trace.client_energy_j);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

Verdict rho_sweep() {
  const ExperimentConfig cfg = parse_config(trend_config());
  const std::vector<double> rhos{0.01, 0.03, 0.05, 0.1};
  const auto runs = run_batch(cfg, rhos, cfg.seeds, Exec::parallel);
  std::vector<double> energy(rhos.size()), accuracy(rhos.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    energy[i / cfg.seeds.size()] += runs[i].trace.total_energy_j / cfg.seeds.size();
    accuracy[i / cfg.seeds.size()] += runs[i].trace.final.test_accuracy / cfg.seeds.size();
  }
  bool monotone = true;
  std::string detail = "mean energy";
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (i > 0 && energy[i] < energy[i - 1]) monotone = false;
    detail += fmt(" %.2f", energy[i]);
  }
  detail += " J; accuracy " + fmt("%.4f", accuracy.front()) + " -> " + fmt("%.4f", accuracy.back());
  return {monotone && accuracy.back() >= accuracy.front(), detail};
}

double spread_non_extreme(const SchemeTotals& s, int extreme) {
  const std::size_t k_count = s.client_energy.front().size();
  std::vector<double> per_client(k_count, 0.0);
  for (const auto& run : s.client_energy)
    for (std::size_t k = 0; k < k_count; ++k) per_client[k] += run[k];
  const auto first = per_client.begin() + extreme;
  const double lo = *std::min_element(first, per_client.end());
  const double hi = *std::max_element(first, per_client.end());
  return lo > 0.0 ? hi / lo : INFINITY;
}

Verdict scheme_direction() {
  json base = trend_config();
  base["rho"] = 0.2;
  json rnd = base;
  rnd["scheme"] = {{"name", "random"}};
  const SchemeTotals p = run_scheme(base), r = run_scheme(rnd);
  int expected_wins = 0, realized_wins = 0;
  for (std::size_t i = 0; i < p.energy.size(); ++i) {
    if (p.expected_energy[i] <= r.expected_energy[i]) ++expected_wins;
    if (p.energy[i] <= r.energy[i]) ++realized_wins;
  }

  json scenario = base;
  scenario["placement"] = {{"kind", "scenario2"}, {"seed", 1}};
  json greedy = scenario;
  greedy["scheme"] = {{"name", "greedy"}};
  const double sp = spread_non_extreme(run_scheme(scenario), 5);
  const double sg = spread_non_extreme(run_scheme(greedy), 5);

  const int n = static_cast<int>(p.energy.size());
  std::string detail = "expected energy lower on " + std::to_string(expected_wins) + "/" +
                       std::to_string(n) + " seeds (realized " + std::to_string(realized_wins) +
                       "/" + std::to_string(n) + "); scenario-2 spread " + fmt("%.2f", sp) +
                       " vs greedy " + fmt("%.2f", sg);
  return {expected_wins == n && sp < sg, detail};
}

Verdict participation_trend() {
  json high = trend_config();
  high["scheme"] = {{"name", "random"}, {"p", 0.9}};
  json low = high;
  low["scheme"]["p"] = 0.1;
  const double lh = mean(run_scheme(high).loss), ll = mean(run_scheme(low).loss);
  return {lh <= ll, "mean final training loss p=0.9: " + fmt("%.4f", lh) + ", p=0.1: " +
                        fmt("%.4f", ll)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);

  const std::vector<Criterion> criteria{
      {1, "Lambert-W identity", 1.0, lambert_identity},
      {2, "closed-form bandwidth vs bisection", 5.0, bandwidth_closed_form},
      {3, "outer loop termination", 60.0, termination},
      {4, "global optimality on the K=2 grid", 120.0, grid_oracle},
      {5, "selection BCD KKT", 10.0, bcd_kkt},
      {6, "online/offline consistency", 0.0, online_offline},
      {7, "MLP gradient correctness", 5.0, gradients},
      {8, "protocol oracle", 0.0, protocol_oracle},
      {9, "energy consistency", 0.0, energy_consistency},
      {10, "interval approximation", 0.0, interval_approximation},
      {11, "fairness property", 0.0, fairness},
      {12, "rho sweep trend", 600.0, rho_sweep},
      {13, "scheme energy and fairness direction", 0.0, scheme_direction},
      {14, "participation trend", 0.0, participation_trend},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      v.pass = false;
      v.detail += fmt("; over the %.0f s limit", c.time_limit_s);
    }
    if (!v.pass) ++failed;
    std::printf("[%s] %2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
