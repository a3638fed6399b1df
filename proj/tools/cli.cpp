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

#include "awfl/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "awfl/error.hpp"
#include "awfl/metrics.hpp"
#include "awfl/solver.hpp"

namespace awfl {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kBandwidthNote =
    "benchmark schemes split the band equally: random among all K clients, greedy and "
    "age_based among the round's selected clients";

std::string num(double x) { return fmt::format("{}", x); }

json seeds_json(const SeedSet& s) {
  return {{"selection", s.selection}, {"fading", s.fading}, {"data", s.data},
          {"init", s.init},           {"placement", s.placement}};
}

void write_provenance(std::ostream& os, const json& provenance) {
  os << "# schema: " << kResultsSchema << "\n";
  for (auto it = provenance.begin(); it != provenance.end(); ++it)
    os << "# " << it.key() << ": " << it.value().dump() << "\n";
}

json provenance_for(const ExperimentConfig& cfg, const std::vector<RunResult>& runs) {
  json seeds = json::object();
  for (const RunResult& r : runs) seeds[r.run_id] = seeds_json(r.seeds);
  return {{"config", to_json(cfg)}, {"seeds", seeds}, {"bandwidth_note", kBandwidthNote}};
}

void write_grid_csv(const fs::path& path, const json& provenance, const Grid& g) {
  std::ofstream os(path);
  write_provenance(os, provenance);
  os << "client";
  for (std::size_t t = 0; t < g.cols(); ++t) os << ",t" << t;
  os << "\n";
  for (std::size_t k = 0; k < g.rows(); ++k) {
    os << k + 1;
    for (double v : g.row(k)) os << "," << num(v);
    os << "\n";
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  os << j.dump(2) << "\n";
}

struct Failure {
  int code;
  json body;
};

Failure describe(const std::exception& e, int fallback_code) {
  if (const auto* c = dynamic_cast<const ConfigError*>(&e))
    return {kExitConfig, {{"error", "config"}, {"field", c->field()}, {"message", c->what()}}};
  if (dynamic_cast<const BoundValidityError*>(&e))
    return {kExitConfig, {{"error", "bound_validity"}, {"message", e.what()}}};
  if (const auto* s = dynamic_cast<const SolverError*>(&e))
    return {kExitSolver,
            {{"error", "solver"}, {"stage", s->stage()}, {"residual", s->residual()},
             {"message", s->what()}}};
  return {fallback_code,
          {{"error", fallback_code == kExitSimulation ? "simulation" : "solver"},
           {"message", e.what()}}};
}

struct Options {
  std::string config;
  std::string out;
  std::vector<std::uint64_t> seeds;
  std::vector<double> rho;
  int parallel = 1;
};

fs::path prepare_out(const Options& o) {
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("--out", "cannot create output directory " + dir.string());
  return dir;
}

ExperimentConfig load(const Options& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (!o.seeds.empty()) {
    cfg.seeds = o.seeds;
    cfg.named_seeds.reset();
  }
  if (o.parallel < 1) throw ConfigError("--parallel", "must be at least 1");
  omp_set_num_threads(o.parallel);
  return cfg;
}

int cmd_solve(const Options& o, std::ostream& err) {
  const ExperimentConfig cfg = load(o);
  const fs::path dir = prepare_out(o);
  const SeedSet seeds = seeds_for(cfg, cfg.seeds.front());
  const Environment env = make_environment(cfg, seeds);
  const bool given = cfg.solve_gains.size() > 0;
  const int rounds = given ? static_cast<int>(cfg.solve_gains.cols()) : std::max(cfg.rounds, 1);
  auto gain = [&](int k, int t) {
    return given ? cfg.solve_gains(k, t)
                 : channel_gain(env.profiles[k], t, env.fading, seeds.fading).gain;
  };
  SolverSettings settings = cfg.solver;
  settings.exec = o.parallel > 1 ? Exec::parallel : Exec::serial;

  json summary = {{"schema", kResultsSchema}, {"config", to_json(cfg)},
                  {"seeds", seeds_json(seeds)}};
  const json provenance = {{"config", to_json(cfg)}, {"seeds", seeds_json(seeds)}};
  Grid p, w;
  std::vector<OuterRecord> records;
  try {
    if (cfg.solve_online) {
      OnlineInstance inst;
      inst.rho = cfg.rho;
      inst.lambda_min = cfg.lambda_min;
      inst.horizon_rounds = rounds;
      inst.cell = env.cell;
      inst.profiles = env.profiles;
      for (int k = 0; k < cfg.clients; ++k) inst.gains.push_back(gain(k, 0));
      const OnlineSolution sol = solve_online(inst, settings);
      p = Grid(cfg.clients, 1);
      w = Grid(cfg.clients, 1);
      p.set_column(0, sol.p);
      w.set_column(0, sol.w);
      records = sol.diagnostics;
      summary["mode"] = "online";
      summary["objective"] = sol.objective;
      summary["residual_sq"] = sol.residual_sq;
    } else {
      ProblemInstance inst;
      inst.rho = cfg.rho;
      inst.lambda_min = cfg.lambda_min;
      inst.cell = env.cell;
      inst.profiles = env.profiles;
      inst.gains = Grid(cfg.clients, rounds);
      for (int k = 0; k < cfg.clients; ++k)
        for (int t = 0; t < rounds; ++t)
          inst.gains(k, t) = gain(k, t);
      const JointSolution sol = solve_joint(inst, settings);
      check_feasible(sol.p, sol.w, inst);
      p = sol.p.p;
      w = sol.w.w;
      records = sol.diagnostics;
      summary["mode"] = "offline";
      summary["objective"] = sol.objective;
      summary["residual_sq"] = sol.residual_sq;
      summary["objective_monotone"] = sol.objective_monotone;
    }
  } catch (const JointSolveError& e) {
    const Failure f = describe(e, kExitSolver);
    json body = f.body;
    body["config"] = to_json(cfg);
    write_json(dir / "error.json", body);
    err << body.dump() << "\n";
    return f.code;
  }
  summary["converged"] = true;
  summary["outer_iterations"] = records.empty() ? 0 : records.back().iteration;
  std::vector<double> sum_p(p.rows());
  for (std::size_t k = 0; k < p.rows(); ++k)
    for (double v : p.row(k)) sum_p[k] += v;
  summary["sum_p"] = sum_p;
  write_grid_csv(dir / "p.csv", provenance, p);
  write_grid_csv(dir / "w.csv", provenance, w);
  {
    std::ofstream os(dir / "diagnostics.csv");
    write_provenance(os, provenance);
    os << kSolverDiagnosticsHeader << "\n";
    for (const OuterRecord& r : records)
      os << r.iteration << "," << num(r.residual_sq) << "," << num(r.objective) << ","
         << num(r.step) << "," << r.line_search_trials << "\n";
  }
  write_json(dir / "summary.json", summary);
  return kExitOk;
}

void write_run_outputs(const fs::path& dir, const ExperimentConfig& cfg,
                       const std::vector<RunResult>& runs) {
  const json provenance = provenance_for(cfg, runs);
  {
    std::ofstream os(dir / "results.csv");
    write_results_csv(os, provenance, runs);
  }
  {
    std::ofstream os(dir / "diagnostics.csv");
    write_client_diagnostics_csv(os, provenance, runs);
  }
  json summary = provenance;
  summary["schema"] = kResultsSchema;
  summary["runs"] = json::array();
  for (const RunResult& r : runs) summary["runs"].push_back(run_summary(r));
  write_json(dir / "summary.json", summary);
}

int cmd_simulate(const Options& o) {
  const ExperimentConfig cfg = load(o);
  const fs::path dir = prepare_out(o);
  const Exec exec = o.parallel > 1 ? Exec::parallel : Exec::serial;
  std::vector<RunResult> runs;
  if (cfg.seeds.size() == 1)
    runs.push_back(run_simulation(cfg, cfg.seeds.front(), exec));
  else
    runs = run_batch(cfg, {cfg.rho}, cfg.seeds, exec);
  write_run_outputs(dir, cfg, runs);
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  ExperimentConfig cfg = load(o);
  const std::vector<double> rhos = o.rho.empty() ? cfg.sweep_rho : o.rho;
  if (rhos.empty()) throw ConfigError("--rho", "sweep needs at least one rho value");
  for (double r : rhos)
    if (!(r >= 1e-4 && r <= 1.0 - 1e-4))
      throw ConfigError("--rho", "values must lie in [1e-4, 1 - 1e-4]");
  cfg.sweep_rho = rhos;
  const fs::path dir = prepare_out(o);
  const std::vector<RunResult> runs =
      run_batch(cfg, rhos, cfg.seeds, o.parallel > 1 ? Exec::parallel : Exec::serial);
  write_run_outputs(dir, cfg, runs);
  std::ofstream os(dir / "sweep.csv");
  write_sweep_csv(os, provenance_for(cfg, runs), runs);
  return kExitOk;
}

int cmd_bounds(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = load(o);
  const json report = bounds_report(cfg);
  if (!o.out.empty()) write_json(prepare_out(o) / "bounds.json", report);
  out << report.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

void write_results_csv(std::ostream& os, const json& provenance,
                       const std::vector<RunResult>& runs) {
  write_provenance(os, provenance);
  os << kResultsHeader << "\n";
  for (const RunResult& r : runs)
    for (const RoundMetrics& m : r.trace.rounds) {
      os << r.run_id << "," << scheme_name(r.scheme) << "," << num(r.rho) << "," << r.seed << ","
         << m.round << "," << m.participants.size() << "," << num(m.expected_energy_j) << ","
         << num(m.realized_energy_j) << "," << num(m.cum_energy_j) << ",";
      if (m.evaluated)
        os << num(m.train_loss) << "," << num(m.test_accuracy) << "," << num(m.grad_norm_sq);
      else
        os << ",,";
      os << "\n";
    }
}

void write_client_diagnostics_csv(std::ostream& os, const json& provenance,
                                  const std::vector<RunResult>& runs) {
  write_provenance(os, provenance);
  os << kClientDiagnosticsHeader << "\n";
  for (const RunResult& r : runs)
    for (std::size_t k = 0; k < r.profiles.size(); ++k)
      os << r.run_id << "," << r.profiles[k].id << "," << num(r.profiles[k].distance_km) << ","
         << num(r.trace.client_energy_j[k]) << "," << r.trace.client_uploads[k] << ","
         << r.trace.client_max_interval[k] << "," << num(r.trace.client_mean_p[k]) << "\n";
}

namespace {

double mean_participants(const RunResult& r) {
  if (r.trace.rounds.empty()) return 0.0;
  double n = 0.0;
  for (const RoundMetrics& m : r.trace.rounds) n += static_cast<double>(m.participants.size());
  return n / static_cast<double>(r.trace.rounds.size());
}

}  // namespace

void write_sweep_csv(std::ostream& os, const json& provenance,
                     const std::vector<RunResult>& runs) {
  write_provenance(os, provenance);
  os << kSweepHeader << "\n";
  std::vector<double> order;
  std::map<double, std::vector<const RunResult*>> by_rho;
  for (const RunResult& r : runs) {
    if (!by_rho.count(r.rho)) order.push_back(r.rho);
    by_rho[r.rho].push_back(&r);
  }
  for (const RunResult& r : runs)
    os << num(r.rho) << "," << r.seed << "," << scheme_name(r.scheme) << ","
       << num(r.trace.total_energy_j) << "," << num(r.trace.final.test_accuracy) << ","
       << num(r.trace.final.train_loss) << "," << num(r.trace.final.grad_norm_sq) << ","
       << num(mean_participants(r)) << "\n";
  for (double rho : order) {
    const auto& group = by_rho[rho];
    double e = 0.0, acc = 0.0, loss = 0.0, g = 0.0, part = 0.0;
    for (const RunResult* r : group) {
      e += r->trace.total_energy_j;
      acc += r->trace.final.test_accuracy;
      loss += r->trace.final.train_loss;
      g += r->trace.final.grad_norm_sq;
      part += mean_participants(*r);
    }
    const double n = static_cast<double>(group.size());
    os << num(rho) << ",mean," << scheme_name(group.front()->scheme) << "," << num(e / n) << ","
       << num(acc / n) << "," << num(loss / n) << "," << num(g / n) << "," << num(part / n)
       << "\n";
  }
}

json run_summary(const RunResult& r) {
  json j = {{"run_id", r.run_id},
            {"scheme", scheme_name(r.scheme)},
            {"rho", r.rho},
            {"seed", r.seed},
            {"seeds", seeds_json(r.seeds)},
            {"rounds", r.trace.rounds.size()},
            {"total_energy_j", r.trace.total_energy_j},
            {"initial_train_loss", r.trace.initial.train_loss},
            {"final_train_loss", r.trace.final.train_loss},
            {"final_test_accuracy", r.trace.final.test_accuracy},
            {"final_grad_norm_sq", r.trace.final.grad_norm_sq},
            {"mean_participants", mean_participants(r)},
            {"client_energy_j", r.trace.client_energy_j},
            {"client_uploads", r.trace.client_uploads},
            {"client_max_interval", r.trace.client_max_interval},
            {"client_mean_p", r.trace.client_mean_p}};
  std::vector<double> distances;
  for (const ClientProfile& c : r.profiles) distances.push_back(c.distance_km);
  j["client_distance_km"] = distances;
  if (r.calibration)
    j["calibration"] = {{"mean_sum_p", r.calibration->mean_sum_p},
                        {"k_sel", r.calibration->k_sel},
                        {"p_const", r.calibration->p_const}};
  return j;
}

json bounds_report(const ExperimentConfig& cfg) {
  if (!cfg.bounds) throw ConfigError("bounds", "the bounds subcommand needs a bounds section");
  const BoundsConfig& b = *cfg.bounds;
  b.constants.validate();
  Grid p = b.p;
  if (p.size() == 0) p = Grid(cfg.clients, std::max(cfg.rounds, 1), *b.p_uniform);
  const std::vector<double> delta_prime = delta_approx(p);
  const std::vector<double>& deltas = b.deltas.empty() ? delta_prime : b.deltas;
  const int rounds = static_cast<int>(p.cols());
  const BoundTerms l1 = lemma1_terms(deltas, b.constants, rounds);
  const BoundTerms t1 = theorem1_terms(p, b.constants);
  auto terms = [](const BoundTerms& t) {
    return json{{"descent", t.descent},
                {"staleness", t.staleness},
                {"variance", t.variance},
                {"total", t.total()}};
  };
  std::vector<double> first;
  for (std::size_t k = 0; k < p.rows(); ++k) first.push_back(expected_first_comm(p.row(k)));
  const FairnessGap fair = fairness_gap(delta_prime);
  json report = {{"schema", kResultsSchema},
                 {"config", to_json(cfg)},
                 {"rounds", rounds},
                 {"eta_limit", 1.0 / (8.0 * b.constants.smoothness)},
                 {"delta_prime", delta_prime},
                 {"lemma1", terms(l1)},
                 {"theorem1", terms(t1)},
                 {"convergence_metric", convergence_metric(p)},
                 {"expected_first_comm", first},
                 {"fairness", {{"sum_sq", fair.sum_sq},
                               {"uniform_sum_sq", fair.uniform_sum_sq},
                               {"gap", fair.gap()}}}};
  report["lemma1"]["deltas"] = deltas;
  return report;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asynchronous wireless federated learning: solver and simulator", "awfl"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "experiment JSON")->required();
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seeds", o.seeds, "comma-separated run seeds")->delimiter(',');
    sub->add_option("--parallel", o.parallel, "worker threads")->default_val(1);
  };
  CLI::App* solve = app.add_subcommand("solve", "solve the joint selection/bandwidth problem");
  CLI::App* simulate = app.add_subcommand("simulate", "run federated training");
  CLI::App* sweep = app.add_subcommand("sweep", "simulate over a list of rho values");
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate the convergence bounds");
  for (CLI::App* sub : {solve, simulate, sweep, bounds}) add_common(sub);
  sweep->add_option("--rho", o.rho, "comma-separated rho values")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const bool is_sim = simulate->parsed() || sweep->parsed();
  try {
    if (solve->parsed()) return cmd_solve(o, err);
    if (simulate->parsed()) return cmd_simulate(o);
    if (sweep->parsed()) return cmd_sweep(o);
    return cmd_bounds(o, out);
  } catch (const std::exception& e) {
    const Failure f = describe(e, is_sim ? kExitSimulation : kExitSolver);
    if (!o.out.empty()) {
      std::error_code ec;
      fs::create_directories(o.out, ec);
      if (!ec) write_json(fs::path(o.out) / "error.json", f.body);
    }
    err << f.body.dump() << "\n";
    return f.code;
  }
}

}  // namespace awfl
