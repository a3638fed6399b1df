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

#include "awfl/experiment.hpp"

#include <cmath>
#include <sstream>

#include "awfl/error.hpp"
#include "awfl/rng.hpp"

namespace awfl {

namespace {

constexpr std::uint64_t kPlacementTag = 0x91ac'e000'0001ULL;

double area_uniform_radius(double inner_m, double outer_m, double u) {
  return std::sqrt(inner_m * inner_m + u * (outer_m * outer_m - inner_m * inner_m));
}

}  // namespace

std::vector<ClientProfile> place_clients(const ExperimentConfig& cfg, std::uint64_t seed) {
  const PlacementConfig& p = cfg.placement;
  std::vector<ClientProfile> out;
  for (int k = 0; k < cfg.clients; ++k) {
    const double u = keyed_uniform({seed, kPlacementTag, static_cast<std::uint64_t>(k)});
    double d_km = 0.0;
    switch (p.kind) {
      case PlacementKind::explicit_distances:
        d_km = p.distances_km[k];
        break;
      case PlacementKind::scenario1:
      case PlacementKind::scenario2:
        if (k < p.scenario_clients) {
          d_km = area_uniform_radius(p.scenario_inner_m, p.scenario_outer_m, u) / 1000.0;
          break;
        }
        [[fallthrough]];
      case PlacementKind::uniform:
        d_km = area_uniform_radius(p.min_radius_m, cfg.cell.cell_radius_m, u) / 1000.0;
        break;
    }
    out.push_back({k + 1, d_km, cfg.tx_power_w});
  }
  return out;
}

Environment make_environment(const ExperimentConfig& cfg, const SeedSet& seeds) {
  Environment env;
  env.cell = cfg.cell;
  env.fading = cfg.fading;
  env.profiles = place_clients(cfg, cfg.placement.seed.value_or(seeds.placement));
  env.cell.validate();
  for (const ClientProfile& c : env.profiles) validate_profile(c, env.cell);
  return env;
}

MlpTask make_task(const ExperimentConfig& cfg, const SeedSet& seeds) {
  return make_synthetic_task(cfg.task, cfg.clients, seeds.data);
}

Calibration calibrate(const ExperimentConfig& cfg, const Environment& env,
                      std::uint64_t fading_seed) {
  ProposedPolicy pilot(cfg.rho, cfg.lambda_min, cfg.solver);
  const int rounds = std::max(cfg.rounds, 1);
  double total = 0.0;
  std::vector<double> gains(env.profiles.size());
  for (int t = 0; t < rounds; ++t) {
    for (std::size_t k = 0; k < gains.size(); ++k)
      gains[k] = channel_gain(env.profiles[k], t, env.fading, fading_seed).gain;
    const PolicyDecision d = pilot.decide({t, cfg.rounds, &env.cell, env.profiles, gains});
    for (double p : d.p) total += p;
    if (env.fading.kind == FadingKind::none) {
      total *= rounds;
      break;
    }
  }
  Calibration c;
  c.mean_sum_p = total / rounds;
  const double k_count = static_cast<double>(env.profiles.size());
  c.k_sel = std::clamp(static_cast<int>(std::lround(c.mean_sum_p)), 1,
                       static_cast<int>(env.profiles.size()));
  c.p_const = std::min(1.0, c.mean_sum_p / k_count);
  return c;
}

std::unique_ptr<Policy> make_policy(const ExperimentConfig& cfg,
                                    const std::optional<Calibration>& calibration) {
  const SchemeConfig& s = cfg.scheme;
  auto calibrated = [&](const char* field) -> const Calibration& {
    if (!calibration) throw ConfigError(field, "benchmark parameter needs a calibration run");
    return *calibration;
  };
  switch (s.kind) {
    case SchemeKind::proposed:
      return std::make_unique<ProposedPolicy>(cfg.rho, cfg.lambda_min, cfg.solver);
    case SchemeKind::random:
      return std::make_unique<RandomPolicy>(s.p_const ? *s.p_const
                                                      : calibrated("scheme.p").p_const);
    case SchemeKind::greedy:
      return std::make_unique<GreedyPolicy>(s.k_sel ? *s.k_sel
                                                    : calibrated("scheme.k_sel").k_sel);
    case SchemeKind::age_based:
      return std::make_unique<AgeBasedPolicy>(s.k_sel ? *s.k_sel
                                                      : calibrated("scheme.k_sel").k_sel);
  }
  throw ConfigError("scheme.name", "unknown scheme");
}

std::string run_id(SchemeKind scheme, double rho, std::uint64_t seed) {
  std::ostringstream os;
  os << scheme_name(scheme) << "-rho" << rho << "-seed" << seed;
  return os.str();
}

RunResult run_simulation(const ExperimentConfig& cfg, std::uint64_t seed, Exec exec) {
  RunResult r;
  r.scheme = cfg.scheme.kind;
  r.rho = cfg.rho;
  r.seed = seed;
  r.run_id = run_id(r.scheme, r.rho, seed);
  r.seeds = seeds_for(cfg, seed);
  const Environment env = make_environment(cfg, r.seeds);
  r.profiles = env.profiles;
  const bool needs_calibration =
      (cfg.scheme.kind == SchemeKind::random && !cfg.scheme.p_const) ||
      ((cfg.scheme.kind == SchemeKind::greedy || cfg.scheme.kind == SchemeKind::age_based) &&
       !cfg.scheme.k_sel);
  if (needs_calibration) r.calibration = calibrate(cfg, env, r.seeds.fading);
  const MlpTask task = make_task(cfg, r.seeds);
  const std::unique_ptr<Policy> policy = make_policy(cfg, r.calibration);
  EngineSettings es;
  es.rounds = cfg.rounds;
  es.divisor = cfg.divisor;
  es.force_cap = cfg.force_cap;
  es.seeds = r.seeds;
  es.exec = exec;
  es.eval_every = cfg.eval_every;
  r.trace = run_training(task, *policy, env, es);
  return r;
}

std::vector<RunResult> run_batch(const ExperimentConfig& cfg, const std::vector<double>& rhos,
                                 const std::vector<std::uint64_t>& seeds, Exec exec) {
  std::vector<RunResult> out(rhos.size() * seeds.size());
  for_each_index(static_cast<int>(out.size()), exec, [&](int i) {
    ExperimentConfig c = cfg;
    c.rho = rhos[i / seeds.size()];
    out[i] = run_simulation(c, seeds[i % seeds.size()], Exec::serial);
  });
  return out;
}

}  // namespace awfl
