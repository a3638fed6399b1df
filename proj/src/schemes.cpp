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

#include "awfl/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "awfl/error.hpp"

namespace awfl {

namespace {

void require_k_sel(int k_sel, int clients) {
  if (k_sel < 1 || k_sel > clients)
    throw ConfigError("scheme.k_sel", "k_sel must lie in [1, K]");
}

PolicyDecision equal_split(std::vector<double> chosen) {
  PolicyDecision d;
  const double count = std::accumulate(chosen.begin(), chosen.end(), 0.0);
  d.w.resize(chosen.size());
  for (std::size_t k = 0; k < chosen.size(); ++k) d.w[k] = chosen[k] > 0.0 ? 1.0 / count : 0.0;
  d.p = std::move(chosen);
  d.deterministic = true;
  return d;
}

}  // namespace

PolicyDecision random_policy(double p_const, int clients) {
  if (!(p_const >= 0.0 && p_const <= 1.0))
    throw ConfigError("scheme.p", "random policy probability must lie in [0, 1]");
  PolicyDecision d;
  d.p.assign(clients, p_const);
  d.w.assign(clients, 1.0 / clients);
  return d;
}

PolicyDecision greedy_policy(int k_sel, std::span<const double> gains) {
  const int k_count = static_cast<int>(gains.size());
  require_k_sel(k_sel, k_count);
  std::vector<int> order(k_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return gains[a] > gains[b]; });
  std::vector<double> chosen(k_count, 0.0);
  for (int i = 0; i < k_sel; ++i) chosen[order[i]] = 1.0;
  return equal_split(std::move(chosen));
}

PolicyDecision age_based_policy(int k_sel, int round, int clients) {
  require_k_sel(k_sel, clients);
  std::vector<double> chosen(clients, 0.0);
  const long long start = static_cast<long long>(round) * k_sel;
  for (int i = 0; i < k_sel; ++i) chosen[(start + i) % clients] = 1.0;
  return equal_split(std::move(chosen));
}

int calibrate_k_sel(std::span<const double> p) {
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  return std::clamp(static_cast<int>(std::lround(total)), 1, static_cast<int>(p.size()));
}

PolicyDecision RandomPolicy::decide(const RoundContext& ctx) {
  return random_policy(p_, static_cast<int>(ctx.gains.size()));
}

PolicyDecision GreedyPolicy::decide(const RoundContext& ctx) {
  return greedy_policy(k_sel_, ctx.gains);
}

PolicyDecision AgeBasedPolicy::decide(const RoundContext& ctx) {
  return age_based_policy(k_sel_, ctx.round, static_cast<int>(ctx.gains.size()));
}

OnlineInstance ProposedPolicy::instance(const RoundContext& ctx) const {
  OnlineInstance inst;
  inst.rho = rho_;
  inst.lambda_min = lambda_;
  inst.horizon_rounds = std::max(ctx.horizon, 1);
  inst.cell = *ctx.cell;
  inst.profiles.assign(ctx.profiles.begin(), ctx.profiles.end());
  inst.gains.assign(ctx.gains.begin(), ctx.gains.end());
  return inst;
}

PolicyDecision ProposedPolicy::decide(const RoundContext& ctx) {
  if (solves_ > 0 && std::equal(ctx.gains.begin(), ctx.gains.end(), cached_gains_.begin(),
                                cached_gains_.end()))
    return cached_;
  const OnlineSolution sol = solve_online(instance(ctx), settings_);
  ++solves_;
  cached_gains_.assign(ctx.gains.begin(), ctx.gains.end());
  cached_ = PolicyDecision{sol.p, sol.w, false};
  return cached_;
}

}  // namespace awfl
