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

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "awfl/error.hpp"
#include "awfl/schemes.hpp"
#include "awfl/tasks.hpp"
#include "fixtures.hpp"
#include "policies.hpp"

using namespace awfl;
using awfl::testing::reference_cell;

namespace {

std::set<int> chosen_ids(const PolicyDecision& d) {
  std::set<int> ids;
  for (std::size_t k = 0; k < d.p.size(); ++k)
    if (d.p[k] == 1.0) ids.insert(static_cast<int>(k) + 1);
  return ids;
}

void check_bandwidth(const PolicyDecision& d) {
  double total = 0.0;
  for (double w : d.w) {
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
    total += w;
  }
  CHECK(total <= 1.0 + 1e-12);
}

}  // namespace

TEST_CASE("random policy") {
  const PolicyDecision all = random_policy(1.0, 4);
  CHECK(sample_selection(all.p, 0, 3).size() == 4);
  CHECK(sample_selection(random_policy(0.0, 4).p, 0, 3).empty());
  check_bandwidth(all);
  CHECK(all.w == std::vector<double>(4, 0.25));
  CHECK_THROWS_AS(random_policy(1.5, 4), ConfigError);

  const int k_count = 10;
  const PolicyDecision d = random_policy(0.1, k_count);
  long total = 0;
  for (int r = 0; r < 100000; ++r) total += static_cast<long>(sample_selection(d.p, r, 8).size());
  const double mean = total / 1e5;
  CHECK(mean >= 0.95 * k_count * 0.1);
  CHECK(mean <= 1.05 * k_count * 0.1);
}

TEST_CASE("greedy policy") {
  const std::vector<double> g{3.0, 1.0, 2.0};
  const PolicyDecision d = greedy_policy(2, g);
  CHECK(chosen_ids(d) == std::set<int>{1, 3});
  CHECK(d.w == std::vector<double>{0.5, 0.0, 0.5});
  CHECK(d.deterministic);
  CHECK(chosen_ids(greedy_policy(2, std::vector<double>(4, 1.0))) == std::set<int>{1, 2});
  CHECK_THROWS_AS(greedy_policy(0, g), ConfigError);
  CHECK_THROWS_AS(greedy_policy(4, g), ConfigError);

  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k_count = 2 + trial % 12;
    const int k_sel = 1 + trial % k_count;
    std::vector<double> gains(k_count);
    for (double& v : gains) v = u(gen);
    std::vector<double> sorted = gains;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    std::set<int> want;
    for (int k = 0; k < k_count; ++k)
      if (gains[k] >= sorted[k_sel - 1]) want.insert(k + 1);
    const PolicyDecision got = greedy_policy(k_sel, gains);
    CHECK(chosen_ids(got) == want);
    CHECK(chosen_ids(greedy_policy(k_sel, gains)) == chosen_ids(got));
    check_bandwidth(got);
  }
}

TEST_CASE("age-based policy") {
  CHECK(chosen_ids(age_based_policy(2, 0, 4)) == std::set<int>{1, 2});
  CHECK(chosen_ids(age_based_policy(2, 1, 4)) == std::set<int>{3, 4});
  CHECK(chosen_ids(age_based_policy(2, 2, 4)) == std::set<int>{1, 2});
  CHECK(chosen_ids(age_based_policy(3, 1, 4)) == std::set<int>{4, 1, 2});

  for (int k_count = 1; k_count <= 12; ++k_count)
    for (int k_sel = 1; k_sel <= k_count; ++k_sel) {
      const int period = k_count / std::gcd(k_count, k_sel);
      std::vector<int> counts(k_count, 0);
      for (int r = 0; r < period; ++r) {
        const PolicyDecision d = age_based_policy(k_sel, r, k_count);
        check_bandwidth(d);
        for (int id : chosen_ids(d)) ++counts[id - 1];
      }
      CHECK(std::all_of(counts.begin(), counts.end(), [&](int c) { return c == counts[0]; }));
      CHECK(counts[0] == period * k_sel / k_count);
    }
}

TEST_CASE("calibrate_k_sel") {
  CHECK(calibrate_k_sel(std::vector<double>{0.4, 0.4, 0.4}) == 1);
  CHECK(calibrate_k_sel(std::vector<double>{0.6, 0.6, 0.6}) == 2);
  CHECK(calibrate_k_sel(std::vector<double>{0.05, 0.05}) == 1);
  CHECK(calibrate_k_sel(std::vector<double>{1.0, 1.0}) == 2);
}

TEST_CASE("proposed policy") {
  const CellConfig cell = reference_cell();
  std::vector<ClientProfile> same{{1, 0.5, 0.2}, {2, 0.5, 0.2}, {3, 0.5, 0.2}};
  const std::vector<double> gains(3, channel_gain(same[0], 0, {}, 1).gain);

  ProposedPolicy symmetric(0.3, 0.05, SolverSettings{});
  const PolicyDecision d = symmetric.decide({0, 50, &cell, same, gains});
  CHECK(d.p[0] == doctest::Approx(d.p[1]).epsilon(1e-9));
  CHECK(d.p[1] == doctest::Approx(d.p[2]).epsilon(1e-9));
  check_bandwidth(d);
  symmetric.decide({1, 50, &cell, same, gains});
  CHECK(symmetric.solves() == 1);

  ProposedPolicy tiny_rho(1e-4, 0.05, SolverSettings{});
  for (double p : tiny_rho.decide({0, 50, &cell, same, gains}).p)
    CHECK(p == doctest::Approx(0.05).epsilon(1e-9));

  Environment env;
  env.cell = cell;
  env.profiles = {{1, 0.15, 0.2}, {2, 0.55, 0.2}, {3, 0.95, 0.2}};
  const QuadraticTask task(std::vector<std::vector<double>>(3, {0.0}), 0.1, 1);
  ProposedPolicy policy(0.5, 0.05, SolverSettings{});
  EngineSettings s;
  s.rounds = 20000;
  s.eval_every = s.rounds;
  const RunTrace trace = run_training(task, policy, env, s);
  CHECK(policy.solves() == 1);
  double sum_p = 0.0;
  for (double p : trace.client_mean_p) sum_p += p;
  double var = 0.0;
  for (double p : trace.client_mean_p) var += p * (1.0 - p);
  long uploads = 0;
  for (int u : trace.client_uploads) uploads += u;
  const double mean = static_cast<double>(uploads) / s.rounds;
  CHECK(std::abs(mean - sum_p) <= 4.0 * std::sqrt(var / s.rounds));
  CHECK(sum_p > 0.15);
}
