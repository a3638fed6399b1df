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

// Selection and bandwidth policies. The three baselines split the band
// equally: random over all K clients, greedy and age-based over the clients
// they select.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "awfl/engine.hpp"
#include "awfl/solver.hpp"

namespace awfl {

PolicyDecision random_policy(double p_const, int clients);

// The k_sel clients with the largest gains; ties go to the lower id.
PolicyDecision greedy_policy(int k_sel, std::span<const double> gains);

// Round r selects ids r k_sel, ..., r k_sel + k_sel - 1 modulo K.
PolicyDecision age_based_policy(int k_sel, int round, int clients);

// Benchmark k matching the expected participants of a probability vector:
// round(sum p), at least 1 and at most K.
int calibrate_k_sel(std::span<const double> p);

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(double p_const) : p_(p_const) {}
  std::string name() const override { return "random"; }
  PolicyDecision decide(const RoundContext& ctx) override;

 private:
  double p_;
};

class GreedyPolicy final : public Policy {
 public:
  explicit GreedyPolicy(int k_sel) : k_sel_(k_sel) {}
  std::string name() const override { return "greedy"; }
  PolicyDecision decide(const RoundContext& ctx) override;

 private:
  int k_sel_;
};

class AgeBasedPolicy final : public Policy {
 public:
  explicit AgeBasedPolicy(int k_sel) : k_sel_(k_sel) {}
  std::string name() const override { return "age_based"; }
  PolicyDecision decide(const RoundContext& ctx) override;

 private:
  int k_sel_;
};

// Solves the online problem on each round's gains; repeats the previous
// answer when the gains have not changed.
class ProposedPolicy final : public Policy {
 public:
  ProposedPolicy(double rho, double lambda_min, SolverSettings settings)
      : rho_(rho), lambda_(lambda_min), settings_(settings) {}
  std::string name() const override { return "proposed"; }
  PolicyDecision decide(const RoundContext& ctx) override;

  OnlineInstance instance(const RoundContext& ctx) const;
  int solves() const noexcept { return solves_; }

 private:
  double rho_;
  double lambda_;
  SolverSettings settings_;
  std::vector<double> cached_gains_;
  PolicyDecision cached_;
  int solves_ = 0;
};

}  // namespace awfl
