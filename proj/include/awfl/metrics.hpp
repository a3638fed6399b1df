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
#include <span>
#include <vector>

#include "awfl/exec.hpp"
#include "awfl/grid.hpp"

namespace awfl {

struct BoundConstants {
  double smoothness = 1.0;  // L
  double g_max = 1.0;
  double sigma_sq = 0.0;
  double f_max = 1.0;
  double eta = 0.01;

  // Throws DomainError for non-positive constants (sigma_sq may be 0) and
  // BoundValidityError when eta > 1/(8L).
  void validate() const;
};

struct BoundTerms {
  double descent = 0.0;    // 8 f_max / (eta T)
  double staleness = 0.0;  // 92 eta^2 L^2 G^2 sum(Delta^2) / K
  double variance = 0.0;   // 9 sigma^2
  double total() const noexcept { return descent + staleness + variance; }
};

BoundTerms lemma1_terms(std::span<const double> deltas, const BoundConstants& c, int rounds);
double lemma1_bound(std::span<const double> deltas, const BoundConstants& c, int rounds);

// Rows are clients, columns rounds; Delta'_k = T / sum_t p_{k,t}.
BoundTerms theorem1_terms(const Grid& p, const BoundConstants& c);
double theorem1_bound(const Grid& p, const BoundConstants& c);

double delta_approx(std::span<const double> p_row);
std::vector<double> delta_approx(const Grid& p);

// sum_t t p_t prod_{tau<t} (1 - p_tau).
double expected_first_comm(std::span<const double> p_row);

// (T^2 / K) sum_k (1 / sum_t p_{k,t})^2.
double convergence_metric(const Grid& p);

struct FairnessGap {
  double sum_sq = 0.0;
  double uniform_sum_sq = 0.0;
  double gap() const noexcept { return sum_sq - uniform_sum_sq; }
};

// Compares sum(Delta^2) with the uniform vector of equal sum(1/Delta).
FairnessGap fairness_gap(std::span<const double> deltas);

struct GapEstimate {
  double mean_gap = 0.0;
  long long gaps = 0;
};

// Mean number of rounds between consecutive uploads of one client that
// uploads in round t with probability p_row[t], pooled over `trajectories`
// independent draws. The initial model counts as received at round -1.
GapEstimate monte_carlo_gap(std::span<const double> p_row, int trajectories, std::uint64_t seed,
                            Exec exec = Exec::serial);

}  // namespace awfl
