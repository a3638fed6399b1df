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

#include "awfl/metrics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "awfl/error.hpp"
#include "awfl/rng.hpp"

namespace awfl {

namespace {

constexpr std::uint64_t kGapTag = 0x6a90'0000'0001ULL;

double row_sum(std::span<const double> row) {
  const double s = std::accumulate(row.begin(), row.end(), 0.0);
  if (!(s > 0.0)) throw DomainError("selection probabilities of a client sum to zero");
  return s;
}

}  // namespace

void BoundConstants::validate() const {
  if (!(smoothness > 0.0 && g_max > 0.0 && f_max > 0.0 && eta > 0.0 && sigma_sq >= 0.0))
    throw DomainError("bound constants must be positive");
  if (eta * 8.0 * smoothness > 1.0 + 1e-12)
    throw BoundValidityError("eta = " + std::to_string(eta) + " exceeds 1/(8L) = " +
                             std::to_string(1.0 / (8.0 * smoothness)));
}

BoundTerms lemma1_terms(std::span<const double> deltas, const BoundConstants& c, int rounds) {
  c.validate();
  if (deltas.empty()) throw DomainError("lemma1_bound needs at least one client");
  if (rounds < 1) throw DomainError("lemma1_bound needs T >= 1");
  double sum_sq = 0.0;
  for (double d : deltas) {
    if (!(d >= 1.0)) throw DomainError("communication intervals must be >= 1");
    sum_sq += d * d;
  }
  const double k_count = static_cast<double>(deltas.size());
  const double lg = c.eta * c.smoothness * c.g_max;
  BoundTerms t;
  t.descent = 8.0 * c.f_max / (c.eta * rounds);
  t.staleness = 92.0 * lg * lg * sum_sq / k_count;
  t.variance = 9.0 * c.sigma_sq;
  return t;
}

double lemma1_bound(std::span<const double> deltas, const BoundConstants& c, int rounds) {
  return lemma1_terms(deltas, c, rounds).total();
}

double delta_approx(std::span<const double> p_row) {
  return static_cast<double>(p_row.size()) / row_sum(p_row);
}

std::vector<double> delta_approx(const Grid& p) {
  std::vector<double> out(p.rows());
  for (std::size_t k = 0; k < p.rows(); ++k) out[k] = delta_approx(p.row(k));
  return out;
}

BoundTerms theorem1_terms(const Grid& p, const BoundConstants& c) {
  for (double v : p.data())
    if (!(v > 0.0 && v <= 1.0)) throw DomainError("theorem1_bound needs p in (0, 1]");
  return lemma1_terms(delta_approx(p), c, static_cast<int>(p.cols()));
}

double theorem1_bound(const Grid& p, const BoundConstants& c) {
  return theorem1_terms(p, c).total();
}

double expected_first_comm(std::span<const double> p_row) {
  double survive = 1.0;
  double out = 0.0;
  for (std::size_t t = 0; t < p_row.size(); ++t) {
    out += p_row[t] * survive * static_cast<double>(t);
    survive *= 1.0 - p_row[t];
  }
  return out;
}

double convergence_metric(const Grid& p) {
  const double t = static_cast<double>(p.cols());
  double sum = 0.0;
  for (std::size_t k = 0; k < p.rows(); ++k) {
    const double inv = 1.0 / row_sum(p.row(k));
    sum += inv * inv;
  }
  return t * t / static_cast<double>(p.rows()) * sum;
}

FairnessGap fairness_gap(std::span<const double> deltas) {
  FairnessGap g;
  double harmonic = 0.0;
  for (double d : deltas) {
    if (!(d > 0.0)) throw DomainError("fairness_gap needs positive intervals");
    g.sum_sq += d * d;
    harmonic += 1.0 / d;
  }
  const double k_count = static_cast<double>(deltas.size());
  const double uniform = k_count / harmonic;
  g.uniform_sum_sq = k_count * uniform * uniform;
  return g;
}

GapEstimate monte_carlo_gap(std::span<const double> p_row, int trajectories, std::uint64_t seed,
                            Exec exec) {
  std::vector<long long> sums(trajectories, 0), counts(trajectories, 0);
  for_each_index(trajectories, exec, [&](int j) {
    long long last = -1;
    for (std::size_t t = 0; t < p_row.size(); ++t) {
      const double u = keyed_uniform({seed, kGapTag, static_cast<std::uint64_t>(j), t});
      if (u < p_row[t]) {
        sums[j] += static_cast<long long>(t) - last;
        ++counts[j];
        last = static_cast<long long>(t);
      }
    }
  });
  GapEstimate e;
  long long total = 0;
  for (int j = 0; j < trajectories; ++j) {
    total += sums[j];
    e.gaps += counts[j];
  }
  e.mean_gap = e.gaps > 0 ? static_cast<double>(total) / static_cast<double>(e.gaps) : 0.0;
  return e;
}

}  // namespace awfl
