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

// Independent re-derivations shared by the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "awfl/solver.hpp"

namespace awfl::testing {

inline double energy_coeff(const ProblemInstance& inst, int k) {
  return inst.profiles[k].tx_power_w * inst.cell.model_size_nats() * (1.0 - inst.rho);
}

// Gradient of the per-client selection Lagrangian in one coordinate.
inline double selection_gradient(const ProblemInstance& inst, int k, std::span<const double> row,
                                 double alpha_kt) {
  const double mass = std::accumulate(row.begin(), row.end(), 0.0);
  const double conv =
      inst.rho * static_cast<double>(inst.rounds()) * inst.rounds() / inst.clients();
  return alpha_kt * energy_coeff(inst, k) - 2.0 * conv / (mass * mass * mass);
}

// Root of alpha beta R'(w) = v on (0, 1], by bisection on log w.
inline double bisect_share(double ab, double v, double p_tx, double h, const CellConfig& cell) {
  const double b = p_tx * h / (cell.total_bandwidth_hz * cell.noise_density_w_per_hz);
  auto slope = [&](double w) {
    return ab * cell.total_bandwidth_hz * (std::log1p(b / w) - b / (w + b)) - v;
  };
  if (slope(1.0) >= 0.0) return 1.0;
  double lo = -700.0, hi = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (slope(std::exp(mid)) > 0.0 ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

// Global iterates of the protocol on f_k = |x - c_k|^2 / 2, unrolled by
// hand: `steps` local gradient steps per round, x += sum of (x_k - y_k)
// over the scripted participants / K, and broadcast to the participants.
inline std::vector<std::vector<double>> unrolled_protocol(
    const std::vector<std::vector<double>>& centers, double lr, int steps,
    const std::vector<std::vector<int>>& script, int rounds) {
  const std::size_t n = centers[0].size();
  const int k_count = static_cast<int>(centers.size());
  std::vector<double> x(n, 0.0);
  std::vector<std::vector<double>> xk(k_count, x), yk(k_count, x);
  std::vector<std::vector<double>> out;
  for (int t = 0; t < rounds; ++t) {
    for (int k = 0; k < k_count; ++k)
      for (int s = 0; s < steps; ++s)
        for (std::size_t i = 0; i < n; ++i) xk[k][i] -= lr * (xk[k][i] - centers[k][i]);
    const std::vector<int>& sel = script[t % script.size()];
    if (std::any_of(sel.begin(), sel.end(), [](int s) { return s != 0; })) {
      for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int k = 0; k < k_count; ++k)
          if (sel[k]) sum += xk[k][i] - yk[k][i];
        x[i] += sum / k_count;
      }
    }
    for (int k = 0; k < k_count; ++k)
      if (sel[k]) xk[k] = yk[k] = x;
    out.push_back(x);
  }
  return out;
}

}  // namespace awfl::testing
