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

#include "awfl/lambert_w.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "awfl/error.hpp"

namespace awfl {

namespace {

// e split into a double and its rounding remainder, for evaluating 1 + e*x
// without cancellation near the branch point.
constexpr double kEHi = 2.718281828459045;
constexpr double kELo = 1.4456468917292502e-16;
constexpr double kBranchPoint = -0.36787944117144233;  // -1/e rounded

constexpr double kIdentityTol = 1e-13;
constexpr int kMaxIterations = 64;

double initial_guess(double x, double branch_offset) {
  if (branch_offset < 0.3) {
    // Series about the branch point in p = sqrt(2 (1 + e x)).
    const double p = std::sqrt(2.0 * branch_offset);
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
  }
  if (x < 3.0) {
    // Pade-style rational fit, good to a few percent on [-0.25, 3].
    return x * (1.0 + 1.2 * x) / (1.0 + x * (2.2 + 0.28 * x)) ;
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1 + l2 * (l2 - 2.0) / (2.0 * l1 * l1);
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
  if (x < kBranchPoint) throw DomainError("lambert_w0: argument below -1/e");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  const double branch_offset = std::fma(kEHi, x, 1.0) + kELo * x;
  if (branch_offset <= 0.0) return -1.0;

  const double scale = std::max(1.0, std::abs(x));
  double y = initial_guess(x, branch_offset);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    const double ey = std::exp(y);
    const double f = y * ey - x;
    if (std::abs(f) <= kIdentityTol * scale) break;
    // Halley step.
    const double fp = ey * (y + 1.0);
    if (fp == 0.0) break;
    const double step = f / (fp - (y + 2.0) * f / (2.0 * y + 2.0));
    const double next = std::max(y - step, -1.0);
    if (next == y) break;
    y = next;
  }
  return y;
}

}  // namespace awfl
