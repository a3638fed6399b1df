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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace awfl {

// Argument outside the mathematical domain of an operation
// (non-positive distance, x < -1/e for Lambert W, zero selection mass, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bound constants outside the range where the convergence bound holds.
class BoundValidityError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A selection/bandwidth plan violates one of the feasibility constraints.
class InfeasiblePlanError : public std::runtime_error {
 public:
  InfeasiblePlanError(std::string constraint, const std::string& what)
      : std::runtime_error(what), constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

// Malformed or inconsistent experiment configuration. `field` is the
// JSON path of the offending entry, e.g. "cell.total_bandwidth_hz".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Iterative solver did not reach its tolerance. `residual` is the last
// measured convergence quantity of the loop that failed and
// `last_iterate` the flattened iterate it stopped at.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::string stage, const std::string& what, double residual,
              std::vector<double> last_iterate = {})
      : std::runtime_error(what),
        stage_(std::move(stage)),
        residual_(residual),
        last_iterate_(std::move(last_iterate)) {}
  const std::string& stage() const noexcept { return stage_; }
  double residual() const noexcept { return residual_; }
  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }

 private:
  std::string stage_;
  double residual_;
  std::vector<double> last_iterate_;
};

}  // namespace awfl
