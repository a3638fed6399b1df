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

#include "awfl/engine.hpp"
#include "awfl/learn.hpp"

namespace awfl {

// Classification with the MLP. Each client trains on its own shard; the
// global metrics are the mean loss and gradient over the union of the
// client shards and the accuracy on a held-out test set.
class MlpTask final : public Task {
 public:
  MlpTask(MlpShape shape, std::vector<Dataset> client_data, Dataset test, TrainSettings train);

  int clients() const override { return static_cast<int>(client_data_.size()); }
  std::size_t parameter_count() const override { return shape_.parameter_count(); }
  std::vector<double> initial_model(std::uint64_t seed) const override;
  void local_update(int client, std::vector<double>& model, std::uint64_t seed) const override;
  TaskMetrics evaluate(std::span<const double> model, Exec exec) const override;

  const MlpShape& shape() const noexcept { return shape_; }
  const Dataset& train_union() const noexcept { return train_union_; }
  const Dataset& client_data(int k) const { return client_data_.at(k); }

 private:
  MlpShape shape_;
  std::vector<Dataset> client_data_;
  Dataset train_union_;
  Dataset test_;
  TrainSettings train_;
};

struct SyntheticTaskSpec {
  SyntheticSpec data;
  double test_fraction = 0.2;
  int shards_per_client = 5;
  int hidden = 32;
  TrainSettings train;
};

// Generates the data, splits off the test set and deals non-IID shards.
MlpTask make_synthetic_task(const SyntheticTaskSpec& spec, int clients, std::uint64_t data_seed);

// f_k(x) = |x - c_k|^2 / 2. A local update is `steps` gradient steps of
// size `learning_rate`; the global loss is the mean over clients.
class QuadraticTask final : public Task {
 public:
  QuadraticTask(std::vector<std::vector<double>> centers, double learning_rate, int steps);

  int clients() const override { return static_cast<int>(centers_.size()); }
  std::size_t parameter_count() const override { return centers_.front().size(); }
  std::vector<double> initial_model(std::uint64_t seed) const override;
  void local_update(int client, std::vector<double>& model, std::uint64_t seed) const override;
  TaskMetrics evaluate(std::span<const double> model, Exec exec) const override;

 private:
  std::vector<std::vector<double>> centers_;
  double learning_rate_;
  int steps_;
};

}  // namespace awfl
