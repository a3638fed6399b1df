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

// Synthetic classification data, label-sharded partitioning and a small
// multilayer perceptron trained with plain SGD.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "awfl/exec.hpp"

namespace awfl {

struct Dataset {
  int dims = 0;
  int classes = 0;
  std::vector<double> features;  // size() x dims, row-major
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * static_cast<std::size_t>(dims),
            static_cast<std::size_t>(dims)};
  }
};

struct SyntheticSpec {
  int classes = 10;
  int dims = 20;
  int per_class = 500;
  // Standard deviation of each coordinate of the class means. Samples are
  // the class mean plus standard normal noise.
  double separation = 3.0;
};

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// Rows `indices` of `ds`, in that order.
Dataset subset(const Dataset& ds, std::span<const std::size_t> indices);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Per-class split: the first round(test_fraction * n_c) samples of each class
// after a seeded shuffle go to the test set.
TrainTestSplit split_train_test(const Dataset& ds, double test_fraction, std::uint64_t seed);

struct ShardPlan {
  int shards_per_client = 0;
  std::vector<std::vector<std::size_t>> shards;  // shard -> sample indices
  std::vector<int> shard_label;
  std::vector<std::vector<int>> assignment;  // client -> shard ids

  // Sample indices of every shard held by `client`.
  std::vector<std::size_t> client_indices(int client) const;
};

// Sorts samples into one block per label, cuts each block into d K / C
// equal shards and deals each client d shards of d distinct labels. Throws
// ConfigError when d K is not a multiple of C or a class size is not a
// multiple of d K / C.
ShardPlan partition_non_iid(const Dataset& ds, int clients, int shards_per_client,
                            std::uint64_t seed);

// D -> H -> C with ReLU. hidden == 0 is multinomial logistic regression.
struct MlpShape {
  int dims = 20;
  int hidden = 32;
  int classes = 10;

  std::size_t parameter_count() const noexcept;
  friend bool operator==(const MlpShape&, const MlpShape&) = default;
};

// Flat parameters: [W1 (H x D), b1 (H), W2 (C x H), b2 (C)], or [W (C x D),
// b (C)] without a hidden layer.
struct MlpModel {
  MlpShape shape;
  std::vector<double> params;

  double size_bits() const noexcept { return 32.0 * static_cast<double>(params.size()); }
};

// Weights uniform in +-1/sqrt(fan_in), biases zero.
MlpModel init_model(const MlpShape& shape, std::uint64_t seed);

// Class scores for one sample.
std::vector<double> forward(const MlpModel& model, std::span<const double> x);

// Mean softmax cross-entropy over `indices` (all samples when empty) and,
// if `grad` is non-empty, its gradient written into `grad`.
double loss_and_gradient(const MlpModel& model, const Dataset& ds,
                         std::span<const std::size_t> indices, std::span<double> grad,
                         Exec exec = Exec::serial);

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
};

Evaluation evaluate(const MlpModel& model, const Dataset& ds, Exec exec = Exec::serial);

// Squared norm of the full-batch gradient of the mean loss over `ds`.
double global_grad_norm_sq(const MlpModel& model, const Dataset& ds, Exec exec = Exec::serial);

struct TrainSettings {
  int steps = 5;
  double learning_rate = 0.01;
  int batch_size = 10;
};

// `settings.steps` SGD steps on mini-batches drawn uniformly with
// replacement from `shard`. Batches depend only on `seed`.
void local_train(MlpModel& model, const Dataset& shard, const TrainSettings& settings,
                 std::uint64_t seed);

}  // namespace awfl
