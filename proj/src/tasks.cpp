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

#include "awfl/tasks.hpp"

#include <utility>

#include "awfl/error.hpp"

namespace awfl {

MlpTask::MlpTask(MlpShape shape, std::vector<Dataset> client_data, Dataset test,
                 TrainSettings train)
    : shape_(shape), client_data_(std::move(client_data)), test_(std::move(test)), train_(train) {
  if (client_data_.empty()) throw ConfigError("clients", "task needs at least one client");
  train_union_.dims = shape_.dims;
  train_union_.classes = shape_.classes;
  for (const Dataset& d : client_data_) {
    if (d.dims != shape_.dims) throw ConfigError("task.dims", "client data dimension mismatch");
    train_union_.features.insert(train_union_.features.end(), d.features.begin(),
                                 d.features.end());
    train_union_.labels.insert(train_union_.labels.end(), d.labels.begin(), d.labels.end());
  }
}

std::vector<double> MlpTask::initial_model(std::uint64_t seed) const {
  return init_model(shape_, seed).params;
}

void MlpTask::local_update(int client, std::vector<double>& model, std::uint64_t seed) const {
  MlpModel m{shape_, std::move(model)};
  local_train(m, client_data_.at(client), train_, seed);
  model = std::move(m.params);
}

TaskMetrics MlpTask::evaluate(std::span<const double> model, Exec exec) const {
  const MlpModel m{shape_, std::vector<double>(model.begin(), model.end())};
  std::vector<double> grad(m.params.size());
  TaskMetrics out;
  out.train_loss = loss_and_gradient(m, train_union_, {}, grad, exec);
  for (double g : grad) out.grad_norm_sq += g * g;
  out.test_accuracy = test_.size() > 0 ? awfl::evaluate(m, test_, exec).accuracy : 0.0;
  return out;
}

MlpTask make_synthetic_task(const SyntheticTaskSpec& spec, int clients, std::uint64_t data_seed) {
  const Dataset all = generate_synthetic(spec.data, data_seed);
  TrainTestSplit split = split_train_test(all, spec.test_fraction, data_seed ^ 0x1ULL);
  const ShardPlan plan =
      partition_non_iid(split.train, clients, spec.shards_per_client, data_seed ^ 0x2ULL);
  std::vector<Dataset> parts;
  parts.reserve(clients);
  for (int k = 0; k < clients; ++k) {
    const std::vector<std::size_t> idx = plan.client_indices(k);
    parts.push_back(subset(split.train, idx));
  }
  return MlpTask({spec.data.dims, spec.hidden, spec.data.classes}, std::move(parts),
                 std::move(split.test), spec.train);
}

QuadraticTask::QuadraticTask(std::vector<std::vector<double>> centers, double learning_rate,
                             int steps)
    : centers_(std::move(centers)), learning_rate_(learning_rate), steps_(steps) {
  if (centers_.empty() || centers_.front().empty())
    throw ConfigError("task.centers", "quadratic task needs at least one non-empty center");
  for (const auto& c : centers_)
    if (c.size() != centers_.front().size())
      throw ConfigError("task.centers", "all centers must have the same length");
}

std::vector<double> QuadraticTask::initial_model(std::uint64_t) const {
  return std::vector<double>(parameter_count(), 0.0);
}

void QuadraticTask::local_update(int client, std::vector<double>& model, std::uint64_t) const {
  const std::vector<double>& c = centers_.at(client);
  for (int s = 0; s < steps_; ++s)
    for (std::size_t i = 0; i < model.size(); ++i) model[i] -= learning_rate_ * (model[i] - c[i]);
}

TaskMetrics QuadraticTask::evaluate(std::span<const double> model, Exec) const {
  TaskMetrics out;
  const double k_count = static_cast<double>(centers_.size());
  std::vector<double> grad(model.size(), 0.0);
  for (const auto& c : centers_)
    for (std::size_t i = 0; i < model.size(); ++i) {
      const double d = model[i] - c[i];
      out.train_loss += 0.5 * d * d / k_count;
      grad[i] += d / k_count;
    }
  for (double g : grad) out.grad_norm_sq += g * g;
  return out;
}

}  // namespace awfl
