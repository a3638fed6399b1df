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

#include "awfl/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "awfl/error.hpp"
#include "awfl/rng.hpp"

namespace awfl {

namespace {

constexpr std::size_t kBlock = 128;

// Views into a flat parameter (or gradient) vector.
template <class T>
struct Layers {
  T* w1;
  T* b1;
  T* w2;
  T* b2;
};

template <class T>
Layers<T> layers(const MlpShape& s, T* base) {
  const std::size_t d = s.dims, h = s.hidden, c = s.classes;
  if (h == 0) return {nullptr, nullptr, base, base + c * d};
  return {base, base + h * d, base + h * d + h, base + h * d + h + c * h};
}

struct Scratch {
  std::vector<double> hidden;
  std::vector<double> scores;
  std::vector<double> delta_hidden;

  explicit Scratch(const MlpShape& s)
      : hidden(s.hidden), scores(s.classes), delta_hidden(s.hidden) {}
};

// Fills scratch.scores with class scores; hidden activations are kept.
void forward_into(const MlpShape& s, const Layers<const double>& p, const double* x,
                  Scratch& scratch) {
  const int d = s.dims, h = s.hidden, c = s.classes;
  const double* in = x;
  int in_dim = d;
  if (h > 0) {
    for (int j = 0; j < h; ++j) {
      const double* wj = p.w1 + static_cast<std::size_t>(j) * d;
      double z = p.b1[j];
      for (int i = 0; i < d; ++i) z += wj[i] * x[i];
      scratch.hidden[j] = z > 0.0 ? z : 0.0;
    }
    in = scratch.hidden.data();
    in_dim = h;
  }
  for (int k = 0; k < c; ++k) {
    const double* wk = p.w2 + static_cast<std::size_t>(k) * in_dim;
    double z = p.b2[k];
    for (int i = 0; i < in_dim; ++i) z += wk[i] * in[i];
    scratch.scores[k] = z;
  }
}

// Turns scores into probabilities in place and returns -log p[label].
double softmax_loss(std::vector<double>& scores, int label) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  for (double& z : scores) total += (z = std::exp(z - top));
  const double log_total = std::log(total);
  const double loss = log_total - std::log(scores[label]);
  for (double& z : scores) z /= total;
  return loss;
}

// Adds scale * d(loss)/d(params) for one sample; scratch must hold the
// forward pass with probabilities in `scores`.
void accumulate_gradient(const MlpShape& s, const Layers<const double>& p, const double* x,
                         int label, double scale, Scratch& scratch, const Layers<double>& g) {
  const int d = s.dims, h = s.hidden, c = s.classes;
  const double* in = h > 0 ? scratch.hidden.data() : x;
  const int in_dim = h > 0 ? h : d;
  if (h > 0) std::fill(scratch.delta_hidden.begin(), scratch.delta_hidden.end(), 0.0);
  for (int k = 0; k < c; ++k) {
    const double err = scratch.scores[k] - (k == label ? 1.0 : 0.0);
    const double e = scale * err;
    double* gk = g.w2 + static_cast<std::size_t>(k) * in_dim;
    for (int i = 0; i < in_dim; ++i) gk[i] += e * in[i];
    g.b2[k] += e;
    if (h > 0) {
      const double* wk = p.w2 + static_cast<std::size_t>(k) * h;
      for (int j = 0; j < h; ++j) scratch.delta_hidden[j] += err * wk[j];
    }
  }
  for (int j = 0; j < h; ++j) {
    if (scratch.hidden[j] <= 0.0) continue;
    const double e = scale * scratch.delta_hidden[j];
    double* gj = g.w1 + static_cast<std::size_t>(j) * d;
    for (int i = 0; i < d; ++i) gj[i] += e * x[i];
    g.b1[j] += e;
  }
}

struct BlockResult {
  double loss = 0.0;
  double correct = 0.0;
  std::vector<double> grad;
};

// Sums over fixed blocks of samples, evaluated independently and combined
// in block order, so the result does not depend on the thread count.
template <class Visit>
BlockResult reduce_blocks(const MlpModel& model, std::size_t count, bool want_grad, Exec exec,
                          Visit&& sample_at) {
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  std::vector<BlockResult> partial(blocks);
  const Layers<const double> p = layers(model.shape, model.params.data());
  for_each_index(static_cast<int>(blocks), exec, [&](int b) {
    BlockResult& out = partial[static_cast<std::size_t>(b)];
    if (want_grad) out.grad.assign(model.params.size(), 0.0);
    const Layers<double> g = layers(model.shape, out.grad.data());
    Scratch scratch(model.shape);
    const std::size_t end = std::min(count, (b + 1) * kBlock);
    for (std::size_t n = b * kBlock; n < end; ++n) {
      const auto [x, label] = sample_at(n);
      forward_into(model.shape, p, x, scratch);
      const int predicted = static_cast<int>(
          std::max_element(scratch.scores.begin(), scratch.scores.end()) - scratch.scores.begin());
      out.correct += predicted == label ? 1.0 : 0.0;
      out.loss += softmax_loss(scratch.scores, label);
      if (want_grad) accumulate_gradient(model.shape, p, x, label, 1.0, scratch, g);
    }
  });
  BlockResult total;
  if (want_grad) total.grad.assign(model.params.size(), 0.0);
  for (const BlockResult& part : partial) {
    total.loss += part.loss;
    total.correct += part.correct;
    for (std::size_t j = 0; j < total.grad.size(); ++j) total.grad[j] += part.grad[j];
  }
  return total;
}

void require_compatible(const MlpModel& model, const Dataset& ds) {
  if (model.shape.dims != ds.dims || model.shape.classes < ds.classes)
    throw DomainError("model shape does not match the dataset");
  if (model.params.size() != model.shape.parameter_count())
    throw DomainError("parameter vector length does not match the model shape");
}

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.classes < 1 || spec.dims < 1 || spec.per_class < 1)
    throw DomainError("synthetic data needs at least one class, dimension and sample");
  if (!(spec.separation >= 0.0)) throw DomainError("separation must be non-negative");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> means(static_cast<std::size_t>(spec.classes) * spec.dims);
  for (double& m : means) m = spec.separation * normal(gen);

  Dataset ds;
  ds.dims = spec.dims;
  ds.classes = spec.classes;
  const std::size_t n = static_cast<std::size_t>(spec.classes) * spec.per_class;
  ds.features.resize(n * spec.dims);
  ds.labels.resize(n);
  std::size_t i = 0;
  for (int c = 0; c < spec.classes; ++c)
    for (int s = 0; s < spec.per_class; ++s, ++i) {
      ds.labels[i] = c;
      for (int j = 0; j < spec.dims; ++j)
        ds.features[i * spec.dims + j] = means[c * spec.dims + j] + normal(gen);
    }
  return ds;
}

Dataset subset(const Dataset& ds, std::span<const std::size_t> indices) {
  Dataset out;
  out.dims = ds.dims;
  out.classes = ds.classes;
  out.features.reserve(indices.size() * ds.dims);
  out.labels.reserve(indices.size());
  for (std::size_t i : indices) {
    const auto row = ds.row(i);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.labels.push_back(ds.labels[i]);
  }
  return out;
}

TrainTestSplit split_train_test(const Dataset& ds, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0))
    throw DomainError("test_fraction must lie in [0, 1)");
  std::vector<std::vector<std::size_t>> by_class(ds.classes);
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.labels[i]].push_back(i);
  std::mt19937_64 gen(seed);
  std::vector<std::size_t> train, test;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), gen);
    const auto cut = static_cast<std::size_t>(std::lround(test_fraction * members.size()));
    test.insert(test.end(), members.begin(), members.begin() + cut);
    train.insert(train.end(), members.begin() + cut, members.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {subset(ds, train), subset(ds, test)};
}

std::vector<std::size_t> ShardPlan::client_indices(int client) const {
  std::vector<std::size_t> out;
  for (int shard : assignment.at(client))
    out.insert(out.end(), shards[shard].begin(), shards[shard].end());
  return out;
}

ShardPlan partition_non_iid(const Dataset& ds, int clients, int shards_per_client,
                            std::uint64_t seed) {
  const int c = ds.classes;
  if (clients < 1) throw ConfigError("clients", "need at least one client");
  if (shards_per_client < 1 || shards_per_client > c)
    throw ConfigError("task.shards_per_client", "shards per client must lie in [1, classes]");
  if ((clients * shards_per_client) % c != 0)
    throw ConfigError("task.shards_per_client",
                      "clients * shards_per_client must be a multiple of the class count");
  const int per_block = clients * shards_per_client / c;

  std::vector<std::vector<std::size_t>> blocks(c);
  for (std::size_t i = 0; i < ds.size(); ++i) blocks[ds.labels[i]].push_back(i);
  std::mt19937_64 gen(seed);
  ShardPlan plan;
  plan.shards_per_client = shards_per_client;
  std::vector<std::vector<int>> label_shards(c);
  for (int label = 0; label < c; ++label) {
    auto& block = blocks[label];
    if (block.empty() || block.size() % per_block != 0)
      throw ConfigError("task.per_class", "class " + std::to_string(label) + " has " +
                                              std::to_string(block.size()) +
                                              " samples, not a multiple of " +
                                              std::to_string(per_block) + " shards");
    std::shuffle(block.begin(), block.end(), gen);
    const std::size_t size = block.size() / per_block;
    for (int s = 0; s < per_block; ++s) {
      label_shards[label].push_back(static_cast<int>(plan.shards.size()));
      plan.shards.emplace_back(block.begin() + s * size, block.begin() + (s + 1) * size);
      plan.shard_label.push_back(label);
    }
  }
  if (plan.shards.size() > 1) {
    const std::size_t size = plan.shards.front().size();
    for (const auto& shard : plan.shards)
      if (shard.size() != size)
        throw ConfigError("task.per_class", "classes must have equal sizes for equal shards");
  }

  // Client k takes labels order[(k d + j) mod C] for j < d: a cyclic run of
  // d distinct labels, and each label is used exactly per_block times.
  std::vector<int> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), gen);
  std::vector<int> next(c, 0);
  plan.assignment.resize(clients);
  for (int k = 0; k < clients; ++k)
    for (int j = 0; j < shards_per_client; ++j) {
      const int label = order[(k * shards_per_client + j) % c];
      plan.assignment[k].push_back(label_shards[label][next[label]++]);
    }
  return plan;
}

std::size_t MlpShape::parameter_count() const noexcept {
  const std::size_t d = dims, h = hidden, c = classes;
  if (h == 0) return c * d + c;
  return h * d + h + c * h + c;
}

MlpModel init_model(const MlpShape& shape, std::uint64_t seed) {
  if (shape.dims < 1 || shape.classes < 2 || shape.hidden < 0)
    throw DomainError("model needs dims >= 1, classes >= 2 and hidden >= 0");
  MlpModel model{shape, std::vector<double>(shape.parameter_count(), 0.0)};
  std::mt19937_64 gen(seed);
  const Layers<double> p = layers(shape, model.params.data());
  auto fill = [&](double* w, std::size_t count, int fan_in) {
    std::uniform_real_distribution<double> u(-1.0 / std::sqrt(fan_in), 1.0 / std::sqrt(fan_in));
    for (std::size_t i = 0; i < count; ++i) w[i] = u(gen);
  };
  const int h = shape.hidden;
  if (h > 0) {
    fill(p.w1, static_cast<std::size_t>(h) * shape.dims, shape.dims);
    fill(p.w2, static_cast<std::size_t>(shape.classes) * h, h);
  } else {
    fill(p.w2, static_cast<std::size_t>(shape.classes) * shape.dims, shape.dims);
  }
  return model;
}

std::vector<double> forward(const MlpModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.shape.dims)
    throw DomainError("input length does not match the model");
  Scratch scratch(model.shape);
  forward_into(model.shape, layers(model.shape, model.params.data()), x.data(), scratch);
  return scratch.scores;
}

double loss_and_gradient(const MlpModel& model, const Dataset& ds,
                         std::span<const std::size_t> indices, std::span<double> grad,
                         Exec exec) {
  require_compatible(model, ds);
  const bool want_grad = !grad.empty();
  if (want_grad && grad.size() != model.params.size())
    throw DomainError("gradient buffer length does not match the model");
  const std::size_t count = indices.empty() ? ds.size() : indices.size();
  if (count == 0) throw DomainError("loss over an empty sample set");
  const BlockResult total = reduce_blocks(model, count, want_grad, exec, [&](std::size_t n) {
    const std::size_t i = indices.empty() ? n : indices[n];
    return std::pair<const double*, int>{ds.row(i).data(), ds.labels[i]};
  });
  const double inv = 1.0 / static_cast<double>(count);
  if (want_grad)
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] = total.grad[j] * inv;
  return total.loss * inv;
}

Evaluation evaluate(const MlpModel& model, const Dataset& ds, Exec exec) {
  require_compatible(model, ds);
  if (ds.size() == 0) return {};
  const BlockResult total = reduce_blocks(model, ds.size(), false, exec, [&](std::size_t n) {
    return std::pair<const double*, int>{ds.row(n).data(), ds.labels[n]};
  });
  const double inv = 1.0 / static_cast<double>(ds.size());
  return {total.loss * inv, total.correct * inv};
}

double global_grad_norm_sq(const MlpModel& model, const Dataset& ds, Exec exec) {
  std::vector<double> grad(model.params.size());
  loss_and_gradient(model, ds, {}, grad, exec);
  double total = 0.0;
  for (double g : grad) total += g * g;
  return total;
}

void local_train(MlpModel& model, const Dataset& shard, const TrainSettings& settings,
                 std::uint64_t seed) {
  if (settings.steps < 0 || settings.batch_size < 1)
    throw DomainError("local training needs steps >= 0 and batch_size >= 1");
  if (settings.steps == 0 || settings.learning_rate == 0.0 || shard.size() == 0) return;
  std::vector<std::size_t> batch(settings.batch_size);
  std::vector<double> grad(model.params.size());
  for (int step = 0; step < settings.steps; ++step) {
    for (int b = 0; b < settings.batch_size; ++b) {
      const double u = keyed_uniform({seed, static_cast<std::uint64_t>(step),
                                      static_cast<std::uint64_t>(b)});
      batch[b] = std::min(shard.size() - 1, static_cast<std::size_t>(u * shard.size()));
    }
    loss_and_gradient(model, shard, batch, grad);
    for (std::size_t j = 0; j < grad.size(); ++j) model.params[j] -= settings.learning_rate * grad[j];
  }
}

}  // namespace awfl
