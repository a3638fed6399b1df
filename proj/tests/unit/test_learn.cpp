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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "awfl/error.hpp"
#include "awfl/learn.hpp"
#include "fixtures.hpp"

using namespace awfl;

namespace {

// Straight scalar re-implementation of the forward pass and loss.
double scalar_loss(const MlpModel& m, std::span<const double> x, int label, int* predicted) {
  const int d = m.shape.dims, h = m.shape.hidden, c = m.shape.classes;
  const double* p = m.params.data();
  std::vector<double> in(x.begin(), x.end());
  if (h > 0) {
    std::vector<double> a(h);
    for (int j = 0; j < h; ++j) {
      double z = p[h * d + j];
      for (int i = 0; i < d; ++i) z += p[j * d + i] * x[i];
      a[j] = std::max(z, 0.0);
    }
    in = a;
    p += h * d + h;
  }
  const int n = static_cast<int>(in.size());
  std::vector<double> s(c);
  for (int k = 0; k < c; ++k) {
    s[k] = p[c * n + k];
    for (int i = 0; i < n; ++i) s[k] += p[k * n + i] * in[i];
  }
  *predicted = static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
  double total = 0.0;
  for (double v : s) total += std::exp(v);
  return std::log(total) - s[label];
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

}  // namespace

TEST_CASE("synthetic data") {
  const SyntheticSpec spec{10, 20, 500, 3.0};
  const Dataset a = generate_synthetic(spec, 5);
  CHECK(a.size() == 5000);
  CHECK(a.features == generate_synthetic(spec, 5).features);
  CHECK(a.features != generate_synthetic(spec, 6).features);

  SUBCASE("nearest centroid matches the oracle's accuracy level") {
    const auto oracle = awfl::testing::load_fixture("learn_oracles.json")["nearest_centroid"];
    for (const auto& row : oracle) {
      const SyntheticSpec s{10, 20, 700, row["separation"].get<double>()};
      const TrainTestSplit split = split_train_test(generate_synthetic(s, 11), 2.0 / 7.0, 12);
      std::vector<double> centroid(10 * 20, 0.0);
      std::vector<int> count(10, 0);
      for (std::size_t i = 0; i < split.train.size(); ++i) {
        const int y = split.train.labels[i];
        ++count[y];
        for (int j = 0; j < 20; ++j) centroid[y * 20 + j] += split.train.row(i)[j];
      }
      for (int c = 0; c < 10; ++c)
        for (int j = 0; j < 20; ++j) centroid[c * 20 + j] /= count[c];
      int correct = 0;
      for (std::size_t i = 0; i < split.test.size(); ++i) {
        int best = 0;
        double best_d = INFINITY;
        for (int c = 0; c < 10; ++c) {
          double dist = 0.0;
          for (int j = 0; j < 20; ++j) dist += std::pow(split.test.row(i)[j] - centroid[c * 20 + j], 2);
          if (dist < best_d) best_d = dist, best = c;
        }
        correct += best == split.test.labels[i];
      }
      const double acc = static_cast<double>(correct) / split.test.size();
      CAPTURE(row["separation"].get<double>());
      CHECK(acc >= row["min_accuracy"].get<double>() - 0.05);
      if (row["separation"].get<double>() == 3.0) CHECK(acc >= 0.9);
    }
  }

  SUBCASE("split is a stratified partition") {
    const TrainTestSplit split = split_train_test(a, 0.2, 3);
    CHECK(split.train.size() == 4000);
    CHECK(split.test.size() == 1000);
    for (int c = 0; c < 10; ++c)
      CHECK(std::count(split.test.labels.begin(), split.test.labels.end(), c) == 100);
  }
}

TEST_CASE("non-iid partition") {
  const Dataset ds = generate_synthetic({10, 4, 60, 1.0}, 1);

  SUBCASE("audit: each client holds d distinct labels and shards partition the data") {
    const ShardPlan plan = partition_non_iid(ds, 10, 5, 2);
    std::vector<int> used(plan.shards.size(), 0);
    for (int k = 0; k < 10; ++k) {
      REQUIRE(plan.assignment[k].size() == 5);
      std::set<int> labels;
      for (int s : plan.assignment[k]) {
        labels.insert(plan.shard_label[s]);
        ++used[s];
      }
      CHECK(labels.size() == 5);
    }
    CHECK(std::all_of(used.begin(), used.end(), [](int u) { return u == 1; }));
    CHECK(plan.shards.size() == 50);
    std::vector<int> seen(ds.size(), 0);
    for (std::size_t s = 0; s < plan.shards.size(); ++s) {
      CHECK(plan.shards[s].size() == 12);
      for (std::size_t i : plan.shards[s]) {
        ++seen[i];
        CHECK(ds.labels[i] == plan.shard_label[s]);
      }
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int u) { return u == 1; }));
  }

  SUBCASE("d = C covers every label and d = 1 a single label") {
    const ShardPlan all = partition_non_iid(ds, 10, 10, 3);
    for (int k = 0; k < 10; ++k) {
      std::set<int> labels;
      for (std::size_t i : all.client_indices(k)) labels.insert(ds.labels[i]);
      CHECK(labels.size() == 10);
    }
    const ShardPlan one = partition_non_iid(ds, 10, 1, 3);
    for (int k = 0; k < 10; ++k) {
      std::set<int> labels;
      for (std::size_t i : one.client_indices(k)) labels.insert(ds.labels[i]);
      CHECK(labels.size() == 1);
    }
  }

  SUBCASE("divisibility violations are config errors") {
    CHECK_THROWS_AS(partition_non_iid(ds, 3, 3, 1), ConfigError);
    CHECK_THROWS_AS(partition_non_iid(ds, 70, 1, 1), ConfigError);
  }
}

TEST_CASE("model evaluation") {
  const Dataset ds = generate_synthetic({4, 6, 30, 1.0}, 4);

  SUBCASE("uniform output gives log C") {
    MlpModel m = init_model({6, 0, 10}, 1);
    std::fill(m.params.begin(), m.params.end(), 0.0);
    Dataset ten = generate_synthetic({10, 6, 3, 1.0}, 2);
    CHECK(evaluate(m, ten).loss == doctest::Approx(std::log(10.0)).epsilon(1e-14));
  }

  SUBCASE("matches a scalar forward pass") {
    for (int hidden : {0, 7}) {
      const MlpModel m = init_model({6, hidden, 4}, 9);
      double loss = 0.0;
      int correct = 0;
      for (std::size_t i = 0; i < ds.size(); ++i) {
        int predicted = -1;
        loss += scalar_loss(m, ds.row(i), ds.labels[i], &predicted);
        correct += predicted == ds.labels[i];
      }
      const Evaluation e = evaluate(m, ds);
      CHECK(e.loss == doctest::Approx(loss / ds.size()).epsilon(1e-12));
      CHECK(e.accuracy == doctest::Approx(static_cast<double>(correct) / ds.size()));
    }
  }

  SUBCASE("memorizing one point") {
    const std::vector<std::size_t> first{0};
    const Dataset one = subset(ds, first);
    MlpModel m = init_model({6, 5, 4}, 3);
    for (int i = 0; i < 200; ++i) local_train(m, one, {1, 0.5, 1}, i);
    CHECK(evaluate(m, one).accuracy == 1.0);
  }

  SUBCASE("parallel and serial kernels agree bitwise") {
    const Dataset big = generate_synthetic({10, 20, 100, 1.0}, 8);
    const MlpModel m = init_model({20, 16, 10}, 8);
    std::vector<double> gs(m.params.size()), gp(m.params.size());
    const double ls = loss_and_gradient(m, big, {}, gs, Exec::serial);
    const double lp = loss_and_gradient(m, big, {}, gp, Exec::parallel);
    CHECK(ls == lp);
    CHECK(gs == gp);
    CHECK(evaluate(m, big, Exec::serial).accuracy == evaluate(m, big, Exec::parallel).accuracy);
  }
}

TEST_CASE("gradients match central differences") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    const int hidden = trial % 4 == 0 ? 0 : 3 + trial % 5;
    const MlpShape shape{3 + trial % 3, hidden, 2 + trial % 3};
    const Dataset ds = generate_synthetic({shape.classes, shape.dims, 4, 1.0}, 100 + trial);
    MlpModel m = init_model(shape, 200 + trial);
    std::vector<double> grad(m.params.size());
    loss_and_gradient(m, ds, {}, grad);
    for (std::size_t j = 0; j < m.params.size(); ++j) {
      const double saved = m.params[j];
      m.params[j] = saved + 1e-5;
      const double up = loss_and_gradient(m, ds, {}, {});
      m.params[j] = saved - 1e-5;
      const double down = loss_and_gradient(m, ds, {}, {});
      m.params[j] = saved;
      const double fd = (up - down) / 2e-5;
      CAPTURE(trial);
      CAPTURE(j);
      CHECK((relative_error(grad[j], fd) <= 1e-4 || std::abs(grad[j] - fd) <= 1e-9));
    }
  }
}

TEST_CASE("local training") {
  const Dataset ds = generate_synthetic({3, 5, 20, 1.0}, 31);
  const MlpModel start = init_model({5, 4, 3}, 32);

  SUBCASE("zero steps or zero rate leave the model unchanged") {
    MlpModel m = start;
    local_train(m, ds, {0, 0.1, 10}, 1);
    CHECK(m.params == start.params);
    local_train(m, ds, {5, 0.0, 10}, 1);
    CHECK(m.params == start.params);
  }

  SUBCASE("one step on one sample is minus lr times the gradient") {
    const std::vector<std::size_t> first{3};
    const Dataset one = subset(ds, first);
    MlpModel m = start;
    std::vector<double> grad(m.params.size());
    loss_and_gradient(start, one, {}, grad);
    local_train(m, one, {1, 0.05, 1}, 7);
    for (std::size_t j = 0; j < grad.size(); ++j)
      CHECK(m.params[j] == doctest::Approx(start.params[j] - 0.05 * grad[j]).epsilon(1e-14));
  }

  SUBCASE("deterministic per seed") {
    MlpModel a = start, b = start, c = start;
    local_train(a, ds, {5, 0.1, 4}, 9);
    local_train(b, ds, {5, 0.1, 4}, 9);
    local_train(c, ds, {5, 0.1, 4}, 10);
    CHECK(a.params == b.params);
    CHECK(a.params != c.params);
  }

  SUBCASE("full-batch descent on logistic regression never increases the loss") {
    MlpModel m = init_model({5, 0, 3}, 33);
    double prev = evaluate(m, ds).loss;
    std::vector<double> grad(m.params.size());
    for (int i = 0; i < 50; ++i) {
      loss_and_gradient(m, ds, {}, grad);
      for (std::size_t j = 0; j < grad.size(); ++j) m.params[j] -= 0.05 * grad[j];
      const double loss = evaluate(m, ds).loss;
      CHECK(loss <= prev);
      prev = loss;
    }
  }
}

TEST_CASE("global gradient norm") {
  const Dataset ds = generate_synthetic({3, 4, 10, 1.0}, 41);
  MlpModel m = init_model({4, 0, 3}, 42);
  std::vector<double> grad(m.params.size());
  for (int i = 0; i < 5000; ++i) {
    loss_and_gradient(m, ds, {}, grad);
    for (std::size_t j = 0; j < grad.size(); ++j) m.params[j] -= 2.0 * grad[j];
  }
  CHECK(global_grad_norm_sq(m, ds) < 1e-6);

  const MlpModel r = init_model({4, 6, 3}, 43);
  std::vector<double> g(r.params.size());
  loss_and_gradient(r, ds, {}, g);
  double fd_norm = 0.0;
  MlpModel probe = r;
  for (std::size_t j = 0; j < g.size(); ++j) {
    probe.params[j] = r.params[j] + 1e-6;
    const double up = loss_and_gradient(probe, ds, {}, {});
    probe.params[j] = r.params[j] - 1e-6;
    const double down = loss_and_gradient(probe, ds, {}, {});
    probe.params[j] = r.params[j];
    fd_norm += std::pow((up - down) / 2e-6, 2);
  }
  CHECK(global_grad_norm_sq(r, ds) == doctest::Approx(fd_norm).epsilon(1e-3));
}
