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

// Asynchronous federated learning protocol simulator.
//
// Each round: every client runs its local iterations from its own model;
// the policy returns selection probabilities and bandwidth shares; each
// client independently uploads its pseudo-gradient x_k - y_k with its
// probability; the server adds the sum of received pseudo-gradients divided
// by K; and only the uploaders receive the new global model, resetting both
// their local model and their reference copy y_k to it.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "awfl/exec.hpp"
#include "awfl/rng.hpp"
#include "awfl/wireless.hpp"

namespace awfl {

struct ClientState {
  std::vector<double> local_model;  // x_k
  std::vector<double> last_global;  // y_k, the last model received
  int last_comm_round = -1;         // -1: only the initial model so far
  int rounds_since_comm = 0;        // rounds started since the last receipt
};

struct ServerState {
  std::vector<double> global_model;
  int round = 0;
};

// x_k - y_k. Throws DomainError on a length mismatch.
std::vector<double> pseudo_gradient(const ClientState& client);

enum class AggregationDivisor {
  total_clients,  // 1/K, the protocol as specified
  participants,   // 1/|C_t|; an alternative, not the protocol default
};

struct ClientDelta {
  int client = 0;  // 0-based
  std::vector<double> delta;
};

// x += (sum of deltas) / K, or / |C_t| for `participants`. Advances the
// round counter. Throws DomainError on a length mismatch.
void aggregate_global(ServerState& server, std::span<const ClientDelta> deltas, int clients,
                      AggregationDivisor divisor = AggregationDivisor::total_clients);

// Independent Bernoulli(p_k) draws keyed by (seed, k, round). When
// `force_cap` is non-empty, client k is also selected whenever
// rounds_since_comm[k] >= force_cap[k]. Returns sorted 0-based ids.
std::vector<int> sample_selection(std::span<const double> p, int round, std::uint64_t seed,
                                  std::span<const int> force_cap = {},
                                  std::span<const int> rounds_since_comm = {});

struct TaskMetrics {
  double train_loss = 0.0;
  double test_accuracy = 0.0;
  double grad_norm_sq = 0.0;
};

// Learning problem seen by the engine: a flat parameter vector, a local
// update rule per client and a global evaluation.
class Task {
 public:
  virtual ~Task() = default;
  virtual int clients() const = 0;
  virtual std::size_t parameter_count() const = 0;
  virtual std::vector<double> initial_model(std::uint64_t seed) const = 0;
  // Must be safe to call concurrently for different clients.
  virtual void local_update(int client, std::vector<double>& model, std::uint64_t seed) const = 0;
  virtual TaskMetrics evaluate(std::span<const double> model, Exec exec) const = 0;
};

struct RoundContext {
  int round = 0;
  int horizon = 0;  // T
  const CellConfig* cell = nullptr;
  std::span<const ClientProfile> profiles;
  std::span<const double> gains;  // h_{k,t} of this round
};

struct PolicyDecision {
  std::vector<double> p;
  std::vector<double> w;
  bool deterministic = false;  // p is 0/1
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual PolicyDecision decide(const RoundContext& ctx) = 0;
};

struct Environment {
  CellConfig cell;
  std::vector<ClientProfile> profiles;
  FadingConfig fading;
};

struct EngineSettings {
  int rounds = 100;
  AggregationDivisor divisor = AggregationDivisor::total_clients;
  std::vector<int> force_cap;  // empty: no cap
  SeedSet seeds;
  Exec exec = Exec::serial;
  int eval_every = 1;  // evaluate the global model every n rounds and at the end
};

struct RoundMetrics {
  int round = 0;
  std::vector<int> participants;  // 1-based client ids
  double expected_energy_j = 0.0;
  double realized_energy_j = 0.0;
  double cum_energy_j = 0.0;
  double mean_p = 0.0;
  bool evaluated = false;
  double train_loss = 0.0;
  double test_accuracy = 0.0;
  double grad_norm_sq = 0.0;
};

struct RunTrace {
  std::vector<RoundMetrics> rounds;
  std::vector<double> client_energy_j;
  std::vector<int> client_uploads;
  // Longest gap in rounds between consecutive receipts of the global model,
  // counting the initial model as received at round -1. Zero if none.
  std::vector<int> client_max_interval;
  // Sum of p_k over rounds; run_training divides it by the round count.
  std::vector<double> client_mean_p;
  TaskMetrics initial;
  TaskMetrics final;
  double total_energy_j = 0.0;
};

// Owns the client and server states of one run.
class Simulation {
 public:
  Simulation(const Task& task, Policy& policy, Environment env, EngineSettings settings);

  const ServerState& server() const noexcept { return server_; }
  const std::vector<ClientState>& clients() const noexcept { return clients_; }
  const RunTrace& trace() const noexcept { return trace_; }
  RunTrace take_trace() { return std::move(trace_); }

  // Runs one protocol round and appends its metrics to the trace.
  const RoundMetrics& run_round();
  void run(int rounds);

 private:
  const Task& task_;
  Policy& policy_;
  Environment env_;
  EngineSettings settings_;
  ServerState server_;
  std::vector<ClientState> clients_;
  RunTrace trace_;
};

RunTrace run_training(const Task& task, Policy& policy, const Environment& env,
                      const EngineSettings& settings);

}  // namespace awfl
