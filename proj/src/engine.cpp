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

#include "awfl/engine.hpp"

#include <algorithm>
#include <string>

#include "awfl/error.hpp"

namespace awfl {

namespace {

constexpr std::uint64_t kSelectionTag = 0x5e1e'c700'0001ULL;
constexpr std::uint64_t kTrainTag = 0x7a41'0000'0001ULL;

}  // namespace

std::vector<double> pseudo_gradient(const ClientState& client) {
  if (client.local_model.size() != client.last_global.size())
    throw DomainError("pseudo_gradient: local and reference models differ in length");
  std::vector<double> delta(client.local_model.size());
  for (std::size_t i = 0; i < delta.size(); ++i)
    delta[i] = client.local_model[i] - client.last_global[i];
  return delta;
}

void aggregate_global(ServerState& server, std::span<const ClientDelta> deltas, int clients,
                      AggregationDivisor divisor) {
  ++server.round;
  if (deltas.empty()) return;
  const std::size_t n = server.global_model.size();
  for (const ClientDelta& d : deltas)
    if (d.delta.size() != n) throw DomainError("aggregate_global: delta length mismatch");
  const double by = divisor == AggregationDivisor::total_clients
                        ? static_cast<double>(clients)
                        : static_cast<double>(deltas.size());
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const ClientDelta& d : deltas) sum += d.delta[i];
    server.global_model[i] += sum / by;
  }
}

std::vector<int> sample_selection(std::span<const double> p, int round, std::uint64_t seed,
                                  std::span<const int> force_cap,
                                  std::span<const int> rounds_since_comm) {
  if (!force_cap.empty() && (force_cap.size() != p.size() || rounds_since_comm.size() != p.size()))
    throw DomainError("sample_selection: cap vectors must have one entry per client");
  std::vector<int> out;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double u = keyed_uniform({seed, kSelectionTag, static_cast<std::uint64_t>(k),
                                    static_cast<std::uint64_t>(round)});
    const bool forced = !force_cap.empty() && rounds_since_comm[k] >= force_cap[k];
    if (u < p[k] || forced) out.push_back(static_cast<int>(k));
  }
  return out;
}

Simulation::Simulation(const Task& task, Policy& policy, Environment env,
                       EngineSettings settings)
    : task_(task), policy_(policy), env_(std::move(env)), settings_(std::move(settings)) {
  const int k_count = task_.clients();
  if (static_cast<int>(env_.profiles.size()) != k_count)
    throw ConfigError("clients", "client profiles and task disagree on the number of clients");
  if (!settings_.force_cap.empty() && static_cast<int>(settings_.force_cap.size()) != k_count)
    throw ConfigError("engine.force_cap", "force_cap needs one entry per client");
  if (settings_.eval_every < 1) throw ConfigError("engine.eval_every", "eval_every must be >= 1");
  server_.global_model = task_.initial_model(settings_.seeds.init);
  clients_.assign(k_count, ClientState{server_.global_model, server_.global_model, -1, 0});
  trace_.client_energy_j.assign(k_count, 0.0);
  trace_.client_uploads.assign(k_count, 0);
  trace_.client_max_interval.assign(k_count, 0);
  trace_.client_mean_p.assign(k_count, 0.0);
  trace_.initial = task_.evaluate(server_.global_model, settings_.exec);
  trace_.final = trace_.initial;
}

const RoundMetrics& Simulation::run_round() {
  const int round = server_.round;
  const int k_count = task_.clients();

  for (ClientState& c : clients_) ++c.rounds_since_comm;
  for_each_index(k_count, settings_.exec, [&](int k) {
    task_.local_update(k, clients_[k].local_model,
                       hash_key({settings_.seeds.data, kTrainTag, static_cast<std::uint64_t>(k),
                                 static_cast<std::uint64_t>(round)}));
  });

  std::vector<double> gains(k_count);
  for (int k = 0; k < k_count; ++k)
    gains[k] = channel_gain(env_.profiles[k], round, env_.fading, settings_.seeds.fading).gain;
  const RoundContext ctx{round, settings_.rounds, &env_.cell, env_.profiles, gains};
  const PolicyDecision decision = policy_.decide(ctx);
  if (static_cast<int>(decision.p.size()) != k_count ||
      static_cast<int>(decision.w.size()) != k_count)
    throw DomainError("policy " + policy_.name() + " returned a decision of the wrong size");

  std::vector<int> since(k_count);
  for (int k = 0; k < k_count; ++k) since[k] = clients_[k].rounds_since_comm;
  const std::vector<int> selected =
      sample_selection(decision.p, round, settings_.seeds.selection, settings_.force_cap, since);

  RoundMetrics m;
  m.round = round;
  m.expected_energy_j =
      expected_round_energy(decision.p, decision.w, env_.profiles, gains, env_.cell);
  for (int k = 0; k < k_count; ++k) {
    m.mean_p += decision.p[k] / k_count;
    trace_.client_mean_p[k] += decision.p[k];
  }

  std::vector<ClientDelta> deltas;
  deltas.reserve(selected.size());
  for (int k : selected) {
    const double rate =
        transmission_rate(decision.w[k], env_.cell, env_.profiles[k].tx_power_w, gains[k]);
    const double energy = realized_transmission_energy(env_.profiles[k].tx_power_w, env_.cell, rate);
    m.realized_energy_j += energy;
    trace_.client_energy_j[k] += energy;
    ++trace_.client_uploads[k];
    deltas.push_back({k, pseudo_gradient(clients_[k])});
    m.participants.push_back(env_.profiles[k].id);
  }
  aggregate_global(server_, deltas, k_count, settings_.divisor);

  for (int k : selected) {
    ClientState& c = clients_[k];
    c.local_model = server_.global_model;
    c.last_global = server_.global_model;
    trace_.client_max_interval[k] =
        std::max(trace_.client_max_interval[k], round - c.last_comm_round);
    c.last_comm_round = round;
    c.rounds_since_comm = 0;
  }

  trace_.total_energy_j += m.realized_energy_j;
  m.cum_energy_j = trace_.total_energy_j;
  const bool last = settings_.rounds > 0 && server_.round >= settings_.rounds;
  if (server_.round % settings_.eval_every == 0 || last) {
    const TaskMetrics eval = task_.evaluate(server_.global_model, settings_.exec);
    m.evaluated = true;
    m.train_loss = eval.train_loss;
    m.test_accuracy = eval.test_accuracy;
    m.grad_norm_sq = eval.grad_norm_sq;
    trace_.final = eval;
  }
  trace_.rounds.push_back(std::move(m));
  return trace_.rounds.back();
}

void Simulation::run(int rounds) {
  for (int r = 0; r < rounds; ++r) run_round();
}

RunTrace run_training(const Task& task, Policy& policy, const Environment& env,
                      const EngineSettings& settings) {
  Simulation sim(task, policy, env, settings);
  sim.run(settings.rounds);
  RunTrace trace = sim.take_trace();
  if (!trace.rounds.empty())
    for (double& p : trace.client_mean_p) p /= static_cast<double>(trace.rounds.size());
  return trace;
}

}  // namespace awfl
