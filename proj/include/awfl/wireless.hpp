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

// Uplink channel model: distance path loss, optional block Rayleigh fading,
// Shannon rate over a bandwidth share and transmission energy.
//
// All rates are in nats/s (natural logarithm) and the model size is
// converted from bits to nats once, so that energy = P * S_nats / R is
// dimensionally consistent and the Lambert-W bandwidth closed form is exact.

#pragma once

#include <cstdint>
#include <span>

namespace awfl {

struct CellConfig {
  double total_bandwidth_hz = 5e6;          // W
  double noise_density_w_per_hz = 0.0;      // N0, linear
  double model_size_bits = 6.37e6;          // S
  double cell_radius_m = 1000.0;

  double model_size_nats() const;
  // Throws DomainError unless all fields are positive and S >= 1.
  void validate() const;
};

// -174 dBm/Hz -> 10^(-20.4) W/Hz.
double dbm_per_hz_to_w_per_hz(double dbm_per_hz);

struct ClientProfile {
  int id = 1;  // 1..K
  double distance_km = 1.0;
  double tx_power_w = 0.2;
};

void validate_profile(const ClientProfile& profile, const CellConfig& cell);

enum class FadingKind { none, rayleigh };

struct FadingConfig {
  FadingKind kind = FadingKind::none;
};

struct ChannelRealization {
  double gain = 0.0;  // h_{k,t}, linear
  int round = 0;
};

// 128.1 + 37.6 log10(d[km]).
double path_loss_db(double distance_km);

// Unit-mean exponential power factor for (seed, client id, round).
double rayleigh_power_factor(std::uint64_t seed, int client_id, int round);

ChannelRealization channel_gain(const ClientProfile& profile, int round,
                                const FadingConfig& fading, std::uint64_t rng_seed);

// w * W * ln(1 + P h / (w W N0)); zero at w = 0.
double transmission_rate(double w, const CellConfig& cell, double tx_power_w, double gain);

// Sum_k p_k P_k S_nats / R_k for one round.
double expected_round_energy(std::span<const double> p, std::span<const double> w,
                             std::span<const ClientProfile> profiles,
                             std::span<const double> gains, const CellConfig& cell);

// Energy of one upload: P * S_nats / R.
double realized_transmission_energy(double tx_power_w, const CellConfig& cell, double rate);

}  // namespace awfl
