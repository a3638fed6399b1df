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

#include "awfl/wireless.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "awfl/error.hpp"
#include "awfl/rng.hpp"

namespace awfl {

namespace {

constexpr std::uint64_t kFadingTag = 0xfad1'0000'0001ULL;

}  // namespace

double CellConfig::model_size_nats() const { return model_size_bits * std::numbers::ln2; }

void CellConfig::validate() const {
  if (!(total_bandwidth_hz > 0.0)) throw DomainError("total_bandwidth_hz must be positive");
  if (!(noise_density_w_per_hz > 0.0))
    throw DomainError("noise_density_w_per_hz must be positive");
  if (!(model_size_bits >= 1.0)) throw DomainError("model_size_bits must be at least 1");
  if (!(cell_radius_m > 0.0)) throw DomainError("cell_radius_m must be positive");
}

double dbm_per_hz_to_w_per_hz(double dbm_per_hz) {
  return std::pow(10.0, (dbm_per_hz - 30.0) / 10.0);
}

void validate_profile(const ClientProfile& profile, const CellConfig& cell) {
  if (!(profile.distance_km > 0.0) || profile.distance_km * 1000.0 > cell.cell_radius_m)
    throw DomainError("client " + std::to_string(profile.id) +
                      ": distance must lie in (0, cell radius]");
  if (!(profile.tx_power_w > 0.0))
    throw DomainError("client " + std::to_string(profile.id) + ": tx power must be positive");
}

double path_loss_db(double distance_km) {
  if (!(distance_km > 0.0)) throw DomainError("path_loss_db: distance must be positive");
  return 128.1 + 37.6 * std::log10(distance_km);
}

double rayleigh_power_factor(std::uint64_t seed, int client_id, int round) {
  const double u = keyed_uniform({seed, kFadingTag, static_cast<std::uint64_t>(client_id),
                                  static_cast<std::uint64_t>(round)});
  // 1 - u lies in (0, 1], so the log is finite.
  return -std::log1p(-u);
}

ChannelRealization channel_gain(const ClientProfile& profile, int round,
                                const FadingConfig& fading, std::uint64_t rng_seed) {
  double gain = std::pow(10.0, -path_loss_db(profile.distance_km) / 10.0);
  if (fading.kind == FadingKind::rayleigh)
    gain *= rayleigh_power_factor(rng_seed, profile.id, round);
  return {gain, round};
}

double transmission_rate(double w, const CellConfig& cell, double tx_power_w, double gain) {
  if (w <= 0.0) return 0.0;
  const double band = w * cell.total_bandwidth_hz;
  return band * std::log1p(tx_power_w * gain / (band * cell.noise_density_w_per_hz));
}

double realized_transmission_energy(double tx_power_w, const CellConfig& cell, double rate) {
  if (!(rate > 0.0)) throw DomainError("realized_transmission_energy: rate must be positive");
  return tx_power_w * cell.model_size_nats() / rate;
}

double expected_round_energy(std::span<const double> p, std::span<const double> w,
                             std::span<const ClientProfile> profiles,
                             std::span<const double> gains, const CellConfig& cell) {
  if (p.size() != w.size() || p.size() != profiles.size() || p.size() != gains.size())
    throw DomainError("expected_round_energy: length mismatch");
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] == 0.0) continue;
    if (!(w[k] > 0.0))
      throw InfeasiblePlanError("bandwidth",
                                "client " + std::to_string(profiles[k].id) +
                                    " has positive selection probability but zero bandwidth");
    const double rate = transmission_rate(w[k], cell, profiles[k].tx_power_w, gains[k]);
    total += p[k] * realized_transmission_energy(profiles[k].tx_power_w, cell, rate);
  }
  return total;
}

}  // namespace awfl
