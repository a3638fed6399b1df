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

#include "awfl/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <boost/math/tools/toms748_solve.hpp>

#include "awfl/lambert_w.hpp"

namespace awfl {

namespace {

constexpr double kRhoMin = 1e-4;
constexpr double kRhoMax = 1.0 - 1e-4;
constexpr double kBandwidthSlack = 1e-9;
constexpr double kTieTolerance = 1e-12;

// Coefficients shared by the offline and online forms of the problem:
//   conv_coeff * sum_k 1/(sum_t p_kt)^2 + sum_{k,t} p_kt e_k / R_kt
// with e_k = P_k S (1 - rho) energy_scale.
struct Form {
  double conv_coeff = 0.0;
  double energy_scale = 1.0;
};

Form offline_form(const ProblemInstance& inst) {
  const double t = inst.rounds();
  return {inst.rho * t * t / inst.clients(), 1.0};
}

Form online_form(const OnlineInstance& inst) {
  return {inst.rho / inst.clients(), static_cast<double>(inst.horizon_rounds)};
}

double energy_coeff(const ProblemInstance& inst, const Form& form, int k) {
  return inst.profiles[k].tx_power_w * inst.cell.model_size_nats() * (1.0 - inst.rho) *
         form.energy_scale;
}

double rate_at(const ProblemInstance& inst, int k, int t, double w) {
  return transmission_rate(w, inst.cell, inst.profiles[k].tx_power_w, inst.gains(k, t));
}

double row_sum(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

void validate_common(double rho, double lambda_min, const CellConfig& cell,
                     const std::vector<ClientProfile>& profiles, std::size_t k_count) {
  if (!(rho >= kRhoMin && rho <= kRhoMax))
    throw DomainError("rho must lie in [1e-4, 1 - 1e-4]");
  if (!(lambda_min > 0.0 && lambda_min <= 1.0))
    throw DomainError("lambda_min must lie in (0, 1]");
  cell.validate();
  if (profiles.size() != k_count || k_count == 0)
    throw DomainError("profile count must equal the number of clients (>= 1)");
  for (const auto& profile : profiles) validate_profile(profile, cell);
}

// p_kt stationary point of the selection subproblem, before clamping.
double unclamped_target_sum(double conv_coeff, double alpha_kt, double e_k) {
  return std::cbrt(2.0 * conv_coeff / (alpha_kt * e_k));
}

double clamp_selection(double value, double lambda_min) {
  return std::clamp(value, lambda_min, 1.0);
}

// Coordinates with equal alpha are interchangeable in the selection
// subproblem; spread their mass evenly so symmetric inputs give symmetric
// outputs. Neither the row sum nor the objective changes.
void equalize_ties(std::span<const double> alpha_row, std::span<double> p_row) {
  const std::size_t n = p_row.size();
  if (n < 2) return;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return alpha_row[a] < alpha_row[b]; });
  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && alpha_row[order[end]] - alpha_row[order[end - 1]] <=
                          kTieTolerance * alpha_row[order[end - 1]])
      ++end;
    if (end - begin > 1) {
      double mass = 0.0;
      for (std::size_t i = begin; i < end; ++i) mass += p_row[order[i]];
      const double share = mass / static_cast<double>(end - begin);
      for (std::size_t i = begin; i < end; ++i) p_row[order[i]] = share;
    }
    begin = end;
  }
}

// Starting point for the sweeps: rounds are filled in order of decreasing
// target sum, so at most one coordinate is strictly inside [lambda, 1].
void ordered_fill(std::span<const double> targets, double lambda, std::span<double> p_row) {
  const std::size_t rounds = p_row.size();
  std::vector<std::size_t> order(rounds);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return targets[a] > targets[b]; });
  std::fill(p_row.begin(), p_row.end(), lambda);
  for (std::size_t j = 0; j < rounds; ++j) {
    const double rest = static_cast<double>(j) + static_cast<double>(rounds - j - 1) * lambda;
    const double share = targets[order[j]] - rest;
    p_row[order[j]] = clamp_selection(share, lambda);
    if (share < 1.0) break;
  }
}

void bcd_row(const ProblemInstance& inst, const Form& form, int k,
             std::span<const double> alpha_row, const SolverSettings& settings,
             std::span<double> p_row) {
  const double lambda = inst.lambda_min;
  const double e_k = energy_coeff(inst, form, k);
  const std::size_t rounds = p_row.size();
  std::vector<double> targets(rounds);
  for (std::size_t t = 0; t < rounds; ++t)
    targets[t] = unclamped_target_sum(form.conv_coeff, alpha_row[t], e_k);
  ordered_fill(targets, lambda, p_row);

  auto update = [&](std::size_t t) {
    const double others = row_sum(p_row) - p_row[t];
    return clamp_selection(unclamped_target_sum(form.conv_coeff, alpha_row[t], e_k) - others,
                           lambda);
  };

  if (rounds == 1) {
    p_row[0] = update(0);
    return;
  }
  double change = std::numeric_limits<double>::infinity();
  int sweep = 0;
  for (; sweep < settings.max_bcd_sweeps; ++sweep) {
    change = 0.0;
    for (std::size_t t = 0; t < rounds; ++t) {
      const double next = update(t);
      change = std::max(change, std::abs(next - p_row[t]));
      p_row[t] = next;
    }
    if (change <= settings.bcd_tol) break;
  }
  if (sweep == settings.max_bcd_sweeps)
    throw SolverError("bcd",
                      "selection BCD for client " + std::to_string(inst.profiles[k].id) +
                          " did not converge",
                      change, std::vector<double>(p_row.begin(), p_row.end()));
  equalize_ties(alpha_row, p_row);
}

struct RoundDual {
  std::vector<double> w;
  double v = 0.0;
};

double allocate(const Grid& alpha, const Grid& beta, const ProblemInstance& inst, int t,
                double v, std::vector<double>& w) {
  double total = 0.0;
  for (int k = 0; k < inst.clients(); ++k) {
    w[k] = optimal_w_closed_form(alpha(k, t), beta(k, t), v, inst.profiles[k].tx_power_w,
                                 inst.gains(k, t), inst.cell);
    total += w[k];
  }
  return total;
}

double lagrangian_value(const Grid& alpha, const Grid& beta, const ProblemInstance& inst, int t,
                        double v, const std::vector<double>& w) {
  double value = v * (1.0 - row_sum(w));
  for (int k = 0; k < inst.clients(); ++k) value += alpha(k, t) * beta(k, t) * rate_at(inst, k, t, w[k]);
  return value;
}

// Projected subgradient on v_t:  v <- [v - step (1 - sum_k w_k(v))]^+ with
// step = c / sqrt(iteration + 1). The iterate is kept inside the bracket of
// multipliers known to over- and under-allocate the band; a proposal that
// leaves the bracket, or an iteration pair that fails to halve it, falls
// back to the bracket midpoint.
RoundDual solve_round_dual(const Grid& alpha, const Grid& beta, const ProblemInstance& inst,
                           int t, const SolverSettings& settings) {
  const int k_count = inst.clients();
  RoundDual out{std::vector<double>(k_count), 0.0};
  double total = allocate(alpha, beta, inst, t, 0.0, out.w);
  if (total <= 1.0 + settings.dual_tol) return out;

  double scale = 0.0;
  for (int k = 0; k < k_count; ++k) scale += alpha(k, t) * beta(k, t);
  scale *= inst.cell.total_bandwidth_hz / k_count;
  const double c = settings.dual_step_scale * scale;

  double v = 0.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double width_prev = hi;
  double width_prev2 = hi;
  for (int iter = 0; iter < settings.max_dual_iterations; ++iter) {
    const double slack = 1.0 - total;
    if (std::abs(slack) <= settings.dual_tol) {
      out.v = v;
      return out;
    }
    if (slack < 0.0)
      lo = v;
    else
      hi = v;
    if (std::isfinite(hi) && hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      // Bracket exhausted at machine precision; hi never over-allocates.
      out.v = hi;
      allocate(alpha, beta, inst, t, hi, out.w);
      return out;
    }
    const double step = c / std::sqrt(iter + 1.0);
    double next = std::max(0.0, v - step * slack);
    if (!std::isfinite(hi)) {
      next = std::max({next, 2.0 * v, c});
    } else {
      const double width = hi - lo;
      if (!(next > lo && next < hi) || width > 0.5 * width_prev2) next = 0.5 * (lo + hi);
      width_prev2 = width_prev;
      width_prev = width;
    }
    v = next;
    total = allocate(alpha, beta, inst, t, v, out.w);
  }

  // Duality gap between the dual bound at v and a feasible rescaling of w.
  std::vector<double> feasible = out.w;
  const double sum = row_sum(feasible);
  if (sum > 1.0)
    for (double& x : feasible) x /= sum;
  const double gap = lagrangian_value(alpha, beta, inst, t, v, out.w) -
                     lagrangian_value(alpha, beta, inst, t, 0.0, feasible);
  throw SolverError("dual", "bandwidth dual for round " + std::to_string(t) + " did not converge",
                    gap, out.w);
}

Residuals residuals_form(const SelectionPlan& p, const BandwidthPlan& w,
                         const AuxiliaryParams& aux, const ProblemInstance& inst,
                         const Form& form) {
  const int k_count = inst.clients();
  const int t_count = inst.rounds();
  Residuals res{Grid(k_count, t_count), Grid(k_count, t_count), std::vector<double>(k_count)};
  for (int k = 0; k < k_count; ++k) {
    const double e_k = energy_coeff(inst, form, k);
    for (int t = 0; t < t_count; ++t) {
      const double rate = rate_at(inst, k, t, w.w(k, t));
      res.psi(k, t) = aux.alpha(k, t) * rate - 1.0;
      res.kappa(k, t) = aux.beta(k, t) * rate - p.p(k, t) * e_k;
    }
    const double mass = row_sum(p.p.row(k));
    res.chi[k] = aux.gamma[k] - form.conv_coeff / (mass * mass);
  }
  return res;
}

// Dimensionless counterpart of the residuals: psi, kappa / (p e) and
// chi / (conv / (sum p)^2). Used as the line-search merit function because
// it does not depend on the units of S, P or W.
double relative_residual_sq(const SelectionPlan& p, const BandwidthPlan& w,
                            const AuxiliaryParams& aux, const ProblemInstance& inst,
                            const Form& form) {
  double total = 0.0;
  const int t_count = inst.rounds();
  for (int k = 0; k < inst.clients(); ++k) {
    const double e_k = energy_coeff(inst, form, k);
    for (int t = 0; t < t_count; ++t) {
      const double rate = rate_at(inst, k, t, w.w(k, t));
      if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
      const double psi = aux.alpha(k, t) * rate - 1.0;
      const double kappa = aux.beta(k, t) * rate / (p.p(k, t) * e_k) - 1.0;
      total += psi * psi + kappa * kappa;
    }
    const double mass = row_sum(p.p.row(k));
    const double chi = aux.gamma[k] * mass * mass / form.conv_coeff - 1.0;
    total += t_count * chi * chi;
  }
  return total;
}

AuxiliaryParams targets_form(const SelectionPlan& p, const BandwidthPlan& w,
                             const ProblemInstance& inst, const Form& form) {
  const int k_count = inst.clients();
  const int t_count = inst.rounds();
  AuxiliaryParams aux{Grid(k_count, t_count), Grid(k_count, t_count),
                      std::vector<double>(k_count)};
  for (int k = 0; k < k_count; ++k) {
    const double e_k = energy_coeff(inst, form, k);
    for (int t = 0; t < t_count; ++t) {
      const double rate = rate_at(inst, k, t, w.w(k, t));
      if (!(rate > 0.0))
        throw SolverError("newton",
                          "zero transmission rate for client " +
                              std::to_string(inst.profiles[k].id) + " in round " +
                              std::to_string(t),
                          0.0);
      aux.alpha(k, t) = 1.0 / rate;
      aux.beta(k, t) = p.p(k, t) * e_k / rate;
    }
    const double mass = row_sum(p.p.row(k));
    aux.gamma[k] = form.conv_coeff / (mass * mass);
  }
  return aux;
}

// Solves one client's selection subproblem for a row of alpha.
using RowSolver =
    std::function<void(int k, std::span<const double> alpha_row, std::span<double> p_row)>;

struct Inner {
  SelectionPlan p;
  BandwidthPlan w;
  DualMultipliers v;
};

SelectionPlan solve_selection(const Grid& alpha, const RowSolver& solve_row, Exec exec) {
  SelectionPlan plan{Grid(alpha.rows(), alpha.cols())};
  for_each_index(static_cast<int>(alpha.rows()), exec,
                 [&](int k) { solve_row(k, alpha.row(k), plan.p.row(k)); });
  return plan;
}

Inner solve_inner(const AuxiliaryParams& aux, const ProblemInstance& inst,
                  const SolverSettings& settings, const RowSolver& solve_row) {
  Inner inner;
  inner.p = solve_selection(aux.alpha, solve_row, settings.exec);
  auto dual = solve_w_dual(aux.alpha, aux.beta, inst, settings);
  inner.w = std::move(dual.w);
  inner.v = std::move(dual.v);
  return inner;
}

bool strictly_positive(const AuxiliaryParams& aux) {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  return std::all_of(aux.alpha.data().begin(), aux.alpha.data().end(), positive) &&
         std::all_of(aux.beta.data().begin(), aux.beta.data().end(), positive) &&
         std::all_of(aux.gamma.begin(), aux.gamma.end(), positive);
}

// Relative residual vector, ordered (psi_kt, kappa_kt) row-major then chi_k
// weighted by sqrt(T) so that its squared norm equals relative_residual_sq.
Eigen::VectorXd relative_residual_vector(const SelectionPlan& p, const BandwidthPlan& w,
                                         const AuxiliaryParams& aux, const ProblemInstance& inst,
                                         const Form& form) {
  const int k_count = inst.clients();
  const int t_count = inst.rounds();
  const int cells = k_count * t_count;
  Eigen::VectorXd r(2 * cells + k_count);
  const double chi_weight = std::sqrt(static_cast<double>(t_count));
  for (int k = 0; k < k_count; ++k) {
    const double e_k = energy_coeff(inst, form, k);
    for (int t = 0; t < t_count; ++t) {
      const double rate = rate_at(inst, k, t, w.w(k, t));
      r(k * t_count + t) = aux.alpha(k, t) * rate - 1.0;
      r(cells + k * t_count + t) = aux.beta(k, t) * rate / (p.p(k, t) * e_k) - 1.0;
    }
    const double mass = row_sum(p.p.row(k));
    r(2 * cells + k) = chi_weight * (aux.gamma[k] * mass * mass / form.conv_coeff - 1.0);
  }
  return r;
}

// Newton point of the relative residual map, with the Jacobian taken
// through the inner solution. Columns are formed by finite differences in
// log-parameters; a perturbation of alpha_kt only re-solves client k's
// selection row and round t's bandwidth, a perturbation of beta_kt only
// round t's bandwidth.
AuxiliaryParams newton_target(const AuxiliaryParams& aux, const Inner& base,
                              const ProblemInstance& inst, const Form& form,
                              const SolverSettings& settings, const RowSolver& solve_row) {
  const int k_count = inst.clients();
  const int t_count = inst.rounds();
  const int cells = k_count * t_count;
  const int n = 2 * cells + k_count;
  constexpr double kRelStep = 1e-6;

  const Eigen::VectorXd r0 = relative_residual_vector(base.p, base.w, aux, inst, form);
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);

  auto column_for = [&](int col, bool is_alpha, int k, int t) {
    AuxiliaryParams moved = aux;
    Grid& target = is_alpha ? moved.alpha : moved.beta;
    const double h = kRelStep * target(k, t);
    target(k, t) += h;
    SelectionPlan p = base.p;
    if (is_alpha) solve_row(k, moved.alpha.row(k), p.p.row(k));
    BandwidthPlan w = base.w;
    RoundDual round = solve_round_dual(moved.alpha, moved.beta, inst, t, settings);
    w.w.set_column(t, round.w);
    const Eigen::VectorXd r = relative_residual_vector(p, w, moved, inst, form);
    // d r / d log(theta) = theta * d r / d theta
    jac.col(col) = (r - r0) * (target(k, t) - h) / h;
  };

  for_each_index(cells, settings.exec, [&](int cell) {
    const int k = cell / t_count;
    const int t = cell % t_count;
    column_for(cell, true, k, t);
    column_for(cells + cell, false, k, t);
  });
  for (int k = 0; k < k_count; ++k) {
    const double mass = row_sum(base.p.p.row(k));
    jac(2 * cells + k, 2 * cells + k) = std::sqrt(static_cast<double>(t_count)) * aux.gamma[k] *
                                        mass * mass / form.conv_coeff;
  }

  const Eigen::VectorXd log_step = jac.colPivHouseholderQr().solve(-r0);
  static constexpr double kMaxLogStep = 4.0;
  auto scale = [](double d) { return std::exp(std::clamp(d, -kMaxLogStep, kMaxLogStep)); };
  AuxiliaryParams target = aux;
  for (int k = 0; k < k_count; ++k) {
    for (int t = 0; t < t_count; ++t) {
      target.alpha(k, t) *= scale(log_step(k * t_count + t));
      target.beta(k, t) *= scale(log_step(cells + k * t_count + t));
    }
    target.gamma[k] *= scale(log_step(2 * cells + k));
  }
  return target;
}

constexpr int kNewtonTrials = 12;

NewtonStep newton_step_form(const AuxiliaryParams& aux, const SelectionPlan& p,
                            const BandwidthPlan& w, const ProblemInstance& inst,
                            const Form& form, const SolverSettings& settings,
                            const RowSolver& solve_row) {
  NewtonStep out;
  out.residual_sq_before = residuals_form(p, w, aux, inst, form).squared_norm();
  const double merit = relative_residual_sq(p, w, aux, inst, form);
  if (out.residual_sq_before == 0.0 || merit == 0.0) {
    out.aux = aux;
    out.p = p;
    out.w = w;
    out.v.v.assign(inst.rounds(), 0.0);
    return out;
  }
  auto search = [&](const AuxiliaryParams& target, int max_l) {
    double step = 1.0;
    for (int l = 1; l <= max_l; ++l) {
      step *= settings.zeta;
      AuxiliaryParams trial = blend(aux, target, step);
      if (!strictly_positive(trial)) continue;
      Inner inner = solve_inner(trial, inst, settings, solve_row);
      const double trial_merit = relative_residual_sq(inner.p, inner.w, trial, inst, form);
      if (trial_merit < merit && trial_merit <= (1.0 - settings.epsilon * step) * merit) {
        out.residual_sq_after = residuals_form(inner.p, inner.w, trial, inst, form).squared_norm();
        out.aux = std::move(trial);
        out.p = std::move(inner.p);
        out.w = std::move(inner.w);
        out.v = std::move(inner.v);
        out.exponent = l;
        out.step = step;
        return true;
      }
    }
    return false;
  };
  if (settings.direction == OuterDirection::newton) {
    const AuxiliaryParams target =
        newton_target(aux, Inner{p, w, {}}, inst, form, settings, solve_row);
    if (search(target, std::min(settings.max_line_search, kNewtonTrials))) return out;
  }
  if (search(targets_form(p, w, inst, form), settings.max_line_search)) return out;
  throw SolverError("line_search",
                    "no step zeta^l with l <= " + std::to_string(settings.max_line_search) +
                        " satisfied the sufficient-decrease condition",
                    out.residual_sq_before);
}

// Per-round bandwidth for fixed selection: minimises sum_k a_k / R_k(w_k)
// over the simplex. The marginal a_k R'_k / R_k^2 is decreasing in w_k, so
// each client's share is a monotone root in log w and the round budget is
// met by a monotone root in the log price.
std::vector<double> min_energy_split(const ProblemInstance& inst, int t,
                                     std::span<const double> weight) {
  const int k_count = inst.clients();
  const double bw = inst.cell.total_bandwidth_hz;
  auto log_marginal = [&](int k, double w) {
    const double b = inst.profiles[k].tx_power_w * inst.gains(k, t) /
                     (bw * inst.cell.noise_density_w_per_hz);
    const double lg = std::log1p(b / w);
    const double rate = w * bw * lg;
    const double slope = bw * (lg - b / (w + b));
    return std::log(weight[k]) + std::log(slope) - 2.0 * std::log(rate);
  };
  boost::math::tools::eps_tolerance<double> tol(52);
  auto share_at = [&](int k, double log_price) {
    if (weight[k] <= 0.0) return 0.0;
    if (log_marginal(k, 1.0) >= log_price) return 1.0;
    std::uintmax_t iters = 200;
    auto f = [&](double u) { return log_marginal(k, std::exp(u)) - log_price; };
    double lo = -1.0;
    while (f(lo) < 0.0) lo *= 2.0;
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, 0.0, tol, iters);
    return std::exp(0.5 * (a + b));
  };
  auto excess = [&](double log_price) {
    double total = -1.0;
    for (int k = 0; k < k_count; ++k) total += share_at(k, log_price);
    return total;
  };
  double lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < k_count; ++k)
    if (weight[k] > 0.0) lo = std::min(lo, log_marginal(k, 1.0));
  std::vector<double> out(k_count, 0.0);
  if (!std::isfinite(lo)) return out;
  double hi = lo + 1.0;
  while (excess(hi) > 0.0) hi = lo + 2.0 * (hi - lo);
  if (excess(lo) <= 0.0) {
    for (int k = 0; k < k_count; ++k) out[k] = share_at(k, lo);
    return out;
  }
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(excess, lo, hi, tol, iters);
  const double log_price = 0.5 * (a + b);
  double total = 0.0;
  for (int k = 0; k < k_count; ++k) total += out[k] = share_at(k, log_price);
  if (total > 1.0)
    for (double& w : out) w /= total;
  return out;
}

// Block-coordinate descent on the original objective: selection rows for
// fixed bandwidth, then bandwidth rounds for fixed selection.
Inner warm_start(const ProblemInstance& inst, const Form& form, const SolverSettings& settings,
                 const RowSolver& solve_row) {
  const int k_count = inst.clients();
  const int t_count = inst.rounds();
  Inner cur{SelectionPlan{Grid(k_count, t_count, 0.5 * (inst.lambda_min + 1.0))},
            BandwidthPlan{Grid(k_count, t_count, 1.0 / k_count)}, DualMultipliers{}};
  Grid inv_rate(k_count, t_count);
  for (int sweep = 0; sweep < settings.max_warm_start_sweeps; ++sweep) {
    for (int k = 0; k < k_count; ++k)
      for (int t = 0; t < t_count; ++t) inv_rate(k, t) = 1.0 / rate_at(inst, k, t, cur.w.w(k, t));
    SelectionPlan p = solve_selection(inv_rate, solve_row, settings.exec);
    BandwidthPlan w{Grid(k_count, t_count)};
    for_each_index(t_count, settings.exec, [&](int t) {
      std::vector<double> weight(k_count);
      for (int k = 0; k < k_count; ++k) weight[k] = p.p(k, t) * energy_coeff(inst, form, k);
      w.w.set_column(t, min_energy_split(inst, t, weight));
    });
    double change = 0.0;
    for (std::size_t i = 0; i < p.p.size(); ++i) {
      change = std::max(change, std::abs(p.p.data()[i] - cur.p.p.data()[i]));
      change = std::max(change, std::abs(w.w.data()[i] - cur.w.w.data()[i]));
    }
    cur.p = std::move(p);
    cur.w = std::move(w);
    if (change <= settings.warm_start_tol) break;
  }
  return cur;
}

template <class Objective>
JointSolution run_outer(const ProblemInstance& inst, const Form& form,
                        const SolverSettings& settings, const RowSolver& solve_row,
                        Objective&& objective) {
  const int k_count = inst.clients();
  const int t_count = inst.rounds();
  JointSolution current;
  if (settings.warm_start) {
    const Inner start = warm_start(inst, form, settings, solve_row);
    current.aux = targets_form(start.p, start.w, inst, form);
  } else {
    const SelectionPlan p0{Grid(k_count, t_count, 0.5 * (inst.lambda_min + 1.0))};
    const BandwidthPlan w0{Grid(k_count, t_count, 1.0 / k_count)};
    current.aux = targets_form(p0, w0, inst, form);
  }
  Inner inner = solve_inner(current.aux, inst, settings, solve_row);
  current.p = std::move(inner.p);
  current.w = std::move(inner.w);
  current.v = std::move(inner.v);
  current.residual_sq = residuals_form(current.p, current.w, current.aux, inst, form).squared_norm();
  current.objective = objective(current.p, current.w);
  current.diagnostics.push_back({0, current.residual_sq, current.objective, 0.0, 0});

  JointSolution best = current;
  double best_merit = relative_residual_sq(current.p, current.w, current.aux, inst, form);
  for (int iter = 1; current.residual_sq > settings.outer_tol; ++iter) {
    if (iter > settings.max_outer_iterations)
      throw JointSolveError("outer",
                            "outer iteration budget exhausted with squared residual " +
                                std::to_string(best.residual_sq),
                            std::move(best));
    NewtonStep step;
    try {
      step = newton_step_form(current.aux, current.p, current.w, inst, form, settings, solve_row);
    } catch (const SolverError& e) {
      throw JointSolveError(e.stage(), e.what(), std::move(best));
    }
    const double previous_objective = current.objective;
    current.aux = std::move(step.aux);
    current.p = std::move(step.p);
    current.w = std::move(step.w);
    current.v = std::move(step.v);
    current.residual_sq = step.residual_sq_after;
    current.objective = objective(current.p, current.w);
    if (current.objective > previous_objective * (1.0 + 1e-12) + 1e-15)
      current.objective_monotone = false;
    current.diagnostics.push_back(
        {iter, current.residual_sq, current.objective, step.step, step.exponent});
    const double merit = relative_residual_sq(current.p, current.w, current.aux, inst, form);
    if (merit < best_merit) {
      best_merit = merit;
      best = current;
    }
  }
  return current;
}

RowSolver offline_row_solver(const ProblemInstance& inst, const Form& form,
                             const SolverSettings& settings) {
  return [&inst, form, &settings](int k, std::span<const double> alpha_row,
                                  std::span<double> p_row) {
    bcd_row(inst, form, k, alpha_row, settings, p_row);
  };
}

}  // namespace

void ProblemInstance::validate() const {
  if (gains.rows() == 0 || gains.cols() == 0)
    throw DomainError("instance needs at least one client and one round");
  validate_common(rho, lambda_min, cell, profiles, gains.rows());
  for (double g : gains.data())
    if (!(g > 0.0)) throw DomainError("channel gains must be positive");
}

void OnlineInstance::validate() const {
  if (gains.empty()) throw DomainError("instance needs at least one client");
  if (horizon_rounds < 1) throw DomainError("horizon_rounds must be at least 1");
  validate_common(rho, lambda_min, cell, profiles, gains.size());
  for (double g : gains)
    if (!(g > 0.0)) throw DomainError("channel gains must be positive");
}

ProblemInstance OnlineInstance::as_single_round() const {
  ProblemInstance inst;
  inst.rho = rho;
  inst.lambda_min = lambda_min;
  inst.cell = cell;
  inst.profiles = profiles;
  inst.gains = Grid(gains.size(), 1);
  inst.gains.set_column(0, gains);
  return inst;
}

void SolverSettings::validate() const {
  if (!(bcd_tol > 0.0 && dual_tol > 0.0 && outer_tol > 0.0))
    throw DomainError("solver tolerances must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(zeta > 0.0 && zeta < 1.0)) throw DomainError("zeta must lie in (0, 1)");
  if (max_bcd_sweeps < 1 || max_dual_iterations < 1 || max_outer_iterations < 1 ||
      max_line_search < 1)
    throw DomainError("iteration limits must be positive");
  if (!(dual_step_scale > 0.0)) throw DomainError("dual_step_scale must be positive");
}

double Residuals::squared_norm() const {
  double total = 0.0;
  for (double x : psi.data()) total += x * x;
  for (double x : kappa.data()) total += x * x;
  const double rounds = static_cast<double>(psi.cols());
  for (double x : chi) total += rounds * x * x;
  return total;
}

void check_feasible(const SelectionPlan& p, const BandwidthPlan& w, const ProblemInstance& inst) {
  const std::size_t k_count = inst.gains.rows();
  const std::size_t t_count = inst.gains.cols();
  if (p.p.rows() != k_count || p.p.cols() != t_count || w.w.rows() != k_count ||
      w.w.cols() != t_count)
    throw InfeasiblePlanError("shape", "plan dimensions do not match the instance");
  for (std::size_t k = 0; k < k_count; ++k)
    for (std::size_t t = 0; t < t_count; ++t) {
      const std::string where = " at client " + std::to_string(inst.profiles[k].id) +
                                ", round " + std::to_string(t);
      const double pk = p.p(k, t);
      if (!(pk >= inst.lambda_min && pk <= 1.0))
        throw InfeasiblePlanError("selection_bounds",
                                  "selection probability outside [lambda, 1]" + where);
      const double wk = w.w(k, t);
      if (!(wk >= 0.0 && wk <= 1.0))
        throw InfeasiblePlanError("bandwidth_bounds", "bandwidth share outside [0, 1]" + where);
      if (wk == 0.0)
        throw InfeasiblePlanError("bandwidth_support",
                                  "positive selection probability with zero bandwidth" + where);
    }
  for (std::size_t t = 0; t < t_count; ++t) {
    double total = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) total += w.w(k, t);
    if (total > 1.0 + kBandwidthSlack)
      throw InfeasiblePlanError("bandwidth_budget",
                                "bandwidth shares exceed the band in round " + std::to_string(t));
  }
}

double objective_p1(const SelectionPlan& p, const BandwidthPlan& w, const ProblemInstance& inst) {
  check_feasible(p, w, inst);
  const Form form = offline_form(inst);
  double convergence = 0.0;
  double energy = 0.0;
  for (int k = 0; k < inst.clients(); ++k) {
    const double mass = row_sum(p.p.row(k));
    convergence += 1.0 / (mass * mass);
    const double e_k = energy_coeff(inst, form, k);
    for (int t = 0; t < inst.rounds(); ++t)
      energy += p.p(k, t) * e_k / rate_at(inst, k, t, w.w(k, t));
  }
  return form.conv_coeff * convergence + energy;
}

double bcd_update_p(int k, int t, std::span<const double> p_row, double alpha_kt,
                    const ProblemInstance& inst) {
  const Form form = offline_form(inst);
  const double others = row_sum(p_row) - p_row[t];
  return clamp_selection(
      unclamped_target_sum(form.conv_coeff, alpha_kt, energy_coeff(inst, form, k)) - others,
      inst.lambda_min);
}

SelectionPlan solve_p_bcd(const Grid& alpha, std::span<const double> gamma,
                          const ProblemInstance& inst, const SolverSettings& settings) {
  (void)gamma;
  const Form form = offline_form(inst);
  return solve_selection(alpha, offline_row_solver(inst, form, settings), settings.exec);
}

double optimal_w_closed_form(double alpha_kt, double beta_kt, double v_t, double tx_power_w,
                             double gain, const CellConfig& cell) {
  const double price_ratio = v_t / (alpha_kt * beta_kt * cell.total_bandwidth_hz);
  if (price_ratio == 0.0) return 1.0;  // A = 1: the stationary point is w = infinity
  const double a = 1.0 + price_ratio;
  const double x = std::max(-std::exp(-a), -std::exp(-1.0));
  // log(1 + b/w) where b = P h / (W N0).
  const double log_ratio = lambert_w0(x) + a;
  const double snr_full_band = tx_power_w * gain / (cell.total_bandwidth_hz * cell.noise_density_w_per_hz);
  const double w = snr_full_band / std::expm1(log_ratio);
  if (!(w == w)) return 1.0;
  return std::clamp(w, 0.0, 1.0);
}

DualSolution solve_w_dual(const Grid& alpha, const Grid& beta, const ProblemInstance& inst,
                          const SolverSettings& settings) {
  const int t_count = inst.rounds();
  DualSolution out{BandwidthPlan{Grid(inst.clients(), t_count)},
                   DualMultipliers{std::vector<double>(t_count)}};
  for_each_index(t_count, settings.exec, [&](int t) {
    RoundDual round = solve_round_dual(alpha, beta, inst, t, settings);
    out.w.w.set_column(t, round.w);
    out.v.v[t] = round.v;
  });
  return out;
}

Residuals residuals(const SelectionPlan& p, const BandwidthPlan& w, const AuxiliaryParams& aux,
                    const ProblemInstance& inst) {
  return residuals_form(p, w, aux, inst, offline_form(inst));
}

double scaled_residual_sq(const SelectionPlan& p, const BandwidthPlan& w,
                          const AuxiliaryParams& aux, const ProblemInstance& inst) {
  return relative_residual_sq(p, w, aux, inst, offline_form(inst));
}

AuxiliaryParams fixed_point_targets(const SelectionPlan& p, const BandwidthPlan& w,
                                    const ProblemInstance& inst) {
  return targets_form(p, w, inst, offline_form(inst));
}

AuxiliaryParams blend(const AuxiliaryParams& from, const AuxiliaryParams& to, double weight) {
  AuxiliaryParams out = from;
  auto mix = [weight](double a, double b) { return (1.0 - weight) * a + weight * b; };
  std::transform(from.alpha.data().begin(), from.alpha.data().end(), to.alpha.data().begin(),
                 out.alpha.data().begin(), mix);
  std::transform(from.beta.data().begin(), from.beta.data().end(), to.beta.data().begin(),
                 out.beta.data().begin(), mix);
  std::transform(from.gamma.begin(), from.gamma.end(), to.gamma.begin(), out.gamma.begin(), mix);
  return out;
}

NewtonStep newton_step(const AuxiliaryParams& aux, const SelectionPlan& p,
                       const BandwidthPlan& w, const ProblemInstance& inst,
                       const SolverSettings& settings) {
  const Form form = offline_form(inst);
  return newton_step_form(aux, p, w, inst, form, settings,
                          offline_row_solver(inst, form, settings));
}

JointSolution solve_joint(const ProblemInstance& inst, const SolverSettings& settings) {
  inst.validate();
  settings.validate();
  const Form form = offline_form(inst);
  return run_outer(
      inst, form, settings, offline_row_solver(inst, form, settings),
      [&](const SelectionPlan& p, const BandwidthPlan& w) { return objective_p1(p, w, inst); });
}

double objective_online(std::span<const double> p, std::span<const double> w,
                        const OnlineInstance& inst) {
  const ProblemInstance single = inst.as_single_round();
  SelectionPlan plan_p{Grid(p.size(), 1)};
  plan_p.p.set_column(0, p);
  BandwidthPlan plan_w{Grid(w.size(), 1)};
  plan_w.w.set_column(0, w);
  check_feasible(plan_p, plan_w, single);
  const Form form = online_form(inst);
  double total = 0.0;
  for (int k = 0; k < inst.clients(); ++k) {
    total += form.conv_coeff / (p[k] * p[k]);
    total += p[k] * energy_coeff(single, form, k) / rate_at(single, k, 0, w[k]);
  }
  return total;
}

double online_p_closed_form(int k, double alpha_k, const OnlineInstance& inst) {
  const double denom = inst.clients() * alpha_k * inst.profiles[k].tx_power_w *
                       inst.cell.model_size_nats() * inst.horizon_rounds * (1.0 - inst.rho);
  return clamp_selection(std::cbrt(2.0 * inst.rho / denom), inst.lambda_min);
}

OnlineSolution solve_online(const OnlineInstance& inst, const SolverSettings& settings) {
  inst.validate();
  settings.validate();
  const ProblemInstance single = inst.as_single_round();
  const Form form = online_form(inst);
  RowSolver solve_row = [&inst](int k, std::span<const double> alpha_row,
                                std::span<double> p_row) {
    p_row[0] = online_p_closed_form(k, alpha_row[0], inst);
  };
  auto objective = [&](const SelectionPlan& p, const BandwidthPlan& w) {
    return objective_online(p.p.column(0), w.w.column(0), inst);
  };
  JointSolution joint = run_outer(single, form, settings, solve_row, objective);
  OnlineSolution out;
  out.p = joint.p.p.column(0);
  out.w = joint.w.w.column(0);
  out.aux = std::move(joint.aux);
  out.v = joint.v.v.at(0);
  out.diagnostics = std::move(joint.diagnostics);
  out.residual_sq = joint.residual_sq;
  out.objective = joint.objective;
  return out;
}

}  // namespace awfl
