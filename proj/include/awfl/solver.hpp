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

// Joint selection-probability / bandwidth optimizer.
//
// The offline problem minimizes, over p (K x T) and w (K x T),
//
//   rho T^2 / K * sum_k (1 / sum_t p_kt)^2
//     + (1 - rho) * sum_{k,t} p_kt P_k S / R_kt(w_kt)
//
// subject to sum_k w_kt <= 1, 0 <= w_kt <= 1 and lambda <= p_kt <= 1. The
// sum-of-ratios energy term is handled by the parameterized subtractive
// form with auxiliary parameters (alpha, beta, gamma): for fixed parameters
// the problem splits into one convex selection problem per client (solved
// by block coordinate descent) and one convex bandwidth problem per round
// (solved through its Lagrangian dual with a Lambert-W closed form for w).
// An outer damped Newton iteration drives the parameters to the fixed point
//
//   alpha_kt R_kt = 1,  beta_kt R_kt = p_kt P_k S (1 - rho),
//   gamma_k = rho T^2 / (K (sum_t p_kt)^2),
//
// at which the inner solution is a stationary point of the original problem.
// By default the parameters start from the plan found by block-coordinate
// descent on the original objective.
//
// The online variant fixes p_kt = p_k over the horizon and re-solves from
// the current round's channel gains only.

#pragma once

#include <span>
#include <vector>

#include "awfl/error.hpp"
#include "awfl/exec.hpp"
#include "awfl/grid.hpp"
#include "awfl/wireless.hpp"

namespace awfl {

struct ProblemInstance {
  double rho = 0.5;          // tradeoff weight, in [1e-4, 1 - 1e-4]
  double lambda_min = 0.05;  // selection floor, in (0, 1]
  CellConfig cell;
  std::vector<ClientProfile> profiles;  // K entries
  Grid gains;                           // K x T channel gains

  int clients() const noexcept { return static_cast<int>(gains.rows()); }
  int rounds() const noexcept { return static_cast<int>(gains.cols()); }
  void validate() const;
};

// Single-round instance for the online solver. `horizon_rounds` is the T
// that weights the energy term.
struct OnlineInstance {
  double rho = 0.5;
  double lambda_min = 0.05;
  int horizon_rounds = 1;
  CellConfig cell;
  std::vector<ClientProfile> profiles;
  std::vector<double> gains;  // current h_k

  int clients() const noexcept { return static_cast<int>(gains.size()); }
  void validate() const;
  // The same data as a K x 1 offline instance.
  ProblemInstance as_single_round() const;
};

struct SelectionPlan {
  Grid p;
};

struct BandwidthPlan {
  Grid w;
};

struct AuxiliaryParams {
  Grid alpha;
  Grid beta;
  std::vector<double> gamma;
};

struct DualMultipliers {
  std::vector<double> v;
};

// How the outer loop picks the point it blends the auxiliary parameters
// toward. `fixed_point` uses the targets (1/R, pPS(1-rho)/R,
// rho T^2/(K (sum p)^2)) of the current plan directly. `newton` uses the
// Newton point of the scaled residual map, with the inner solutions'
// response in the Jacobian, and falls back to `fixed_point` when the line
// search rejects it.
enum class OuterDirection { fixed_point, newton };

struct SolverSettings {
  double bcd_tol = 1e-9;      // max coordinate change per sweep
  double dual_tol = 1e-12;    // |1 - sum_k w_kt|
  double outer_tol = 1e-8;    // squared residual norm
  int max_bcd_sweeps = 100000;
  int max_dual_iterations = 2000;
  int max_outer_iterations = 500;
  int max_line_search = 60;   // l_max
  double epsilon = 0.1;       // sufficient-decrease constant, (0, 1)
  double zeta = 0.5;          // line-search base, (0, 1)
  double dual_step_scale = 0.1;
  OuterDirection direction = OuterDirection::newton;
  // Seed the auxiliary parameters from a block-coordinate descent on the
  // original objective instead of from the midpoint plan.
  bool warm_start = true;
  int max_warm_start_sweeps = 5000;
  double warm_start_tol = 1e-13;
  Exec exec = Exec::serial;

  void validate() const;
};

// Per-iteration outer loop record.
struct OuterRecord {
  int iteration = 0;
  double residual_sq = 0.0;
  double objective = 0.0;
  double step = 0.0;  // zeta^l of the accepted step; 0 for the initial point
  int line_search_trials = 0;
};

struct Residuals {
  Grid psi;                 // alpha R - 1
  Grid kappa;               // beta R - p P S (1 - rho)
  std::vector<double> chi;  // gamma - rho T^2 / (K (sum_t p)^2)

  // sum over (k, t) of psi^2 + kappa^2 + chi_k^2; chi_k is counted once per
  // round, matching the double sum of the line-search condition.
  double squared_norm() const;
};

// Throws InfeasiblePlanError naming the first violated constraint.
void check_feasible(const SelectionPlan& p, const BandwidthPlan& w, const ProblemInstance& inst);

double objective_p1(const SelectionPlan& p, const BandwidthPlan& w, const ProblemInstance& inst);

// Exact minimizer of the per-client selection subproblem in coordinate t
// with the other coordinates of `p_row` held fixed, clamped to [lambda, 1].
double bcd_update_p(int k, int t, std::span<const double> p_row, double alpha_kt,
                    const ProblemInstance& inst);

// Cyclic coordinate descent on every client's selection subproblem. gamma
// enters the subproblem only as a constant and does not affect the result.
SelectionPlan solve_p_bcd(const Grid& alpha, std::span<const double> gamma,
                          const ProblemInstance& inst, const SolverSettings& settings);

// Maximizer over w in [0, 1] of alpha beta R(w) - v w.
double optimal_w_closed_form(double alpha_kt, double beta_kt, double v_t, double tx_power_w,
                             double gain, const CellConfig& cell);

struct DualSolution {
  BandwidthPlan w;
  DualMultipliers v;
};

// Per-round bandwidth allocation by projected subgradient steps on the
// dual multiplier.
DualSolution solve_w_dual(const Grid& alpha, const Grid& beta, const ProblemInstance& inst,
                          const SolverSettings& settings);

Residuals residuals(const SelectionPlan& p, const BandwidthPlan& w, const AuxiliaryParams& aux,
                    const ProblemInstance& inst);

// Squared norm of the dimensionless residuals (alpha R - 1,
// beta R / (p P S (1 - rho)) - 1, gamma K (sum p)^2 / (rho T^2) - 1), with
// the last term counted once per round. This is the line-search merit.
double scaled_residual_sq(const SelectionPlan& p, const BandwidthPlan& w,
                          const AuxiliaryParams& aux, const ProblemInstance& inst);

// The fixed-point parameters implied by a plan: (1/R, p P S (1 - rho)/R,
// rho T^2 / (K (sum p)^2)).
AuxiliaryParams fixed_point_targets(const SelectionPlan& p, const BandwidthPlan& w,
                                    const ProblemInstance& inst);

// (1 - weight) * from + weight * to, elementwise.
AuxiliaryParams blend(const AuxiliaryParams& from, const AuxiliaryParams& to, double weight);

struct NewtonStep {
  AuxiliaryParams aux;
  SelectionPlan p;  // inner solution at `aux`
  BandwidthPlan w;
  DualMultipliers v;
  int exponent = 0;  // accepted l
  double step = 0.0;  // zeta^l
  double residual_sq_before = 0.0;
  double residual_sq_after = 0.0;
};

// One damped update of the auxiliary parameters. (p, w) must be the inner
// solution at `aux`. Each trial step re-solves the inner problems and is
// accepted once the scaled squared residual (alpha R - 1,
// beta R / (p P S (1 - rho)) - 1, gamma (sum p)^2 K / (rho T^2) - 1) falls
// by the factor (1 - epsilon zeta^l). Throws SolverError("line_search", ...)
// if no l <= max_line_search qualifies.
NewtonStep newton_step(const AuxiliaryParams& aux, const SelectionPlan& p,
                       const BandwidthPlan& w, const ProblemInstance& inst,
                       const SolverSettings& settings);

struct JointSolution {
  SelectionPlan p;
  BandwidthPlan w;
  AuxiliaryParams aux;
  DualMultipliers v;
  std::vector<OuterRecord> diagnostics;
  double residual_sq = 0.0;
  double objective = 0.0;
  // False if the objective ever increased between accepted outer steps.
  bool objective_monotone = true;
};

// Thrown when the outer loop exhausts its budget or its line search fails.
// Carries the iterate with the smallest residual seen.
class JointSolveError : public SolverError {
 public:
  JointSolveError(const std::string& stage, const std::string& what, JointSolution best)
      : SolverError(stage, what, best.residual_sq), best_(std::move(best)) {}
  const JointSolution& best() const noexcept { return best_; }

 private:
  JointSolution best_;
};

JointSolution solve_joint(const ProblemInstance& inst, const SolverSettings& settings);

// Online objective: rho/K sum 1/p_k^2 + (1 - rho) T sum p_k P_k S / R_k.
double objective_online(std::span<const double> p, std::span<const double> w,
                        const OnlineInstance& inst);

// Selection probability minimizing the online subproblem for client k:
// [(2 rho / (K alpha_k P_k S T (1 - rho)))^(1/3)] clamped to [lambda, 1].
double online_p_closed_form(int k, double alpha_k, const OnlineInstance& inst);

struct OnlineSolution {
  std::vector<double> p;
  std::vector<double> w;
  AuxiliaryParams aux;  // K x 1
  double v = 0.0;
  std::vector<OuterRecord> diagnostics;
  double residual_sq = 0.0;
  double objective = 0.0;
};

OnlineSolution solve_online(const OnlineInstance& inst, const SolverSettings& settings);

}  // namespace awfl
