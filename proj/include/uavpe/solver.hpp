// Copyright 2026 The uavpe Authors
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

// Log-barrier interior-point solver for ConvexProgram.
//
// Fixed variables and singleton equality rows are eliminated first. A
// phase-I problem (minimize s with every inequality relaxed by s) finds a
// strictly feasible point unless the start already is one; phase II then
// follows the central path with infeasible-start Newton steps on the KKT
// system [H A'; A 0], factored by a sparse LDL' after diagonal scaling.

#pragma once

#include <limits>
#include <string>
#include <vector>

#include "uavpe/model.hpp"
#include "uavpe/program.hpp"

namespace uavpe::opt {

enum class SolveStatus { kOptimal, kInfeasible, kMaxIter };

const char* to_string(SolveStatus status);

struct SolverOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-6;      // relative duality gap
  int max_iterations = 200;   // Newton steps over both phases
  double barrier_growth = 20.0;

  /// Applies UAVPE_SOLVER_MAX_ITER when set (the smaller value wins).
  static SolverOptions from_environment(SolverOptions base);
};

struct Solution {
  SolveStatus status = SolveStatus::kInfeasible;
  std::vector<double> values;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::infinity();  // max primal violation
  double gap = std::numeric_limits<double>::infinity();       // barrier duality gap bound
  int iterations = 0;
  double solve_time = 0.0;  // seconds
  /// Final barrier parameter t; inequality multipliers are 1/(t*(-g)).
  /// Zero when the solution carries no dual information.
  double barrier_parameter = 0.0;
  /// One entry per constraint: equality multipliers in the minimization
  /// form; zero for inequalities and for eliminated singleton rows.
  std::vector<double> equality_multipliers;
  std::string message;

  bool optimal() const { return status == SolveStatus::kOptimal; }
  double value(VarId v) const { return values.at(v); }
};

/// Throws std::logic_error for a malformed program; infeasibility and the
/// iteration cap are reported through Solution::status.
Solution solve(const ConvexProgram& p, const SolverOptions& options = {});

struct KktReport {
  std::vector<double> constraint_violation;  // per constraint, clipped at 0
  std::vector<double> bound_violation;       // per variable, clipped at 0
  double max_violation = 0.0;
  int worst_constraint = -1;  // -1 when the worst violation is a bound (or none)
  bool has_multipliers = false;
  /// Infinity norm of the Lagrangian gradient over non-fixed variables,
  /// minimization form.
  double stationarity = std::numeric_limits<double>::quiet_NaN();
  /// sum of lambda_i * (-g_i) over inequalities (equals the barrier gap).
  double complementarity = std::numeric_limits<double>::quiet_NaN();

  /// Indices of constraints violated by more than tol.
  std::vector<int> violated(double tol) const;
};

KktReport kkt_residuals(const ConvexProgram& p, const Solution& sol);

// Power subproblem oracle -----------------------------------------------

struct PowerSlot {
  LinkConstants link;
  double h2_ed = 0.0;
  double rate_e = 0.0;          // R_E at this pose
  double previous_power = 0.0;  // expansion point P^(j)
  double max_power = 0.0;
};

struct PowerDecision {
  double power = 0.0;
  bool feasible = true;
};

/// Smallest P in [0, max_power] with ub_RD1(P) - R_D2(P) <= R_E, by
/// bisection to absolute tolerance `tol` (W). Returns (max_power, false)
/// when no such P exists.
PowerDecision solve_power_bisection(const PowerSlot& slot, double tol = 1e-9);

/// Left-hand side ub_RD1(P) - R_D2(P) of the success constraint.
double power_constraint_lhs(const PowerSlot& slot, double power);

}  // namespace uavpe::opt
