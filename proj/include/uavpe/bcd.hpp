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

// Block coordinate descent drivers: the 2D scheme (trajectory, power), the
// 3D scheme (horizontal, vertical, power) and the two single-block
// benchmarks.
//
// Theta is the average eavesdropping rate under the success rule. An
// iteration whose Theta falls more than `monotone_slack` below the previous
// value is retried with the trajectory pulled back towards the previous one;
// if that fails the previous iterate is kept and the run stops.

#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavpe/kinematics.hpp"
#include "uavpe/model.hpp"
#include "uavpe/plan.hpp"
#include "uavpe/scenario.hpp"
#include "uavpe/solver.hpp"

namespace uavpe {

enum class Scheme { kProposed2D, kProposed3D, kFpot, kOpft };

const char* to_string(Scheme scheme);

enum class InitialPower { kMax, kZero };
enum class PowerMethod { kBisection, kGeneric };

struct BcdOptions {
  int max_iterations = 30;
  /// Stopping tolerance on |Theta change|; negative means Scenario::tolerance.
  double epsilon = -1.0;
  double monotone_slack = 1e-6;
  int backtracks = 6;
  double success_tolerance = 1e-9;
  InitialPower initial_power = InitialPower::kZero;
  PowerMethod power_method = PowerMethod::kBisection;
  /// FPOT jamming level; negative means Scenario::max_jamming_power.
  double fixed_power = -1.0;
  opt::SolverOptions solver;
  /// Optional warm start replacing the straight line and initial power.
  std::optional<TrajectoryPlan> initial_plan;
  std::optional<JammingSchedule> initial_schedule;
  /// One line per BCD step when set.
  std::ostream* log = nullptr;
  /// Program dumps (one file per subproblem and iteration) when non-empty.
  std::string dump_dir;
};

struct IterationRecord {
  int iteration = 0;
  double theta = 0.0;
  bool accepted = true;
  int backtracks = 0;
  std::string statuses;     // e.g. "horizontal=optimal power=ok"
  double residual = 0.0;    // worst solver residual of the step
};

struct RunResult {
  Scheme scheme = Scheme::kProposed2D;
  std::vector<double> theta_trace;  // entry 0 is the starting point
  std::vector<IterationRecord> records;
  TrajectoryPlan plan;
  JammingSchedule schedule;
  std::vector<SlotRates> rates;
  std::vector<double> horizontal_power;
  std::vector<double> vertical_power;
  std::vector<int> infeasible_slots;
  bool converged = false;
  int iterations = 0;
  std::string stop_reason;
  double wall_time = 0.0;  // seconds

  double theta() const { return theta_trace.empty() ? 0.0 : theta_trace.back(); }
};

/// Raised when the very first subproblem cannot be solved.
class BcdError : public std::runtime_error {
 public:
  BcdError(const std::string& what, std::string dump) : std::runtime_error(what), dump_(std::move(dump)) {}
  const std::string& dump() const { return dump_; }

 private:
  std::string dump_;
};

struct PowerStep {
  JammingSchedule schedule;
  std::vector<int> infeasible_slots;
  int generic_fallbacks = 0;  // slots where the generic solve did not converge
};

/// One SCA power update for every slot of `plan`, expanded at `previous`.
/// A slot whose surrogate constraint has no solution keeps P_E^max; it is
/// flagged only if the exact success constraint also fails there.
PowerStep power_update(const Scenario& s, const TrajectoryPlan& plan, const JammingSchedule& previous,
                       PowerMethod method, const opt::SolverOptions& solver = {});

RunResult run_algorithm1(const Scenario& s, const BcdOptions& options = {});
RunResult run_algorithm2(const Scenario& s, const BcdOptions& options = {});
RunResult run_benchmark(const Scenario& s, Scheme scheme, const BcdOptions& options = {});
RunResult run_scheme(const Scenario& s, Scheme scheme, const BcdOptions& options = {});

/// Per-slot rates, powers and flags for a final iterate.
void finalize_result(const Scenario& s, RunResult* r, double success_tolerance);

}  // namespace uavpe
