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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uavpe/plan.hpp"
#include "uavpe/scenario.hpp"

namespace uavpe {

enum class FlightMode {
  k2D,  // altitude pinned at Scenario::fixed_height
  k3D,  // altitude is a decision variable between min_height and max_height
};

/// Straight line from the start toward the end point,
///   q[n] = q_I + n/(N+1) (q_F - q_I),  z[n] = H_I + n/(N+1) (H_F - H_I),
/// flown at constant velocity with zero acceleration. In 2D mode the
/// altitude stays at Scenario::fixed_height. Note that with the N+1
/// denominator the last pose stops one step short of q_F.
TrajectoryPlan initial_trajectory(const Scenario& s, FlightMode mode = FlightMode::k2D);

/// One violated constraint.
struct Violation {
  std::string constraint;  // e.g. "horizontal_speed", "endpoint_start"
  int slot = -1;           // -1 for aggregate constraints (budgets)
  double magnitude = 0.0;  // amount by which the constraint is exceeded
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  double horizontal_power_average = 0.0;  // (1/N) sum_{n=1..N} P_hor(|v_xy[n]|)
  double vertical_power_average = 0.0;    // (1/N) sum_{n=1..N} P_ver(|v_z[n]|)
  double max_position_residual = 0.0;     // worst dynamics residual (m)
  double max_velocity_residual = 0.0;     // worst dynamics residual (m/s)

  bool feasible() const { return violations.empty(); }
  int count(const std::string& constraint) const;
};

struct FeasibilityOptions {
  double equality_tolerance = 1e-6;
  double inequality_tolerance = 1e-6;
};

/// Checks endpoints, discrete dynamics, periodic velocity, speed and
/// acceleration limits, altitude bounds (3D) and both average propulsion
/// budgets. Reports every violation with its slot and size.
FeasibilityReport check_feasibility(const Scenario& s, const TrajectoryPlan& plan,
                                    FlightMode mode = FlightMode::k2D,
                                    const FeasibilityOptions& options = {});

/// Per-slot horizontal and vertical propulsion power (W).
std::vector<double> horizontal_power_profile(const Scenario& s, const TrajectoryPlan& plan);
std::vector<double> vertical_power_profile(const Scenario& s, const TrajectoryPlan& plan);

/// CSV with header n,t,x,y,z,vx,vy,vz,ax,ay,az and one row per pose.
void write_trajectory_csv(std::ostream& out, const TrajectoryPlan& plan, double slot_duration);

}  // namespace uavpe
