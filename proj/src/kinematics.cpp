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

#include "uavpe/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "uavpe/model.hpp"

namespace uavpe {

TrajectoryPlan initial_trajectory(const Scenario& s, FlightMode mode) {
  const int poses = s.pose_count();
  const double dt = s.slot_duration();
  const double denom = static_cast<double>(s.slots + 1);
  const double h0 = mode == FlightMode::k3D ? s.start_height : s.fixed_height;
  const double h1 = mode == FlightMode::k3D ? s.end_height : s.fixed_height;

  TrajectoryPlan plan = TrajectoryPlan::zeros(poses);
  const Vec2 step = (s.end - s.start) / denom;
  const double dz = (h1 - h0) / denom;
  for (int n = 0; n < poses; ++n) {
    plan.position[n] = s.start + static_cast<double>(n) * step;
    plan.height[n] = h0 + static_cast<double>(n) * dz;
    plan.velocity[n] = step / dt;
    plan.vertical_velocity[n] = dz / dt;
  }
  return plan;
}

int FeasibilityReport::count(const std::string& constraint) const {
  return static_cast<int>(std::count_if(violations.begin(), violations.end(),
                                        [&](const Violation& v) { return v.constraint == constraint; }));
}

std::vector<double> horizontal_power_profile(const Scenario& s, const TrajectoryPlan& plan) {
  std::vector<double> out(plan.pose_count());
  for (int n = 0; n < plan.pose_count(); ++n) out[n] = horizontal_power(plan.velocity[n].norm(), s.rotor);
  return out;
}

std::vector<double> vertical_power_profile(const Scenario& s, const TrajectoryPlan& plan) {
  std::vector<double> out(plan.pose_count());
  for (int n = 0; n < plan.pose_count(); ++n)
    out[n] = vertical_power(std::abs(plan.vertical_velocity[n]), s.weight);
  return out;
}

FeasibilityReport check_feasibility(const Scenario& s, const TrajectoryPlan& plan, FlightMode mode,
                                    const FeasibilityOptions& options) {
  FeasibilityReport report;
  const int n_steps = plan.slot_count();
  const double dt = s.slot_duration();
  const double eq_tol = options.equality_tolerance;
  const double ineq_tol = options.inequality_tolerance;
  auto flag = [&](const char* name, int slot, double amount, double tol) {
    if (amount > tol) report.violations.push_back({name, slot, amount});
  };

  flag("endpoint_start", 0, (plan.position.front() - s.start).norm(), eq_tol);
  flag("endpoint_end", n_steps, (plan.position.back() - s.end).norm(), eq_tol);
  flag("periodic_velocity", 0, (plan.velocity.front() - plan.velocity.back()).norm(), eq_tol);
  if (mode == FlightMode::k3D) {
    flag("altitude_start", 0, std::abs(plan.height.front() - s.start_height), eq_tol);
    flag("altitude_end", n_steps, std::abs(plan.height.back() - s.end_height), eq_tol);
    flag("periodic_vertical_velocity", 0,
         std::abs(plan.vertical_velocity.front() - plan.vertical_velocity.back()), eq_tol);
  }

  for (int n = 0; n < n_steps; ++n) {
    const Vec2 q_next = plan.position[n] + plan.velocity[n] * dt + 0.5 * plan.acceleration[n] * dt * dt;
    const double pos_res = (plan.position[n + 1] - q_next).norm();
    const double vel_res = (plan.velocity[n + 1] - (plan.velocity[n] + plan.acceleration[n] * dt)).norm();
    const double z_next = plan.height[n] + plan.vertical_velocity[n] * dt +
                          0.5 * plan.vertical_acceleration[n] * dt * dt;
    const double zpos_res = std::abs(plan.height[n + 1] - z_next);
    const double zvel_res = std::abs(plan.vertical_velocity[n + 1] -
                                     (plan.vertical_velocity[n] + plan.vertical_acceleration[n] * dt));
    report.max_position_residual = std::max({report.max_position_residual, pos_res, zpos_res});
    report.max_velocity_residual = std::max({report.max_velocity_residual, vel_res, zvel_res});
    flag("position_dynamics", n, pos_res, eq_tol);
    flag("velocity_dynamics", n, vel_res, eq_tol);
    flag("vertical_position_dynamics", n, zpos_res, eq_tol);
    flag("vertical_velocity_dynamics", n, zvel_res, eq_tol);
    flag("horizontal_acceleration", n, plan.acceleration[n].norm() - s.max_accel_xy, ineq_tol);
    if (mode == FlightMode::k3D)
      flag("vertical_acceleration", n, std::abs(plan.vertical_acceleration[n]) - s.max_accel_z, ineq_tol);
  }

  for (int n = 0; n <= n_steps; ++n) {
    flag("horizontal_speed", n, plan.velocity[n].norm() - s.max_speed_xy, ineq_tol);
    if (mode == FlightMode::k3D) {
      flag("vertical_speed", n, std::abs(plan.vertical_velocity[n]) - s.max_speed_z, ineq_tol);
      flag("altitude_min", n, s.min_height - plan.height[n], ineq_tol);
      flag("altitude_max", n, plan.height[n] - s.max_height, ineq_tol);
    } else {
      flag("altitude_fixed", n, std::abs(plan.height[n] - s.fixed_height), eq_tol);
    }
  }

  // Budgets average over n = 1..N; v[0] duplicates v[N].
  const std::vector<double> hor = horizontal_power_profile(s, plan);
  const std::vector<double> ver = vertical_power_profile(s, plan);
  double hor_sum = 0.0;
  double ver_sum = 0.0;
  for (int n = 1; n <= n_steps; ++n) {
    hor_sum += hor[n];
    ver_sum += ver[n];
  }
  report.horizontal_power_average = n_steps > 0 ? hor_sum / n_steps : 0.0;
  report.vertical_power_average = n_steps > 0 ? ver_sum / n_steps : 0.0;
  flag("horizontal_power_budget", -1, report.horizontal_power_average - s.horizontal_power_budget, ineq_tol);
  flag("vertical_power_budget", -1, report.vertical_power_average - s.vertical_power_budget, ineq_tol);
  return report;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryPlan& plan, double slot_duration) {
  out << "n,t,x,y,z,vx,vy,vz,ax,ay,az\n";
  const auto old_precision = out.precision(17);
  for (int n = 0; n < plan.pose_count(); ++n) {
    out << n << ',' << n * slot_duration << ',' << plan.position[n].x() << ',' << plan.position[n].y()
        << ',' << plan.height[n] << ',' << plan.velocity[n].x() << ',' << plan.velocity[n].y() << ','
        << plan.vertical_velocity[n] << ',' << plan.acceleration[n].x() << ','
        << plan.acceleration[n].y() << ',' << plan.vertical_acceleration[n] << '\n';
  }
  out.precision(old_precision);
}

}  // namespace uavpe
