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

#include <sstream>
#include <string>

#include "doctest.h"
#include "uavpe/kinematics.hpp"
#include "uavpe/model.hpp"

using namespace uavpe;

TEST_CASE("straight line starts at the initial point") {
  const Scenario s = reference_scenario1();
  const TrajectoryPlan plan = initial_trajectory(s);
  REQUIRE(plan.pose_count() == 101);
  CHECK(plan.position[0] == s.start);
  CHECK(plan.height[0] == s.fixed_height);
  // -500 + 50/101 * 1000
  CHECK(plan.position[50].x() == doctest::Approx(-4.9504950495049505).epsilon(1e-14));
  CHECK(plan.position[50].y() == 500.0);
}

TEST_CASE("straight line obeys the discrete dynamics") {
  const Scenario s = reference_scenario1();
  for (FlightMode mode : {FlightMode::k2D, FlightMode::k3D}) {
    const TrajectoryPlan plan = initial_trajectory(s, mode);
    const FeasibilityReport rep = check_feasibility(s, plan, mode);
    CHECK(rep.max_position_residual < 1e-9);
    CHECK(rep.max_velocity_residual < 1e-12);
    CHECK(rep.count("horizontal_speed") == 0);
    CHECK(rep.count("horizontal_acceleration") == 0);
    CHECK(rep.count("periodic_velocity") == 0);
    CHECK(rep.count("horizontal_power_budget") == 0);
    // The 1/(N+1) spacing leaves q[N] one step short of q_F.
    REQUIRE(rep.count("endpoint_end") == 1);
    CHECK(rep.violations.front().magnitude == doctest::Approx(1000.0 / 101.0).epsilon(1e-12));
    if (mode == FlightMode::k3D) {
      CHECK(rep.count("altitude_end") == 1);
      CHECK(rep.count("altitude_min") == 0);
      CHECK(rep.count("vertical_speed") == 0);
    }
  }
}

TEST_CASE("degenerate segment hovers") {
  Scenario s = reference_scenario1();
  s.end = s.start;
  const TrajectoryPlan plan = initial_trajectory(s);
  for (int n = 0; n < plan.pose_count(); ++n) {
    CHECK(plan.position[n] == s.start);
    CHECK(plan.velocity[n].norm() == 0.0);
  }
  const FeasibilityReport rep = check_feasibility(s, plan);
  CHECK(rep.feasible());
  CHECK(rep.horizontal_power_average == doctest::Approx(183.0).epsilon(1e-14));
}

TEST_CASE("one overspeed slot is flagged once") {
  Scenario s = reference_scenario1();
  s.end = s.start;
  TrajectoryPlan plan = initial_trajectory(s);
  // Speed v_max + 1 at pose 7, then cancelled so dynamics hold.
  const double dt = s.slot_duration();
  const double v = s.max_speed_xy + 1.0;
  plan.velocity[7] = Vec2(v, 0);
  plan.acceleration[6] = Vec2(v / dt, 0);
  plan.acceleration[7] = Vec2(-v / dt, 0);
  for (int n = 7; n < plan.pose_count(); ++n) plan.position[n] = s.start;
  plan.position[7] = s.start + Vec2(0.5 * v * dt, 0);
  plan.position[8] = s.start + Vec2(v * dt, 0);
  for (int n = 9; n < plan.pose_count(); ++n) plan.position[n] = plan.position[8];
  s.max_accel_xy = 1e3;
  s.end = plan.position.back();
  const FeasibilityReport rep = check_feasibility(s, plan);
  CHECK(rep.max_position_residual < 1e-9);
  CHECK(rep.count("horizontal_speed") == 1);
  CHECK(rep.violations.size() == 1);
  CHECK(rep.violations[0].slot == 7);
  CHECK(rep.violations[0].magnitude == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("altitude and budget violations") {
  Scenario s = reference_scenario1();
  s.end = s.start;
  s.end_height = s.start_height;
  TrajectoryPlan plan = initial_trajectory(s, FlightMode::k3D);
  for (double& z : plan.height) z = s.start_height;
  CHECK(check_feasibility(s, plan, FlightMode::k3D).feasible());

  s.horizontal_power_budget = 150.0;  // below the 183 W hover power
  const FeasibilityReport rep = check_feasibility(s, plan, FlightMode::k3D);
  REQUIRE(rep.count("horizontal_power_budget") == 1);
  CHECK(rep.violations[0].slot == -1);
  CHECK(rep.violations[0].magnitude == doctest::Approx(33.0).epsilon(1e-12));

  s = reference_scenario1();
  s.end = s.start;
  s.start_height = s.end_height = 50.0;
  plan = initial_trajectory(s, FlightMode::k3D);
  CHECK(check_feasibility(s, plan, FlightMode::k3D).count("altitude_min") == plan.pose_count());
}

TEST_CASE("vertical budget charges the vertical speed magnitude") {
  Scenario s = reference_scenario1();
  s.end = s.start;
  const TrajectoryPlan plan = initial_trajectory(s, FlightMode::k3D);
  const FeasibilityReport rep = check_feasibility(s, plan, FlightMode::k3D);
  // 100 m over 101 steps of 1 s at 20 N.
  CHECK(rep.vertical_power_average == doctest::Approx(20.0 * 100.0 / 101.0).epsilon(1e-12));
  Scenario down = s;
  std::swap(down.start_height, down.end_height);
  CHECK(check_feasibility(down, initial_trajectory(down, FlightMode::k3D), FlightMode::k3D).vertical_power_average ==
        doctest::Approx(rep.vertical_power_average).epsilon(1e-12));
  CHECK(vertical_power_profile(down, initial_trajectory(down, FlightMode::k3D))[3] ==
        doctest::Approx(20.0 * 100.0 / 101.0).epsilon(1e-12));
}

TEST_CASE("trajectory csv layout") {
  Scenario s = reference_scenario1();
  s.slots = 2;
  s.period = 2.0;
  std::ostringstream out;
  write_trajectory_csv(out, initial_trajectory(s), s.slot_duration());
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,t,x,y,z,vx,vy,vz,ax,ay,az");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}
