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

#include <Eigen/Core>

namespace uavpe {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Lifts a horizontal coordinate to 3D at the given height.
inline Vec3 lift(const Vec2& q, double z) { return {q.x(), q.y(), z}; }

/// Rotary-wing propulsion constants.
struct RotorParams {
  double blade_profile_power = 59.0;  // P_0 (W)
  double induced_power = 124.0;       // P_i (W)
  double tip_speed = 200.0;           // U_tip (m/s)
  double hover_induced_velocity = 4.03;  // v_0 (m/s)
  double fuselage_drag_ratio = 0.6;   // d_0
  double air_density = 1.225;         // rho (kg/m^3)
  double rotor_solidity = 0.05;       // s
  double disc_area = 0.503;           // A (m^2)
};

/// Everything that defines one eavesdropping scenario. All quantities are
/// linear SI units; dB-valued inputs are converted once when loading.
struct Scenario {
  // Ground nodes (horizontal coordinates) and relay height.
  Vec2 source{-100.0, 0.0};
  Vec2 destination{100.0, 0.0};
  Vec2 relay{0.0, 100.0};
  double relay_height = 50.0;

  // Eavesdropper endpoints.
  Vec2 start{-500.0, 500.0};
  Vec2 end{500.0, 500.0};
  double start_height = 100.0;
  double end_height = 200.0;
  double fixed_height = 100.0;  // altitude used by the 2D problem
  double min_height = 60.0;
  double max_height = 200.0;

  double max_speed_xy = 40.0;
  double max_speed_z = 30.0;
  double max_accel_xy = 5.0;
  double max_accel_z = 3.0;

  double source_power = 0.01;   // P_S (W)
  double relay_power = 0.01;    // P_R (W)
  double max_jamming_power = 0.1;  // P_E^max (W)
  double noise_power = 1e-14;   // sigma^2 (W)
  double reference_gain = 1e-5;  // beta_0

  RotorParams rotor;
  double horizontal_power_budget = 600.0;  // average horizontal flight power (W)
  double vertical_power_budget = 300.0;    // average vertical flight power (W)
  double weight = 20.0;                    // W (N)

  double period = 100.0;  // T (s)
  int slots = 100;        // N
  double tolerance = 1e-3;  // BCD convergence epsilon

  double slot_duration() const { return period / slots; }
  int pose_count() const { return slots + 1; }

  Vec3 source3() const { return lift(source, 0.0); }
  Vec3 destination3() const { return lift(destination, 0.0); }
  Vec3 relay3() const { return lift(relay, relay_height); }

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

/// Reference setup with the relay at (0, 100).
Scenario reference_scenario1();
/// Same as scenario 1 but with the relay at (0, -100).
Scenario reference_scenario2();

double db_to_linear(double db);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace uavpe
