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

#include <vector>

#include "uavpe/scenario.hpp"

namespace uavpe {

/// Position of the eavesdropper in one slot.
struct UavPose {
  Vec2 position = Vec2::Zero();
  double height = 0.0;

  Vec3 point() const { return lift(position, height); }
};

/// Per-slot kinematic state of the eavesdropper.
///
/// Positions and velocities are sampled at the N+1 slot boundaries
/// n = 0..N. Accelerations are the N controls applied on [n, n+1]; the
/// arrays still hold N+1 entries so every slot has a row, and entry N is
/// always zero.
struct TrajectoryPlan {
  std::vector<Vec2> position;
  std::vector<double> height;
  std::vector<Vec2> velocity;
  std::vector<double> vertical_velocity;
  std::vector<Vec2> acceleration;
  std::vector<double> vertical_acceleration;

  /// N, the number of control steps.
  int slot_count() const { return static_cast<int>(position.size()) - 1; }
  int pose_count() const { return static_cast<int>(position.size()); }
  UavPose pose(int n) const { return {position[n], height[n]}; }

  /// A plan with `poses` zero-initialized entries in every array.
  static TrajectoryPlan zeros(int poses);
};

/// Artificial-noise power per slot (W), one entry per pose.
struct JammingSchedule {
  std::vector<double> power;

  static JammingSchedule constant(int poses, double watts) {
    return {std::vector<double>(poses, watts)};
  }
};

inline TrajectoryPlan TrajectoryPlan::zeros(int poses) {
  TrajectoryPlan p;
  p.position.assign(poses, Vec2::Zero());
  p.height.assign(poses, 0.0);
  p.velocity.assign(poses, Vec2::Zero());
  p.vertical_velocity.assign(poses, 0.0);
  p.acceleration.assign(poses, Vec2::Zero());
  p.vertical_acceleration.assign(poses, 0.0);
  return p;
}

}  // namespace uavpe
