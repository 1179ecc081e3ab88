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

// Convex subproblems of one BCD sweep: horizontal trajectory, per-slot
// jamming power, vertical trajectory. Each builder returns the program
// together with the variable ids needed to read a solution back.

#pragma once

#include <vector>

#include "uavpe/model.hpp"
#include "uavpe/plan.hpp"
#include "uavpe/program.hpp"
#include "uavpe/sca.hpp"
#include "uavpe/scenario.hpp"
#include "uavpe/solver.hpp"

namespace uavpe {

struct Iterate {
  TrajectoryPlan plan;
  JammingSchedule schedule;
  SlackState slack;

  static Iterate from(const Scenario& s, TrajectoryPlan plan, JammingSchedule schedule);
};

struct HorizontalProgram {
  opt::ConvexProgram program;
  // Indexed by pose n = 0..N.
  std::vector<opt::VarId> q_x, q_y, v_x, v_y;
  std::vector<opt::VarId> s1, s2, s3;
  std::vector<opt::VarId> d_se, d_re, d_ed;
  // Indexed by step n = 0..N-1.
  std::vector<opt::VarId> a_x, a_y;
  // Indexed by n = 1..N (entry k is pose k + 1).
  std::vector<opt::VarId> speed, tau, cube;
};

/// Success constraint R_D <= R_E is left to the power subproblem.
HorizontalProgram build_horizontal(const Scenario& s, const Iterate& it);

/// Program variables at the iterate with every slack tight.
std::vector<double> horizontal_point(const HorizontalProgram& hp, const Scenario& s, const Iterate& it);

/// Copies q, v, a from the solution; altitude data is taken from `base`.
TrajectoryPlan extract_horizontal(const HorizontalProgram& hp, const std::vector<double>& x,
                                  const TrajectoryPlan& base);

struct PowerProgram {
  opt::ConvexProgram program;
  opt::VarId power = 0;
};

/// One-slot jamming power problem at pose n of `plan`, expanded at `previous_power`.
opt::PowerSlot power_slot(const Scenario& s, const TrajectoryPlan& plan, int n, double previous_power);
PowerProgram build_power(const opt::PowerSlot& slot, int n = 0);
PowerProgram build_power(const Scenario& s, const Iterate& it, int n);

struct VerticalProgram {
  opt::ConvexProgram program;
  // Indexed by pose n = 0..N.
  std::vector<opt::VarId> z, v_z, s4, s5, s6, z_h, z_er;
  // Indexed by step n = 0..N-1.
  std::vector<opt::VarId> a_z;
  // Indexed by n = 1..N.
  std::vector<opt::VarId> abs_v_z;
};

VerticalProgram build_vertical(const Scenario& s, const Iterate& it);
std::vector<double> vertical_point(const VerticalProgram& vp, const Scenario& s, const Iterate& it);
TrajectoryPlan extract_vertical(const VerticalProgram& vp, const std::vector<double>& x,
                                const TrajectoryPlan& base);

/// Worst violation over constraints and variable bounds at x.
double max_violation(const opt::ConvexProgram& p, const std::vector<double>& x);

}  // namespace uavpe
