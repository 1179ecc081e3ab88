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

#include "uavpe/subproblems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace uavpe {

using opt::Atom;
using opt::AtomKind;
using opt::ConvexProgram;
using opt::kInfinity;
using opt::LinearExpr;
using opt::VarId;

namespace {

constexpr double kLn2 = std::numbers::ln2;

std::string idx(const char* base, int n) { return std::string(base) + "[" + std::to_string(n) + "]"; }

std::vector<VarId> add_series(ConvexProgram& p, const char* base, int first, int count,
                              double lo = -kInfinity, double hi = kInfinity) {
  std::vector<VarId> ids;
  ids.reserve(count);
  for (int k = 0; k < count; ++k) ids.push_back(p.add_variable(idx(base, first + k), lo, hi));
  return ids;
}

LinearExpr v(VarId id, double coef = 1.0) { return LinearExpr::var(id, coef); }

// Affine form of an SCA bound in the program variables: offset + sum g_i x_i.
LinearExpr affine(const AffineBound& b, std::initializer_list<std::pair<const char*, VarId>> vars) {
  LinearExpr e(b.offset());
  for (const auto& [name, id] : vars) e.add(id, b.coefficient(name));
  return e;
}

Atom square(LinearExpr arg, double weight = 1.0) { return Atom{AtomKind::kSquare, weight, std::move(arg)}; }

void set_starts(ConvexProgram& p, const std::vector<double>& x) {
  auto& vars = p.mutable_variables();
  for (std::size_t i = 0; i < vars.size(); ++i) vars[i].start = x[i];
}

}  // namespace

Iterate Iterate::from(const Scenario& s, TrajectoryPlan plan, JammingSchedule schedule) {
  Iterate it{std::move(plan), std::move(schedule), {}};
  it.slack = SlackState::from_iterate(s, it.plan, it.schedule);
  return it;
}

HorizontalProgram build_horizontal(const Scenario& s, const Iterate& it) {
  const int poses = it.plan.pose_count();
  const int steps = poses - 1;
  if (steps < 1) throw std::invalid_argument("build_horizontal: need at least one slot");
  const double dt = s.slot_duration();
  const LinkConstants c = LinkConstants::from(s);
  const SlackState& st = it.slack;
  const RotorParams& r = s.rotor;

  HorizontalProgram hp;
  ConvexProgram& p = hp.program;
  p.set_name("horizontal");
  hp.q_x = add_series(p, "q_x", 0, poses);
  hp.q_y = add_series(p, "q_y", 0, poses);
  hp.v_x = add_series(p, "v_x", 0, poses);
  hp.v_y = add_series(p, "v_y", 0, poses);
  hp.s1 = add_series(p, "S1", 0, poses);
  hp.s2 = add_series(p, "S2", 0, poses);
  hp.s3 = add_series(p, "S3", 0, poses);
  hp.d_se = add_series(p, "d_se", 0, poses);
  hp.d_re = add_series(p, "d_re", 0, poses);
  hp.d_ed = add_series(p, "d_ed", 0, poses);
  hp.a_x = add_series(p, "a_x", 0, steps);
  hp.a_y = add_series(p, "a_y", 0, steps);
  hp.speed = add_series(p, "upsilon", 1, steps, 0.0);
  hp.tau = add_series(p, "tau", 1, steps, 0.0);
  hp.cube = add_series(p, "t", 1, steps, 0.0);

  LinearExpr objective;
  for (int n = 0; n < poses; ++n) objective.add(hp.s1[n], 1.0 / poses);
  p.set_objective(objective, opt::ObjectiveSense::kMaximize);

  const double z_r = s.relay_height;
  for (int n = 0; n < poses; ++n) {
    const double z = it.plan.height[n];
    const AffineBound rd = ub_rd(c, st.jamming[n], st.d_ed[n]);
    const AffineBound re1 = lb_re1(c, st.d_se[n], st.d_re[n]);
    const AffineBound re2 = lb_re2(c, st.d_re[n]);
    const AffineBound ued = lb_distance_ed(it.plan.position[n], s.destination, z);
    p.add_less_equal(v(hp.s1[n]), affine(rd, {{"d_ed", hp.d_ed[n]}}), idx("s1_rd", n));
    p.add_less_equal(v(hp.s2[n]), affine(re1, {{"d_se", hp.d_se[n]}, {"d_re", hp.d_re[n]}}), idx("s2_re1", n));
    p.add_less_equal(affine(re2, {{"d_re", hp.d_re[n]}}), v(hp.s3[n]), idx("s3_re2", n));
    p.add_less_equal(v(hp.s1[n]), v(hp.s2[n]) - v(hp.s3[n]), idx("s1_re", n));
    p.add_convex({square(v(hp.q_x[n]) - s.source.x()), square(v(hp.q_y[n]) - s.source.y())},
                 LinearExpr(z * z) - v(hp.d_se[n]), idx("d_se", n));
    p.add_convex({square(v(hp.q_x[n]) - s.relay.x()), square(v(hp.q_y[n]) - s.relay.y())},
                 LinearExpr((z - z_r) * (z - z_r)) - v(hp.d_re[n]), idx("d_re", n));
    p.add_less_equal(v(hp.d_ed[n]), affine(ued, {{"q_x", hp.q_x[n]}, {"q_y", hp.q_y[n]}}), idx("d_ed", n));
    p.add_cone({v(hp.v_x[n]), v(hp.v_y[n])}, s.max_speed_xy, idx("v_max", n));
  }

  for (int n = 0; n < steps; ++n) {
    p.add_equality(v(hp.q_x[n + 1]), v(hp.q_x[n]) + v(hp.v_x[n], dt) + v(hp.a_x[n], 0.5 * dt * dt), idx("q_x_dyn", n));
    p.add_equality(v(hp.q_y[n + 1]), v(hp.q_y[n]) + v(hp.v_y[n], dt) + v(hp.a_y[n], 0.5 * dt * dt), idx("q_y_dyn", n));
    p.add_equality(v(hp.v_x[n + 1]), v(hp.v_x[n]) + v(hp.a_x[n], dt), idx("v_x_dyn", n));
    p.add_equality(v(hp.v_y[n + 1]), v(hp.v_y[n]) + v(hp.a_y[n], dt), idx("v_y_dyn", n));
    p.add_cone({v(hp.a_x[n]), v(hp.a_y[n])}, s.max_accel_xy, idx("a_max", n));
  }
  p.add_equality(v(hp.q_x[0]), s.start.x(), "q_start_x");
  p.add_equality(v(hp.q_y[0]), s.start.y(), "q_start_y");
  p.add_equality(v(hp.q_x[steps]), s.end.x(), "q_end_x");
  p.add_equality(v(hp.q_y[steps]), s.end.y(), "q_end_y");
  p.add_equality(v(hp.v_x[0]), v(hp.v_x[steps]), "v_x_cycle");
  p.add_equality(v(hp.v_y[0]), v(hp.v_y[steps]), "v_y_cycle");

  const double drag = 0.5 * r.fuselage_drag_ratio * r.air_density * r.rotor_solidity * r.disc_area;
  std::vector<Atom> budget_atoms;
  LinearExpr budget(r.blade_profile_power - s.horizontal_power_budget);
  for (int k = 0; k < steps; ++k) {
    const int n = k + 1;
    p.add_cone({v(hp.v_x[n]), v(hp.v_y[n])}, v(hp.speed[k]), idx("upsilon", n));
    const AffineBound tau_lb = lb_propulsion_tau(st.tau[n], st.speed[n], r.hover_induced_velocity);
    p.add_reciprocal_square(hp.tau[k], affine(tau_lb, {{"tau", hp.tau[k]}, {"upsilon", hp.speed[k]}}),
                            idx("tau", n));
    p.add_cube_epigraph(hp.speed[k], hp.cube[k], idx("cube", n));
    budget_atoms.push_back(square(v(hp.speed[k]), 3.0 * r.blade_profile_power / (r.tip_speed * r.tip_speed * steps)));
    budget.add(hp.tau[k], r.induced_power / steps);
    budget.add(hp.cube[k], drag / steps);
  }
  p.add_convex(std::move(budget_atoms), budget, "horizontal_budget");

  set_starts(p, horizontal_point(hp, s, it));
  return hp;
}

std::vector<double> horizontal_point(const HorizontalProgram& hp, const Scenario& s, const Iterate& it) {
  const LinkConstants c = LinkConstants::from(s);
  const SlackState& st = it.slack;
  std::vector<double> x(hp.program.variable_count(), 0.0);
  const int poses = it.plan.pose_count();
  for (int n = 0; n < poses; ++n) {
    x[hp.q_x[n]] = it.plan.position[n].x();
    x[hp.q_y[n]] = it.plan.position[n].y();
    x[hp.v_x[n]] = it.plan.velocity[n].x();
    x[hp.v_y[n]] = it.plan.velocity[n].y();
    x[hp.d_se[n]] = st.d_se[n];
    x[hp.d_re[n]] = st.d_re[n];
    x[hp.d_ed[n]] = st.d_ed[n];
    const double s2 = lb_re1(c, st.d_se[n], st.d_re[n]).value;
    const double s3 = lb_re2(c, st.d_re[n]).value;
    x[hp.s2[n]] = s2;
    x[hp.s3[n]] = s3;
    x[hp.s1[n]] = std::min(ub_rd(c, st.jamming[n], st.d_ed[n]).value, s2 - s3);
  }
  for (int n = 0; n + 1 < poses; ++n) {
    x[hp.a_x[n]] = it.plan.acceleration[n].x();
    x[hp.a_y[n]] = it.plan.acceleration[n].y();
    x[hp.speed[n]] = st.speed[n + 1];
    x[hp.tau[n]] = st.tau[n + 1];
    x[hp.cube[n]] = std::pow(st.speed[n + 1], 3);
  }
  return x;
}

TrajectoryPlan extract_horizontal(const HorizontalProgram& hp, const std::vector<double>& x,
                                  const TrajectoryPlan& base) {
  TrajectoryPlan plan = base;
  const int poses = base.pose_count();
  for (int n = 0; n < poses; ++n) {
    plan.position[n] = {x[hp.q_x[n]], x[hp.q_y[n]]};
    plan.velocity[n] = {x[hp.v_x[n]], x[hp.v_y[n]]};
    plan.acceleration[n] = n + 1 < poses ? Vec2{x[hp.a_x[n]], x[hp.a_y[n]]} : Vec2::Zero();
  }
  return plan;
}

opt::PowerSlot power_slot(const Scenario& s, const TrajectoryPlan& plan, int n, double previous_power) {
  const LinkConstants c = LinkConstants::from(s);
  const LinkGains g = link_gains(s, plan.pose(n));
  opt::PowerSlot slot;
  slot.link = c;
  slot.h2_ed = g.h2_ed;
  slot.rate_e = rate(snr_eavesdropper(c, g));
  slot.previous_power = previous_power;
  slot.max_power = s.max_jamming_power;
  return slot;
}

PowerProgram build_power(const opt::PowerSlot& slot, int n) {
  const LinkConstants& c = slot.link;
  const double p0 = std::clamp(slot.previous_power, 0.0, slot.max_power);
  PowerProgram pp;
  ConvexProgram& p = pp.program;
  p.set_name(idx("power", n));
  pp.power = p.add_variable(idx("p_e", n), 0.0, slot.max_power, p0);
  const AffineBound lb = lb_rd_power(c, slot.h2_ed, p0);
  const AffineBound ub = ub_rd1_power(c, slot.h2_ed, p0);
  p.set_objective(affine(lb, {{"p_e", pp.power}}), opt::ObjectiveSense::kMaximize);
  // R_D2 = log2(noise_d) + log2(1 + h2 P / noise_d); the constant is moved
  // into the affine part so the log argument stays O(1).
  LinearExpr arg(1.0);
  arg.add(pp.power, slot.h2_ed / c.noise_d);
  LinearExpr rest = affine(ub, {{"p_e", pp.power}});
  rest -= LinearExpr(std::log2(c.noise_d) + slot.rate_e);
  p.add_convex({Atom{AtomKind::kNegativeLog, 1.0 / kLn2, arg}}, rest, idx("success", n));
  return pp;
}

PowerProgram build_power(const Scenario& s, const Iterate& it, int n) {
  return build_power(power_slot(s, it.plan, n, it.schedule.power.at(n)), n);
}

VerticalProgram build_vertical(const Scenario& s, const Iterate& it) {
  const int poses = it.plan.pose_count();
  const int steps = poses - 1;
  if (steps < 1) throw std::invalid_argument("build_vertical: need at least one slot");
  const double dt = s.slot_duration();
  const std::vector<VerticalBounds> bounds = bounds_vertical(s, it.plan, it.slack);

  VerticalProgram vp;
  ConvexProgram& p = vp.program;
  p.set_name("vertical");
  vp.z = add_series(p, "z", 0, poses, s.min_height, s.max_height);
  vp.v_z = add_series(p, "v_z", 0, poses, -s.max_speed_z, s.max_speed_z);
  vp.s4 = add_series(p, "S4", 0, poses);
  vp.s5 = add_series(p, "S5", 0, poses);
  vp.s6 = add_series(p, "S6", 0, poses);
  vp.z_h = add_series(p, "z_h", 0, poses);
  vp.z_er = add_series(p, "z_er", 0, poses);
  vp.a_z = add_series(p, "a_z", 0, steps, -s.max_accel_z, s.max_accel_z);
  vp.abs_v_z = add_series(p, "u", 1, steps, 0.0);

  LinearExpr objective;
  for (int n = 0; n < poses; ++n) objective.add(vp.s4[n], 1.0 / poses);
  p.set_objective(objective, opt::ObjectiveSense::kMaximize);

  for (int n = 0; n < poses; ++n) {
    const VerticalBounds& b = bounds[n];
    p.add_less_equal(v(vp.s4[n]), affine(b.rd, {{"z_h", vp.z_h[n]}}), idx("s4_rd", n));
    p.add_less_equal(v(vp.s5[n]), affine(b.re1, {{"z_h", vp.z_h[n]}, {"z_er", vp.z_er[n]}}), idx("s5_re1", n));
    p.add_less_equal(affine(b.re2, {{"z_er", vp.z_er[n]}}), v(vp.s6[n]), idx("s6_re2", n));
    p.add_less_equal(v(vp.s4[n]), v(vp.s5[n]) - v(vp.s6[n]), idx("s4_re", n));
    p.add_less_equal(v(vp.z_h[n]), affine(b.height, {{"z", vp.z[n]}}), idx("z_h", n));
    p.add_convex({square(v(vp.z[n]) - s.relay_height)}, -1.0 * v(vp.z_er[n]), idx("z_er", n));
  }
  for (int n = 0; n < steps; ++n) {
    p.add_equality(v(vp.z[n + 1]), v(vp.z[n]) + v(vp.v_z[n], dt) + v(vp.a_z[n], 0.5 * dt * dt), idx("z_dyn", n));
    p.add_equality(v(vp.v_z[n + 1]), v(vp.v_z[n]) + v(vp.a_z[n], dt), idx("v_z_dyn", n));
  }
  p.add_equality(v(vp.z[0]), s.start_height, "z_start");
  p.add_equality(v(vp.z[steps]), s.end_height, "z_end");
  p.add_equality(v(vp.v_z[0]), v(vp.v_z[steps]), "v_z_cycle");

  LinearExpr budget(-s.vertical_power_budget);
  for (int k = 0; k < steps; ++k) {
    const int n = k + 1;
    p.add_less_equal(v(vp.v_z[n]), v(vp.abs_v_z[k]), idx("u_pos", n));
    p.add_less_equal(v(vp.v_z[n], -1.0), v(vp.abs_v_z[k]), idx("u_neg", n));
    budget.add(vp.abs_v_z[k], s.weight / steps);
  }
  p.add_less_equal(budget, 0.0, "vertical_budget");

  set_starts(p, vertical_point(vp, s, it));
  return vp;
}

std::vector<double> vertical_point(const VerticalProgram& vp, const Scenario& s, const Iterate& it) {
  const std::vector<VerticalBounds> bounds = bounds_vertical(s, it.plan, it.slack);
  std::vector<double> x(vp.program.variable_count(), 0.0);
  const int poses = it.plan.pose_count();
  for (int n = 0; n < poses; ++n) {
    x[vp.z[n]] = it.plan.height[n];
    x[vp.v_z[n]] = it.plan.vertical_velocity[n];
    x[vp.z_h[n]] = it.slack.z_h[n];
    x[vp.z_er[n]] = it.slack.z_er[n];
    const double s5 = bounds[n].re1.value;
    const double s6 = bounds[n].re2.value;
    x[vp.s5[n]] = s5;
    x[vp.s6[n]] = s6;
    x[vp.s4[n]] = std::min(bounds[n].rd.value, s5 - s6);
  }
  for (int n = 0; n + 1 < poses; ++n) {
    x[vp.a_z[n]] = it.plan.vertical_acceleration[n];
    x[vp.abs_v_z[n]] = std::abs(it.plan.vertical_velocity[n + 1]);
  }
  return x;
}

TrajectoryPlan extract_vertical(const VerticalProgram& vp, const std::vector<double>& x,
                                const TrajectoryPlan& base) {
  TrajectoryPlan plan = base;
  const int poses = base.pose_count();
  for (int n = 0; n < poses; ++n) {
    plan.height[n] = x[vp.z[n]];
    plan.vertical_velocity[n] = x[vp.v_z[n]];
    plan.vertical_acceleration[n] = n + 1 < poses ? x[vp.a_z[n]] : 0.0;
  }
  return plan;
}

double max_violation(const ConvexProgram& p, const std::vector<double>& x) {
  double worst = 0.0;
  for (const opt::Constraint& c : p.constraints()) worst = std::max(worst, c.violation(x));
  for (int i = 0; i < p.variable_count(); ++i) {
    const opt::Variable& var = p.variable(i);
    worst = std::max({worst, var.lower - x[i], x[i] - var.upper});
  }
  return worst;
}

}  // namespace uavpe
