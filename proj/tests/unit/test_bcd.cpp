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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "uavpe/bcd.hpp"
#include "uavpe/kinematics.hpp"

using namespace uavpe;

namespace {

// 20 slots of 1 s between (-200, 300) and (200, 300).
Scenario short_flight() {
  Scenario s = reference_scenario1();
  s.start = Vec2(-200, 300);
  s.end = Vec2(200, 300);
  s.period = 20;
  s.slots = 20;
  return s;
}

void check_monotone(const RunResult& r) {
  for (std::size_t j = 1; j < r.theta_trace.size(); ++j)
    CHECK(r.theta_trace[j] >= r.theta_trace[j - 1] - 1e-6);
}

void check_final_feasibility(const Scenario& s, const RunResult& r, FlightMode mode) {
  const FeasibilityReport rep = check_feasibility(s, r.plan, mode);
  CHECK(rep.feasible());
  CHECK(rep.max_position_residual <= 1e-6);
  CHECK(rep.max_velocity_residual <= 1e-6);
  for (int n = 0; n < r.plan.pose_count(); ++n) {
    CHECK(r.schedule.power[n] >= 0.0);
    CHECK(r.schedule.power[n] <= s.max_jamming_power);
    if (std::find(r.infeasible_slots.begin(), r.infeasible_slots.end(), n) != r.infeasible_slots.end()) continue;
    CHECK(r.rates[n].rate_d <= r.rates[n].rate_e + 1e-6);
  }
}

}  // namespace

TEST_CASE("single sweep with infinite tolerance") {
  const Scenario s = short_flight();
  BcdOptions opt;
  opt.epsilon = 1e300;
  const RunResult r = run_algorithm1(s, opt);
  CHECK(r.iterations == 1);
  CHECK(r.converged);
  REQUIRE(r.theta_trace.size() == 2);
  const double start = average_er(s, initial_trajectory(s), JammingSchedule::constant(s.pose_count(), 0.0));
  CHECK(r.theta_trace[0] == start);
  CHECK(r.theta() >= start - 1e-6);
}

TEST_CASE("2D joint optimization on a short flight") {
  const Scenario s = short_flight();
  std::ostringstream log;
  BcdOptions opt;
  opt.log = &log;
  const RunResult r = run_algorithm1(s, opt);
  CHECK(r.converged);
  check_monotone(r);
  check_final_feasibility(s, r, FlightMode::k2D);
  CHECK(r.theta() == doctest::Approx(average_er(s, r.plan, r.schedule, opt.success_tolerance)));
  CHECK(log.str().rfind("2d j=1 theta=", 0) == 0);
  CHECK(r.records.size() >= 1);
  CHECK(r.rates.size() == 21);
  CHECK(r.horizontal_power.size() == 21);
}

TEST_CASE("3D joint optimization on a short flight") {
  Scenario s = short_flight();
  s.end_height = 120;
  const RunResult r = run_algorithm2(s);
  check_monotone(r);
  check_final_feasibility(s, r, FlightMode::k3D);
  for (double z : r.plan.height) {
    CHECK(z >= s.min_height - 1e-6);
    CHECK(z <= s.max_height + 1e-6);
  }
}

TEST_CASE("OPFT without jamming need equals the jamming-free AER") {
  const Scenario s = short_flight();
  const TrajectoryPlan line = initial_trajectory(s);
  const JammingSchedule zero = JammingSchedule::constant(s.pose_count(), 0.0);
  const auto rates = slot_rates(s, line, zero);
  REQUIRE(std::all_of(rates.begin(), rates.end(), [](const SlotRates& r) { return r.rate_e >= r.rate_d; }));
  const RunResult r = run_benchmark(s, Scheme::kOpft);
  CHECK(r.theta() == doctest::Approx(average_er(s, line, zero)).epsilon(1e-12));
  for (double p : r.schedule.power) CHECK(p == 0.0);
}

TEST_CASE("FPOT without jamming far from the link gives zero") {
  Scenario s = short_flight();
  s.start = Vec2(-200, 6000);
  s.end = Vec2(200, 6000);
  BcdOptions opt;
  opt.fixed_power = 0.0;
  const RunResult r = run_benchmark(s, Scheme::kFpot, opt);
  CHECK(r.theta() == 0.0);
  for (double p : r.schedule.power) CHECK(p == 0.0);
}

TEST_CASE("FPOT uses the maximum jamming power by default") {
  const Scenario s = short_flight();
  BcdOptions opt;
  opt.max_iterations = 2;
  const RunResult r = run_benchmark(s, Scheme::kFpot, opt);
  for (double p : r.schedule.power) CHECK(p == s.max_jamming_power);
  check_monotone(r);
}

TEST_CASE("unreachable endpoint raises with a program dump") {
  Scenario s = short_flight();
  s.start = Vec2(-1000, 300);
  s.end = Vec2(1000, 300);  // 100 m/s needed, 40 m/s allowed
  try {
    run_algorithm1(s);
    FAIL("expected BcdError");
  } catch (const BcdError& e) {
    CHECK(std::string(e.what()).find("horizontal") != std::string::npos);
    CHECK(e.dump().find("q_end_x") != std::string::npos);
  }
}

TEST_CASE("iteration cap stops the run") {
  const Scenario s = reference_scenario1();
  BcdOptions opt;
  opt.max_iterations = 1;
  opt.epsilon = 0.0;
  const RunResult r = run_algorithm1(s, opt);
  CHECK(r.iterations == 1);
  CHECK_FALSE(r.converged);
  CHECK(r.stop_reason == "iteration limit");
}

TEST_CASE("power update flags only slots that fail at full power") {
  Scenario s = reference_scenario1();
  s.max_jamming_power = 1e-12;
  TrajectoryPlan plan = TrajectoryPlan::zeros(4);
  plan.position = {Vec2(-100, 50), Vec2(3000, -3000), Vec2(0, 100), Vec2(-4000, 4000)};
  plan.height = {100, 100, 100, 100};
  const JammingSchedule prev = JammingSchedule::constant(4, 0.0);
  for (PowerMethod m : {PowerMethod::kBisection, PowerMethod::kGeneric}) {
    const PowerStep step = power_update(s, plan, prev, m);
    CHECK(step.infeasible_slots == std::vector<int>{1, 3});
    CHECK(step.schedule.power[0] <= 1e-9);
    CHECK(step.schedule.power[1] == s.max_jamming_power);
    CHECK(step.schedule.power[3] == s.max_jamming_power);
  }
  RunResult r;
  r.plan = plan;
  r.schedule = power_update(s, plan, prev, PowerMethod::kBisection).schedule;
  r.infeasible_slots = {1, 3};
  finalize_result(s, &r, 0.0);
  CHECK(r.rates[1].er == 0.0);
  CHECK(r.rates[3].er == 0.0);
  CHECK(r.rates[0].er == r.rates[0].rate_d);
}

TEST_CASE("scheme dispatch and names") {
  CHECK(std::string(to_string(Scheme::kProposed2D)) == "2d");
  CHECK(std::string(to_string(Scheme::kProposed3D)) == "3d");
  CHECK(std::string(to_string(Scheme::kFpot)) == "fpot");
  CHECK(std::string(to_string(Scheme::kOpft)) == "opft");
  CHECK_THROWS_AS(run_benchmark(short_flight(), Scheme::kProposed2D), std::invalid_argument);
}
