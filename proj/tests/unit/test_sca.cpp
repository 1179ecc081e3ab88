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

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "uavpe/kinematics.hpp"
#include "uavpe/model.hpp"
#include "uavpe/sca.hpp"

using namespace uavpe;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Central difference with step 1e-4 of the variable scale.
double central(const std::function<double(double)>& f, double x) {
  const double h = 1e-4 * std::max(std::abs(x), 1e-3);
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

LinkConstants scenario_constants() { return LinkConstants::from(reference_scenario1()); }

}  // namespace

TEST_CASE("R_E1 lower bound: tangency, gradient, global validity") {
  const LinkConstants c = scenario_constants();
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> logd(std::log(1e3), std::log(1e6));
  for (int k = 0; k < 20; ++k) {
    const double se0 = std::exp(logd(rng)), re0 = std::exp(logd(rng));
    const AffineBound b = lb_re1(c, se0, re0);
    CHECK(b.sense == BoundSense::kLower);
    CHECK(rel(b.evaluate({{"d_se", se0}, {"d_re", re0}}), eavesdropper_rate1(c, se0, re0)) < 1e-10);
    const double gx = central([&](double x) { return eavesdropper_rate1(c, x, re0); }, se0);
    const double gy = central([&](double y) { return eavesdropper_rate1(c, se0, y); }, re0);
    CHECK(rel(b.coefficient("d_se"), gx) < 1e-6);
    CHECK(rel(b.coefficient("d_re"), gy) < 1e-6);
    for (int i = 0; i < 50; ++i) {
      const double x = std::exp(logd(rng)), y = std::exp(logd(rng));
      CHECK(b.evaluate({{"d_se", x}, {"d_re", y}}) <= eavesdropper_rate1(c, x, y) + 1e-12);
    }
  }
}

TEST_CASE("E-D squared distance lower bound") {
  const Vec2 qd(100, 0);
  const Vec2 q0(-40, 310);
  const double z = 100;
  const AffineBound b = lb_distance_ed(q0, qd, z);
  CHECK(b.evaluate({{"q_x", q0.x()}, {"q_y", q0.y()}}) == doctest::Approx((q0 - qd).squaredNorm() + z * z));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-800, 800);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 q(u(rng), u(rng));
    CHECK(b.evaluate({{"q_x", q.x()}, {"q_y", q.y()}}) <= (q - qd).squaredNorm() + z * z + 1e-9);
  }
  const AffineBound flat = lb_distance_ed(qd, qd, z);
  CHECK(flat.coefficient("q_x") == 0.0);
  CHECK(flat.coefficient("q_y") == 0.0);
  CHECK(flat.evaluate({{"q_x", 123.0}, {"q_y", -45.0}}) == z * z);
}

TEST_CASE("R_D upper bound in the E-D distance") {
  const LinkConstants c = scenario_constants();
  for (double p : {1e-3, 0.05, 0.1}) {
    for (double d0 : {1.2e4, 9e4, 4e5}) {
      const AffineBound b = ub_rd(c, p, d0);
      auto f = [&](double d) { return destination_rate_of_distance(c, p, d); };
      CHECK(b.sense == BoundSense::kUpper);
      CHECK(rel(b.evaluate({{"d_ed", d0}}), f(d0)) < 1e-10);
      CHECK(rel(b.coefficient("d_ed"), central(f, d0)) < 1e-6);
      for (int i = 0; i <= 100; ++i) {
        const double d = d0 * (0.5 + i / 100.0);
        const double h = 1e-3 * d;
        // Concavity confirmed at the sample before checking the bound.
        REQUIRE(f(d + h) - 2.0 * f(d) + f(d - h) <= 1e-13);
        CHECK(b.evaluate({{"d_ed", d}}) >= f(d) - 1e-12);
      }
    }
  }
}

TEST_CASE("R_E2 lower bound") {
  const LinkConstants c = scenario_constants();
  for (double d0 : {3e3, 5e4, 7e5}) {
    const AffineBound b = lb_re2(c, d0);
    auto f = [&](double d) { return eavesdropper_rate2(c, d); };
    CHECK(rel(b.evaluate({{"d_re", d0}}), f(d0)) < 1e-10);
    CHECK(rel(b.coefficient("d_re"), central(f, d0)) < 1e-6);
    for (double d = 1.0; d < 1e7; d *= 1.3) CHECK(b.evaluate({{"d_re", d}}) <= f(d) + 1e-12);
  }
}

TEST_CASE("propulsion relaxation bound") {
  const double v0 = 4.03;
  const AffineBound b = lb_propulsion_tau(0.7, 12.0, v0);
  CHECK(b.evaluate({}) == doctest::Approx(0.49 + 144.0 / (v0 * v0)).epsilon(1e-14));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> t(0.0, 3.0), v(0.0, 40.0);
  for (int i = 0; i < 1000; ++i) {
    const double tau = t(rng), ups = v(rng);
    CHECK(b.evaluate({{"tau", tau}, {"upsilon", ups}}) <= tau * tau + ups * ups / (v0 * v0) + 1e-12);
  }
  const AffineBound zero = lb_propulsion_tau(0.0, 0.0, v0);
  CHECK(zero.evaluate({{"tau", 2.0}, {"upsilon", 17.0}}) == 0.0);
}

TEST_CASE("power subproblem bounds") {
  const Scenario s = reference_scenario1();
  const LinkConstants c = LinkConstants::from(s);
  const LinkGains g = link_gains(s, {Vec2(80, 40), 100});
  auto rd = [&](double p) { return destination_rate1(c, g.h2_ed, p) - destination_rate2(c, g.h2_ed, p); };
  auto rd1 = [&](double p) { return destination_rate1(c, g.h2_ed, p); };
  for (double p0 : {0.0, 1e-3, 0.04, 0.1}) {
    const AffineBound lo = lb_rd_power(c, g.h2_ed, p0);
    const AffineBound hi = ub_rd1_power(c, g.h2_ed, p0);
    CHECK(rel(lo.evaluate({}), rd(p0)) < 1e-10);
    CHECK(rel(hi.evaluate({}), rd1(p0)) < 1e-10);
    // Natural power scale is noise_d / h2_ed; one-sided at P = 0.
    const double h = 1e-4 * std::max(p0, c.noise_d / g.h2_ed);
    auto fd = [&](const std::function<double(double)>& f) {
      return p0 > 0 ? (f(p0 + h) - f(p0 - h)) / (2.0 * h)
                    : (-3.0 * f(0.0) + 4.0 * f(h) - f(2.0 * h)) / (2.0 * h);
    };
    CHECK(rel(lo.coefficient("p_e"), fd(rd)) < 1e-6);
    CHECK(rel(hi.coefficient("p_e"), fd(rd1)) < 1e-6);
    for (int i = 0; i < 1000; ++i) {
      const double p = s.max_jamming_power * i / 999.0;
      CHECK(lo.evaluate({{"p_e", p}}) <= rd(p) + 1e-12);
      CHECK(hi.evaluate({{"p_e", p}}) >= rd1(p) - 1e-12);
    }
  }
}

TEST_CASE("vertical bounds") {
  const Scenario s = reference_scenario1();
  const LinkConstants c = LinkConstants::from(s);
  const Vec2 q(60, 250);
  const PlanarDistances pl{(q - s.source).squaredNorm(), (q - s.relay).squaredNorm(),
                           (q - s.destination).squaredNorm()};
  const double z0 = 130, p = 0.02;
  const double zh0 = z0 * z0, zer0 = (z0 - s.relay_height) * (z0 - s.relay_height);
  const VerticalBounds v = bounds_vertical(c, pl, p, z0, zh0, zer0);

  auto re1 = [&](double zh, double zer) { return eavesdropper_rate1(c, pl.se + zh, pl.re + zer); };
  auto rdz = [&](double zh) { return destination_rate_of_distance(c, p, pl.ed + zh); };
  auto re2 = [&](double zer) { return eavesdropper_rate2(c, pl.re + zer); };

  CHECK(rel(v.re1.evaluate({}), re1(zh0, zer0)) < 1e-10);
  CHECK(rel(v.rd.evaluate({}), rdz(zh0)) < 1e-10);
  CHECK(rel(v.re2.evaluate({}), re2(zer0)) < 1e-10);
  CHECK(v.height.evaluate({}) == z0 * z0);

  CHECK(rel(v.re1.coefficient("z_h"), central([&](double x) { return re1(x, zer0); }, zh0)) < 1e-6);
  CHECK(rel(v.re1.coefficient("z_er"), central([&](double y) { return re1(zh0, y); }, zer0)) < 1e-6);
  CHECK(rel(v.rd.coefficient("z_h"), central(rdz, zh0)) < 1e-6);
  CHECK(rel(v.re2.coefficient("z_er"), central(re2, zer0)) < 1e-6);

  for (double z = -300; z <= 300; z += 0.7) CHECK(v.height.evaluate({{"z", z}}) <= z * z + 1e-9);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> zz(60.0, 200.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = zz(rng), b = zz(rng);
    const double zh = a * a, zer = (b - s.relay_height) * (b - s.relay_height);
    CHECK(v.re1.evaluate({{"z_h", zh}, {"z_er", zer}}) <= re1(zh, zer) + 1e-12);
    CHECK(v.re2.evaluate({{"z_er", zer}}) <= re2(zer) + 1e-12);
    CHECK(v.rd.evaluate({{"z_h", zh}}) >= rdz(zh) - 1e-12);
  }
}

TEST_CASE("expansion floor") {
  CHECK(floor_expansion(0.25, "d") == kExpansionFloor);
  CHECK(floor_expansion(4.0, "d") == 4.0);
  CHECK_THROWS_AS(floor_expansion(0.0, "d"), std::domain_error);
  CHECK_THROWS_AS(floor_expansion(-3.0, "d"), std::domain_error);
  const LinkConstants c = scenario_constants();
  CHECK(lb_re2(c, 0.5).expansion.at("d_re") == kExpansionFloor);
  CHECK_THROWS_AS(lb_re1(c, 0.0, 10.0), std::domain_error);
}

TEST_CASE("tight slack state") {
  const Scenario s = reference_scenario1();
  const TrajectoryPlan plan = initial_trajectory(s);
  const JammingSchedule sched = JammingSchedule::constant(plan.pose_count(), 0.01);
  const SlackState st = SlackState::from_iterate(s, plan, sched);
  REQUIRE(st.d_se.size() == 101);
  const Vec3 e = plan.pose(30).point();
  CHECK(st.d_se[30] == doctest::Approx((e - s.source3()).squaredNorm()));
  CHECK(st.d_re[30] == doctest::Approx((e - s.relay3()).squaredNorm()));
  CHECK(st.d_ed[30] == doctest::Approx((e - s.destination3()).squaredNorm()));
  CHECK(st.z_er[30] == doctest::Approx(2500.0));
  // tau solves 1/tau^2 = tau^2 + upsilon^2/v0^2 at the current speed.
  const double t = st.tau[30], u = st.speed[30], v0 = s.rotor.hover_induced_velocity;
  CHECK(1.0 / (t * t) == doctest::Approx(t * t + u * u / (v0 * v0)).epsilon(1e-12));
  CHECK_THROWS_AS(SlackState::from_iterate(s, plan, JammingSchedule::constant(3, 0.0)), std::invalid_argument);
}

TEST_CASE("convexity checker") {
  const Lemma1Report ones = check_lemma1_convexity({1, 1, 1, 1}, 1000);
  CHECK(ones.passed);
  CHECK(ones.samples == 1000);
  CHECK_FALSE(ones.witness.has_value());
  CHECK(check_lemma1_convexity({1, 2, 0.5, 0}, 1000, 9).passed);
  CHECK(check_lemma1_convexity({1, 1e-3, 4e2, 7}, 1000, 13, 1e-2, 1e3).passed);

  // Negative c2 makes f concave in x and must produce a witness.
  const Lemma1Report bad = check_lemma1_convexity({10, -1, 0, 0}, 200, 3, 0.2, 5.0);
  CHECK_FALSE(bad.passed);
  REQUIRE(bad.witness.has_value());
  CHECK(bad.witness->minor1 < 0.0);

  const Lemma1Coefficients c{1, 1, 1, 1};
  for (auto [x, y] : {std::pair{0.3, 2.0}, std::pair{7.0, 0.9}, std::pair{50.0, 80.0}}) {
    CHECK(rel(lemma1_dfdx(c, x, y), central([&](double a) { return lemma1_value(c, a, y); }, x)) < 1e-6);
    CHECK(rel(lemma1_dfdy(c, x, y), central([&](double b) { return lemma1_value(c, x, b); }, y)) < 1e-6);
  }
}
