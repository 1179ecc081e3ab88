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
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "uavpe/model.hpp"

using namespace uavpe;

namespace {

// Frozen with tests/oracles/scalar_oracles.py (40-digit mpmath).
constexpr double kOracleK2 = 2244948865.053629333998503367;
constexpr double kOracleGammaD = 8.528189129650328255;  // pose (0,0,100), P_E = 1 mW
constexpr double kOracleGammaE = 916.2131463867029706;  // pose (0,0,100)
constexpr double kOraclePhor10 = 118.0267323557646664387;

UavPose pose_at(double x, double y, double z) { return {Vec2(x, y), z}; }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("channel gain examples") {
  CHECK(channel_gain({0, 0, 100}, {-100, 0, 0}, 1e-5) == doctest::Approx(5.0e-10).epsilon(1e-14));
  CHECK(channel_gain({0, 0, 1}, {0, 0, 0}, 1.0) == 1.0);
  CHECK(channel_gain({0, 100, 100}, {0, 100, 50}, 1e-5) == doctest::Approx(4.0e-9).epsilon(1e-14));
  CHECK_THROWS_AS(channel_gain({1, 2, 3}, {1, 2, 3}, 1e-5), std::domain_error);
}

TEST_CASE("channel gain decreases with distance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-500.0, 500.0);
  std::uniform_real_distribution<double> scale(1.0001, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a(u(rng), u(rng), u(rng));
    Vec3 dir(u(rng), u(rng), u(rng));
    if (dir.norm() < 1e-3) continue;
    const Vec3 near = a + dir;
    const Vec3 far = a + scale(rng) * dir;
    CHECK(channel_gain(a, far, 1e-5) < channel_gain(a, near, 1e-5));
  }
}

TEST_CASE("amplification coefficient") {
  const Scenario s = reference_scenario1();
  const double k = amplification_coeff(s);
  CHECK(rel(k * k, kOracleK2) < 1e-12);
  CHECK(rel(LinkConstants::from(s).k2, kOracleK2) < 1e-12);

  Scenario unit = s;
  unit.source = Vec2(0, 0);
  unit.relay = Vec2(0, 0);
  unit.relay_height = 1.0;
  unit.reference_gain = 1.0;
  unit.relay_power = unit.source_power;
  unit.noise_power = 1e-300;
  CHECK(amplification_coeff(unit) == doctest::Approx(1.0).epsilon(1e-12));

  Scenario quiet = s;
  quiet.noise_power = 1e-40;
  const double h2_sr = s.reference_gain / 22500.0;
  CHECK(rel(std::pow(amplification_coeff(quiet), 2), s.relay_power / (s.source_power * h2_sr)) < 1e-12);
}

TEST_CASE("destination SNR") {
  const Scenario s = reference_scenario1();
  CHECK(rel(snr_destination(s, pose_at(0, 0, 100), 1e-3), kOracleGammaD) < 1e-12);

  const double free0 = snr_destination(s, pose_at(-300, 250, 100), 0.0);
  const double free1 = snr_destination(s, pose_at(420, -80, 170), 0.0);
  CHECK(rel(free0, free1) < 1e-14);

  double prev = snr_destination(s, pose_at(30, 40, 100), 0.0);
  for (double p = 1e-4; p <= 0.1; p *= 2.0) {
    const double g = snr_destination(s, pose_at(30, 40, 100), p);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("eavesdropper SNR") {
  const Scenario s = reference_scenario1();
  CHECK(rel(snr_eavesdropper(s, pose_at(0, 0, 100)), kOracleGammaE) < 1e-12);

  // Relay switched off leaves only the direct link.
  Scenario silent = s;
  silent.relay_power = 0.0;
  const UavPose e = pose_at(50, 200, 120);
  const double h2_se = channel_gain(e.point(), s.source3(), s.reference_gain);
  const LinkConstants c0 = LinkConstants::from(silent);
  CHECK(c0.k2 == 0.0);
  CHECK(rel(snr_eavesdropper(c0, link_gains(silent, e)), s.source_power * h2_se / s.noise_power) < 1e-12);
}

TEST_CASE("eavesdropper rate equals the split form on random poses") {
  const Scenario s = reference_scenario1();
  const LinkConstants c = LinkConstants::from(s);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xy(-600.0, 600.0);
  std::uniform_real_distribution<double> z(60.0, 200.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const UavPose e = pose_at(xy(rng), xy(rng), z(rng));
    const Vec3 p = e.point();
    const double d_se = (p - s.source3()).squaredNorm();
    const double d_re = (p - s.relay3()).squaredNorm();
    const double direct = rate(snr_eavesdropper(s, e));
    const double split = eavesdropper_rate1(c, d_se, d_re) - eavesdropper_rate2(c, d_re);
    worst = std::max(worst, rel(split, direct));
    // Expanded square carries the 2 K h_SE h_SR h_RE cross term.
    const LinkGains g = link_gains(s, e);
    const double sq = std::pow(std::sqrt(g.h2_se) + std::sqrt(c.k2 * g.h2_sr * g.h2_re), 2);
    const double expanded = g.h2_se + c.k2 * g.h2_sr * g.h2_re +
                            std::sqrt(4.0 * std::pow(s.reference_gain, 3) * c.k2 / (d_se * c.d_sr * d_re));
    CHECK(rel(expanded, sq) < 1e-12);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("destination rate split and distance form agree") {
  const Scenario s = reference_scenario1();
  const LinkConstants c = LinkConstants::from(s);
  const UavPose e = pose_at(120, 60, 100);
  const LinkGains g = link_gains(s, e);
  const double d_ed = (e.point() - s.destination3()).squaredNorm();
  for (double p : {0.0, 1e-3, 0.05}) {
    const double direct = rate(snr_destination(s, e, p));
    CHECK(rel(destination_rate_of_distance(c, p, d_ed), direct) < 1e-12);
    CHECK(rel(destination_rate1(c, g.h2_ed, p) - destination_rate2(c, g.h2_ed, p), direct) < 1e-12);
  }
}

TEST_CASE("rate and eavesdropping rate") {
  CHECK(rate(0.0) == 0.0);
  CHECK(rate(1.0) == 1.0);
  CHECK(rate(3.0) == 2.0);
  CHECK(eavesdropping_rate(2, 3) == 2);
  CHECK(eavesdropping_rate(3, 2) == 0);
  CHECK(eavesdropping_rate(2, 2) == 2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double rd = u(rng), re = u(rng);
    CHECK(eavesdropping_rate(rd, re) == (re >= rd ? rd : 0.0));
  }
}

TEST_CASE("average eavesdropping rate") {
  const Scenario s = reference_scenario1();
  TrajectoryPlan plan = TrajectoryPlan::zeros(2);
  plan.position = {Vec2(0, 0), Vec2(0, 0)};
  plan.height = {100, 100};

  // Far above the relay the eavesdropper always wins; strong jamming pulls
  // R_D down but never above R_E, so ER is R_D per slot.
  const JammingSchedule sched{{0.0, 0.1}};
  const auto rates = slot_rates(s, plan, sched);
  REQUIRE(rates.size() == 2);
  CHECK(rates[0].er == rates[0].rate_d);
  CHECK(rates[1].er == rates[1].rate_d);
  CHECK(average_er(s, plan, sched) == doctest::Approx((rates[0].er + rates[1].er) / 2.0).epsilon(1e-15));

  TrajectoryPlan one = TrajectoryPlan::zeros(1);
  one.height = {100};
  const JammingSchedule single{{0.0}};
  CHECK(average_er(s, one, single) == slot_rates(s, one, single)[0].er);

  // Far from both source and relay, with no jamming, every slot fails.
  TrajectoryPlan far = TrajectoryPlan::zeros(3);
  for (auto& q : far.position) q = Vec2(5000, 5000);
  far.height = {200, 200, 200};
  CHECK(average_er(s, far, JammingSchedule::constant(3, 0.0)) == 0.0);

  CHECK_THROWS_AS(average_er(s, plan, JammingSchedule::constant(3, 0.0)), std::invalid_argument);
}

TEST_CASE("horizontal propulsion power") {
  const RotorParams r;
  CHECK(horizontal_power(0.0, r) == doctest::Approx(183.0).epsilon(1e-14));
  CHECK(rel(horizontal_power(10.0, r), kOraclePhor10) < 1e-12);

  // Log-log slope tends to 3.
  const double slope = std::log(horizontal_power(4000.0, r) / horizontal_power(2000.0, r)) / std::log(2.0);
  CHECK(slope == doctest::Approx(3.0).epsilon(1e-2));

  // Convex above the inflection speed of the induced term (4.1524 m/s,
  // mpmath root of the second derivative); concave below it.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(4.16, 40.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(horizontal_power(0.5 * (a + b), r) <= 0.5 * (horizontal_power(a, r) + horizontal_power(b, r)) + 1e-9);
  }
  // mpmath: P(2) = 175.7049249980917, (P(0) + P(4)) / 2 = 170.2347205306554.
  CHECK(horizontal_power(2.0, r) == doctest::Approx(175.7049249980917).epsilon(1e-12));
  CHECK(0.5 * (horizontal_power(0.0, r) + horizontal_power(4.0, r)) ==
        doctest::Approx(170.2347205306554).epsilon(1e-12));
}

TEST_CASE("vertical propulsion power") {
  CHECK(vertical_power(0.0, 20.0) == 0.0);
  CHECK(vertical_power(10.0, 20.0) == 200.0);
  CHECK(vertical_power(-5.0, 20.0) == 0.0);
}

TEST_CASE("decibel conversion") {
  CHECK(dbm_to_watts(-110.0) == doctest::Approx(1e-14).epsilon(1e-12));
  CHECK(db_to_linear(-50.0) == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(dbm_to_watts(10.0) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(watts_to_dbm(0.01) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("scenario validation") {
  Scenario s = reference_scenario1();
  CHECK_NOTHROW(s.validate());
  s.relay_height = 70.0;  // above the altitude floor
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = reference_scenario1();
  s.min_height = 300.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = reference_scenario1();
  s.slots = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
