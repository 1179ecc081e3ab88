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

#include "uavpe/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace uavpe {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("invalid scenario: " + what);
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

void Scenario::validate() const {
  require(source_power > 0 && relay_power > 0, "transmit powers must be positive");
  require(max_jamming_power > 0, "max_jamming_power must be positive");
  require(noise_power > 0, "noise power must be positive");
  require(reference_gain > 0, "reference gain must be positive");
  require(relay_height > 0, "relay height must be positive");
  require(min_height <= max_height, "min_height must not exceed max_height");
  require(relay_height < min_height, "relay height must lie below min_height");
  require(fixed_height > 0, "fixed_height must be positive");
  require(max_speed_xy > 0 && max_speed_z > 0, "speed limits must be positive");
  require(max_accel_xy > 0 && max_accel_z > 0, "acceleration limits must be positive");
  require(horizontal_power_budget > 0 && vertical_power_budget > 0,
          "propulsion budgets must be positive");
  require(weight > 0, "weight must be positive");
  require(period > 0, "period must be positive");
  require(slots > 0, "slot count must be positive");
  require(tolerance > 0, "tolerance must be positive");
  const RotorParams& r = rotor;
  require(r.blade_profile_power > 0 && r.induced_power > 0 && r.tip_speed > 0 &&
              r.hover_induced_velocity > 0 && r.fuselage_drag_ratio > 0 &&
              r.air_density > 0 && r.rotor_solidity > 0 && r.disc_area > 0,
          "rotor constants must be positive");
  // Coincident points make the LoS gains singular.
  require((source3() - relay3()).squaredNorm() > 0, "source coincides with relay");
  require((relay3() - destination3()).squaredNorm() > 0, "relay coincides with destination");
}

Scenario reference_scenario1() {
  Scenario s;
  s.source_power = dbm_to_watts(10.0);
  s.relay_power = dbm_to_watts(10.0);
  s.noise_power = dbm_to_watts(-110.0);
  s.reference_gain = db_to_linear(-50.0);
  return s;
}

Scenario reference_scenario2() {
  Scenario s = reference_scenario1();
  s.relay = Vec2{0.0, -100.0};
  return s;
}

}  // namespace uavpe
