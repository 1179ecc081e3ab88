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

// Physical-layer model of the S -> R -> D relay link monitored by a
// full-duplex aerial eavesdropper E. Every link is line-of-sight with power
// gain beta0 / d^2; amplitudes are the nonnegative square roots of the gains.

#pragma once

#include <vector>

#include "uavpe/plan.hpp"
#include "uavpe/scenario.hpp"

namespace uavpe {

/// Squared-distance power gains of the five links for one eavesdropper pose.
struct LinkGains {
  double h2_se = 0.0;
  double h2_sr = 0.0;
  double h2_re = 0.0;
  double h2_rd = 0.0;
  double h2_ed = 0.0;
};

/// Pose-independent quantities shared by every rate expression.
struct LinkConstants {
  double beta0 = 0.0;
  double noise = 0.0;         // sigma^2
  double source_power = 0.0;  // P_S
  double k2 = 0.0;            // squared amplification coefficient
  double rho_s = 0.0;         // P_S / sigma^2
  double d_sr = 0.0;          // squared S-R distance
  double h2_sr = 0.0;
  double h2_rd = 0.0;
  double signal_d = 0.0;  // K^2 h_SR^2 h_RD^2 P_S, the useful power at D
  double noise_d = 0.0;   // (1 + K^2 h_RD^2) sigma^2, forwarded + local noise at D

  static LinkConstants from(const Scenario& s);
};

/// beta0 / |p1 - p2|^2. Throws std::domain_error for coincident points.
double channel_gain(const Vec3& p1, const Vec3& p2, double beta0);

/// K = sqrt(P_R / (sigma^2 + P_S h_SR^2)).
double amplification_coeff(const Scenario& s);

LinkGains link_gains(const Scenario& s, const UavPose& pose);

/// SNR at the destination under jamming power `jamming` (W).
double snr_destination(const Scenario& s, const UavPose& pose, double jamming);
double snr_destination(const LinkConstants& c, const LinkGains& g, double jamming);

/// SNR at the eavesdropper, combining the direct and relayed copies coherently.
double snr_eavesdropper(const Scenario& s, const UavPose& pose);
double snr_eavesdropper(const LinkConstants& c, const LinkGains& g);

/// log2(1 + snr).
double rate(double snr);

/// R_D when surveillance succeeds (R_E >= R_D), otherwise 0.
double eavesdropping_rate(double rate_d, double rate_e);

// Rate expressions written over squared distances. These are the functions
// the convex surrogates bound; `d_*` are squared 3D distances in m^2.

/// Destination rate with the E-D squared distance as a free argument.
double destination_rate_of_distance(const LinkConstants& c, double jamming, double d_ed);
/// First term of the eavesdropper-rate split R_E = R_E1 - R_E2.
double eavesdropper_rate1(const LinkConstants& c, double d_se, double d_re);
/// Second term of the split, log2(1 + beta0 K^2 / d_re).
double eavesdropper_rate2(const LinkConstants& c, double d_re);

/// Destination-rate split R_D = R_D1 - R_D2 used by the power subproblem.
double destination_rate1(const LinkConstants& c, double h2_ed, double jamming);
double destination_rate2(const LinkConstants& c, double h2_ed, double jamming);

/// Per-slot link outcome.
struct SlotRates {
  double rate_d = 0.0;
  double rate_e = 0.0;
  double er = 0.0;
};

/// Evaluates R_D, R_E and the eavesdropping rate at every pose. A slot
/// counts as successful when R_E >= R_D - success_tolerance.
std::vector<SlotRates> slot_rates(const Scenario& s, const TrajectoryPlan& plan,
                                  const JammingSchedule& schedule,
                                  double success_tolerance = 0.0);

/// Average eavesdropping rate: mean of the per-slot ER over all poses.
/// Throws std::invalid_argument when the plan and schedule disagree in length.
double average_er(const Scenario& s, const TrajectoryPlan& plan,
                  const JammingSchedule& schedule, double success_tolerance = 0.0);

/// Rotary-wing horizontal propulsion power at speed `speed` (m/s).
double horizontal_power(double speed, const RotorParams& rotor);

/// Induced-power factor (sqrt(1 + v^4/(4 v0^4)) - v^2/(2 v0^2))^(1/2).
double induced_power_factor(double speed, double hover_induced_velocity);

/// Climb power W * v_z; zero when descending or hovering.
double vertical_power(double vertical_speed, double weight);

}  // namespace uavpe
