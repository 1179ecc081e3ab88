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

#include "uavpe/model.hpp"

#include <cmath>
#include <stdexcept>

namespace uavpe {

LinkConstants LinkConstants::from(const Scenario& s) {
  LinkConstants c;
  c.beta0 = s.reference_gain;
  c.noise = s.noise_power;
  c.source_power = s.source_power;
  c.d_sr = (s.relay3() - s.source3()).squaredNorm();
  c.h2_sr = channel_gain(s.source3(), s.relay3(), s.reference_gain);
  c.h2_rd = channel_gain(s.relay3(), s.destination3(), s.reference_gain);
  c.k2 = s.relay_power / (s.noise_power + s.source_power * c.h2_sr);
  c.rho_s = s.source_power / s.noise_power;
  c.signal_d = c.k2 * c.h2_sr * c.h2_rd * s.source_power;
  c.noise_d = (1.0 + c.k2 * c.h2_rd) * s.noise_power;
  return c;
}

double channel_gain(const Vec3& p1, const Vec3& p2, double beta0) {
  const double d2 = (p1 - p2).squaredNorm();
  if (!(d2 > 0.0)) throw std::domain_error("channel_gain: coincident points");
  return beta0 / d2;
}

double amplification_coeff(const Scenario& s) {
  const double h2_sr = channel_gain(s.source3(), s.relay3(), s.reference_gain);
  return std::sqrt(s.relay_power / (s.noise_power + s.source_power * h2_sr));
}

LinkGains link_gains(const Scenario& s, const UavPose& pose) {
  const Vec3 e = pose.point();
  const double b = s.reference_gain;
  return {channel_gain(e, s.source3(), b), channel_gain(s.source3(), s.relay3(), b),
          channel_gain(e, s.relay3(), b), channel_gain(s.relay3(), s.destination3(), b),
          channel_gain(e, s.destination3(), b)};
}

double snr_destination(const LinkConstants& c, const LinkGains& g, double jamming) {
  return c.signal_d / (c.noise_d + jamming * g.h2_ed);
}

double snr_destination(const Scenario& s, const UavPose& pose, double jamming) {
  return snr_destination(LinkConstants::from(s), link_gains(s, pose), jamming);
}

double snr_eavesdropper(const LinkConstants& c, const LinkGains& g) {
  const double amplitude =
      std::sqrt(g.h2_se) + std::sqrt(c.k2) * std::sqrt(c.h2_sr) * std::sqrt(g.h2_re);
  return c.source_power * amplitude * amplitude / ((1.0 + c.k2 * g.h2_re) * c.noise);
}

double snr_eavesdropper(const Scenario& s, const UavPose& pose) {
  return snr_eavesdropper(LinkConstants::from(s), link_gains(s, pose));
}

double rate(double snr) { return std::log2(1.0 + snr); }

double eavesdropping_rate(double rate_d, double rate_e) {
  return rate_e >= rate_d ? rate_d : 0.0;
}

double destination_rate_of_distance(const LinkConstants& c, double jamming, double d_ed) {
  return std::log2(1.0 + c.signal_d / (c.noise_d + jamming * c.beta0 / d_ed));
}

double eavesdropper_rate1(const LinkConstants& c, double d_se, double d_re) {
  const double b = c.beta0;
  const double cross = std::sqrt(4.0 * b * b * b * c.k2 / (d_se * c.d_sr * d_re));
  return std::log2(1.0 + b * c.k2 / d_re + c.rho_s * (b / d_se + b * b * c.k2 / (c.d_sr * d_re) + cross));
}

double eavesdropper_rate2(const LinkConstants& c, double d_re) {
  return std::log2(1.0 + c.beta0 * c.k2 / d_re);
}

double destination_rate1(const LinkConstants& c, double h2_ed, double jamming) {
  return std::log2(c.noise_d + jamming * h2_ed + c.signal_d);
}

double destination_rate2(const LinkConstants& c, double h2_ed, double jamming) {
  return std::log2(c.noise_d + jamming * h2_ed);
}

std::vector<SlotRates> slot_rates(const Scenario& s, const TrajectoryPlan& plan,
                                  const JammingSchedule& schedule, double success_tolerance) {
  if (plan.pose_count() != static_cast<int>(schedule.power.size()))
    throw std::invalid_argument("slot_rates: plan and schedule lengths differ");
  const LinkConstants c = LinkConstants::from(s);
  std::vector<SlotRates> out(plan.pose_count());
  for (int n = 0; n < plan.pose_count(); ++n) {
    const LinkGains g = link_gains(s, plan.pose(n));
    SlotRates& r = out[n];
    r.rate_d = rate(snr_destination(c, g, schedule.power[n]));
    r.rate_e = rate(snr_eavesdropper(c, g));
    r.er = eavesdropping_rate(r.rate_d, r.rate_e + success_tolerance);
  }
  return out;
}

double average_er(const Scenario& s, const TrajectoryPlan& plan,
                  const JammingSchedule& schedule, double success_tolerance) {
  const std::vector<SlotRates> rates = slot_rates(s, plan, schedule, success_tolerance);
  if (rates.empty()) throw std::invalid_argument("average_er: empty plan");
  double sum = 0.0;
  for (const SlotRates& r : rates) sum += r.er;
  return sum / static_cast<double>(rates.size());
}

double induced_power_factor(double speed, double hover_induced_velocity) {
  const double r2 = speed * speed / (hover_induced_velocity * hover_induced_velocity);
  // sqrt(1 + r^4/4) - r^2/2 rewritten as 1 / (sqrt(1 + r^4/4) + r^2/2) to
  // avoid cancellation at high speed.
  const double inner = 1.0 / (std::sqrt(1.0 + 0.25 * r2 * r2) + 0.5 * r2);
  return std::sqrt(inner);
}

double horizontal_power(double speed, const RotorParams& r) {
  const double v2 = speed * speed;
  const double profile = r.blade_profile_power * (1.0 + 3.0 * v2 / (r.tip_speed * r.tip_speed));
  const double parasite =
      0.5 * r.fuselage_drag_ratio * r.air_density * r.rotor_solidity * r.disc_area * v2 * speed;
  const double induced = r.induced_power * induced_power_factor(speed, r.hover_induced_velocity);
  return profile + parasite + induced;
}

double vertical_power(double vertical_speed, double weight) {
  return vertical_speed > 0.0 ? weight * vertical_speed : 0.0;
}

}  // namespace uavpe
