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

#include "uavpe/sca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>

namespace uavpe {

namespace {

constexpr double kLn2 = std::numbers::ln2;

AffineBound make_bound(double value, BoundSense sense,
                       std::initializer_list<std::tuple<const char*, double, double>> terms) {
  AffineBound b;
  b.value = value;
  b.sense = sense;
  for (const auto& [name, grad, x0] : terms) {
    b.gradient[name] = grad;
    b.expansion[name] = x0;
  }
  return b;
}

// Log-argument of R_E1 and its partial derivatives in the two squared
// distances:
//   A = 1 + b K^2/d_re + rho (b/d_se + b^2 K^2/(d_sr d_re) + 2 sqrt(b^3 K^2/(d_se d_sr d_re))).
struct Re1Expansion {
  double a;
  double da_dse;
  double da_dre;
};

Re1Expansion re1_expansion(const LinkConstants& c, double d_se, double d_re) {
  const double b = c.beta0;
  const double cross = std::sqrt(b * b * b * c.k2 / (d_se * c.d_sr * d_re));  // half the cross term
  Re1Expansion e;
  e.a = 1.0 + b * c.k2 / d_re + c.rho_s * (b / d_se + b * b * c.k2 / (c.d_sr * d_re) + 2.0 * cross);
  e.da_dse = -c.rho_s * (b / (d_se * d_se) + cross / d_se);
  e.da_dre = -b * c.k2 / (d_re * d_re) - c.rho_s * (b * b * c.k2 / (c.d_sr * d_re * d_re) + cross / d_re);
  return e;
}

// R_D as a function of the E-D squared distance: A = 1 + signal/(noise + P b/d).
struct RdExpansion {
  double a;
  double da_dd;
};

RdExpansion rd_expansion(const LinkConstants& c, double jamming, double d_ed) {
  const double interference = jamming * c.beta0 / d_ed;
  const double den = c.noise_d + interference;
  return {1.0 + c.signal_d / den, c.signal_d * (interference / d_ed) / (den * den)};
}

}  // namespace

double AffineBound::coefficient(const std::string& var) const {
  const auto it = gradient.find(var);
  return it == gradient.end() ? 0.0 : it->second;
}

double AffineBound::offset() const {
  double v = value;
  for (const auto& [name, g] : gradient) v -= g * expansion.at(name);
  return v;
}

double AffineBound::evaluate(const std::map<std::string, double>& point) const {
  double v = value;
  for (const auto& [name, g] : gradient) {
    const auto it = point.find(name);
    if (it != point.end()) v += g * (it->second - expansion.at(name));
  }
  return v;
}

double floor_expansion(double d, const char* what) {
  if (!(d > 0.0) || !std::isfinite(d))
    throw std::domain_error(std::string("nonpositive expansion value for ") + what);
  return std::max(d, kExpansionFloor);
}

SlackState SlackState::from_iterate(const Scenario& s, const TrajectoryPlan& plan,
                                    const JammingSchedule& schedule) {
  const int poses = plan.pose_count();
  if (static_cast<int>(schedule.power.size()) != poses)
    throw std::invalid_argument("SlackState: plan and schedule lengths differ");
  SlackState st;
  for (int n = 0; n < poses; ++n) {
    const Vec3 e = plan.pose(n).point();
    const double z = plan.height[n];
    const double speed = plan.velocity[n].norm();
    st.d_se.push_back((e - s.source3()).squaredNorm());
    st.d_re.push_back((e - s.relay3()).squaredNorm());
    st.d_ed.push_back((e - s.destination3()).squaredNorm());
    st.z_h.push_back(z * z);
    st.z_er.push_back((z - s.relay_height) * (z - s.relay_height));
    st.speed.push_back(speed);
    st.tau.push_back(induced_power_factor(speed, s.rotor.hover_induced_velocity));
    st.jamming.push_back(schedule.power[n]);
  }
  return st;
}

AffineBound lb_re1(const LinkConstants& c, double d_se0, double d_re0) {
  const double dse = floor_expansion(d_se0, "d_se");
  const double dre = floor_expansion(d_re0, "d_re");
  const Re1Expansion e = re1_expansion(c, dse, dre);
  return make_bound(std::log2(e.a), BoundSense::kLower,
                    {{"d_se", e.da_dse / (kLn2 * e.a), dse}, {"d_re", e.da_dre / (kLn2 * e.a), dre}});
}

AffineBound lb_distance_ed(const Vec2& q0, const Vec2& q_d, double z) {
  const Vec2 diff = q0 - q_d;
  return make_bound(diff.squaredNorm() + z * z, BoundSense::kLower,
                    {{"q_x", 2.0 * diff.x(), q0.x()}, {"q_y", 2.0 * diff.y(), q0.y()}});
}

AffineBound ub_rd(const LinkConstants& c, double jamming, double d_ed0) {
  const double d = floor_expansion(d_ed0, "d_ed");
  const RdExpansion e = rd_expansion(c, jamming, d);
  return make_bound(std::log2(e.a), BoundSense::kUpper, {{"d_ed", e.da_dd / (kLn2 * e.a), d}});
}

AffineBound lb_re2(const LinkConstants& c, double d_re0) {
  const double d = floor_expansion(d_re0, "d_re");
  const double a = 1.0 + c.beta0 * c.k2 / d;
  const double da = -c.beta0 * c.k2 / (d * d);
  return make_bound(std::log2(a), BoundSense::kLower, {{"d_re", da / (kLn2 * a), d}});
}

AffineBound lb_propulsion_tau(double tau0, double speed0, double hover_induced_velocity) {
  const double v02 = hover_induced_velocity * hover_induced_velocity;
  return make_bound(tau0 * tau0 + speed0 * speed0 / v02, BoundSense::kLower,
                    {{"tau", 2.0 * tau0, tau0}, {"upsilon", 2.0 * speed0 / v02, speed0}});
}

std::vector<AffineBound> lb_re1_horizontal(const LinkConstants& c, const SlackState& st) {
  std::vector<AffineBound> out;
  for (std::size_t n = 0; n < st.d_se.size(); ++n) out.push_back(lb_re1(c, st.d_se[n], st.d_re[n]));
  return out;
}

std::vector<AffineBound> lb_distance_ed_horizontal(const Scenario& s, const TrajectoryPlan& plan) {
  std::vector<AffineBound> out;
  for (int n = 0; n < plan.pose_count(); ++n)
    out.push_back(lb_distance_ed(plan.position[n], s.destination, plan.height[n]));
  return out;
}

std::vector<AffineBound> ub_rd_horizontal(const LinkConstants& c, const SlackState& st) {
  std::vector<AffineBound> out;
  for (std::size_t n = 0; n < st.d_ed.size(); ++n) out.push_back(ub_rd(c, st.jamming[n], st.d_ed[n]));
  return out;
}

std::vector<AffineBound> lb_re2_horizontal(const LinkConstants& c, const SlackState& st) {
  std::vector<AffineBound> out;
  for (double d : st.d_re) out.push_back(lb_re2(c, d));
  return out;
}

std::vector<AffineBound> lb_propulsion_tau_horizontal(const Scenario& s, const SlackState& st) {
  std::vector<AffineBound> out;
  for (std::size_t n = 0; n < st.tau.size(); ++n)
    out.push_back(lb_propulsion_tau(st.tau[n], st.speed[n], s.rotor.hover_induced_velocity));
  return out;
}

AffineBound lb_rd_power(const LinkConstants& c, double h2_ed, double p0) {
  const double den = c.noise_d + p0 * h2_ed;
  const double a = 1.0 + c.signal_d / den;
  const double b = -c.signal_d * h2_ed / (den * den);
  return make_bound(std::log2(a), BoundSense::kLower, {{"p_e", b / (kLn2 * a), p0}});
}

AffineBound ub_rd1_power(const LinkConstants& c, double h2_ed, double p0) {
  const double a = c.noise_d + p0 * h2_ed + c.signal_d;
  return make_bound(std::log2(a), BoundSense::kUpper, {{"p_e", h2_ed / (kLn2 * a), p0}});
}

VerticalBounds bounds_vertical(const LinkConstants& c, const PlanarDistances& planar, double jamming,
                               double z0, double z_h0, double z_er0) {
  if (!(z_h0 > 0.0)) throw std::domain_error("nonpositive expansion value for z_h");
  if (!(z_er0 > 0.0)) throw std::domain_error("nonpositive expansion value for z_er");
  const double dse = floor_expansion(planar.se + z_h0, "d~_se");
  const double dre = floor_expansion(planar.re + z_er0, "d~_re");
  const double ded = floor_expansion(planar.ed + z_h0, "d~_ed");

  VerticalBounds v;
  // d~_se = |q - q_S|^2 + z_h and d~_re = |q - q_R|^2 + z_er, so the z_h
  // slope is the d_se partial and the z_er slope is the d_re partial.
  const Re1Expansion e = re1_expansion(c, dse, dre);
  v.re1 = make_bound(std::log2(e.a), BoundSense::kLower,
                     {{"z_h", e.da_dse / (kLn2 * e.a), z_h0}, {"z_er", e.da_dre / (kLn2 * e.a), z_er0}});
  v.height = make_bound(z0 * z0, BoundSense::kLower, {{"z", 2.0 * z0, z0}});
  const RdExpansion r = rd_expansion(c, jamming, ded);
  v.rd = make_bound(std::log2(r.a), BoundSense::kUpper, {{"z_h", r.da_dd / (kLn2 * r.a), z_h0}});
  const double a6 = 1.0 + c.beta0 * c.k2 / dre;
  const double b6 = -c.beta0 * c.k2 / (dre * dre);
  v.re2 = make_bound(std::log2(a6), BoundSense::kLower, {{"z_er", b6 / (kLn2 * a6), z_er0}});
  return v;
}

std::vector<VerticalBounds> bounds_vertical(const Scenario& s, const TrajectoryPlan& plan,
                                            const SlackState& st) {
  const LinkConstants c = LinkConstants::from(s);
  std::vector<VerticalBounds> out;
  for (int n = 0; n < plan.pose_count(); ++n) {
    const Vec2& q = plan.position[n];
    const PlanarDistances planar{(q - s.source).squaredNorm(), (q - s.relay).squaredNorm(),
                                 (q - s.destination).squaredNorm()};
    out.push_back(bounds_vertical(c, planar, st.jamming[n], plan.height[n], st.z_h[n], st.z_er[n]));
  }
  return out;
}

double lemma1_value(const Lemma1Coefficients& c, double x, double y) {
  return std::log2(c[0] + c[1] / x + c[2] / y + c[3] / std::sqrt(x * y));
}

double lemma1_dfdx(const Lemma1Coefficients& c, double x, double y) {
  const double g = c[0] + c[1] / x + c[2] / y + c[3] / std::sqrt(x * y);
  return (-c[1] / (x * x) - 0.5 * c[3] * std::pow(x, -1.5) / std::sqrt(y)) / (kLn2 * g);
}

double lemma1_dfdy(const Lemma1Coefficients& c, double x, double y) {
  const double g = c[0] + c[1] / x + c[2] / y + c[3] / std::sqrt(x * y);
  return (-c[2] / (y * y) - 0.5 * c[3] * std::pow(y, -1.5) / std::sqrt(x)) / (kLn2 * g);
}

Lemma1Report check_lemma1_convexity(const Lemma1Coefficients& c, int n_samples, std::uint64_t seed,
                                    double lo, double hi, double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Lemma1Report report;
  report.worst_minor1 = std::numeric_limits<double>::infinity();
  report.worst_minor2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double x = std::exp(u(rng));
    const double y = std::exp(u(rng));
    const double hx = 1e-4 * x;
    const double hy = 1e-4 * y;
    auto f = [&](double a, double b) { return lemma1_value(c, a, b); };
    const double f0 = f(x, y);
    const double fxx = (f(x + hx, y) - 2.0 * f0 + f(x - hx, y)) / (hx * hx);
    const double fyy = (f(x, y + hy) - 2.0 * f0 + f(x, y - hy)) / (hy * hy);
    const double fxy =
        (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy)) / (4.0 * hx * hy);
    const double sxx = x * x * fxx;
    const double syy = y * y * fyy;
    const double sxy = x * y * fxy;
    const double m1 = sxx;
    const double m2 = sxx * syy - sxy * sxy;
    ++report.samples;
    report.worst_minor1 = std::min(report.worst_minor1, m1);
    report.worst_minor2 = std::min(report.worst_minor2, m2);
    if ((m1 < -tol || m2 < -tol) && !report.witness) {
      report.passed = false;
      report.witness = Lemma1Sample{x, y, m1, m2};
    }
  }
  return report;
}

}  // namespace uavpe
