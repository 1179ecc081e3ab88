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

// First-order (tangent) bounds used by the successive convex approximation
// subproblems, and a numerical convexity checker for
//   f(x, y) = log2(c1 + c2/x + c3/y + c4/sqrt(x y)).

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uavpe/model.hpp"
#include "uavpe/plan.hpp"
#include "uavpe/scenario.hpp"

namespace uavpe {

enum class BoundSense { kLower, kUpper };

/// value + sum_k gradient[k] * (x_k - expansion[k]).
struct AffineBound {
  double value = 0.0;  // bounded function at the expansion point
  std::map<std::string, double> gradient;
  std::map<std::string, double> expansion;
  BoundSense sense = BoundSense::kLower;

  double coefficient(const std::string& var) const;
  /// Constant term of the affine form once expanded: value - g'x0.
  double offset() const;
  /// Missing variables are taken at their expansion value.
  double evaluate(const std::map<std::string, double>& point) const;
};

/// Expansion values at the current iterate, one entry per pose n = 0..N.
/// `speed` and `tau` at index 0 are carried along but unused (the
/// propulsion relaxation covers n = 1..N).
struct SlackState {
  std::vector<double> d_se;     // m^2
  std::vector<double> d_re;     // m^2
  std::vector<double> d_ed;     // m^2
  std::vector<double> z_h;      // m^2, relaxes z^2
  std::vector<double> z_er;     // m^2, relaxes (z - z_R)^2
  std::vector<double> speed;    // upsilon, m/s
  std::vector<double> tau;      // dimensionless
  std::vector<double> jamming;  // W

  /// Tight slacks: true squared distances, upsilon = |v|, tau at its
  /// defining equality, z_h = z^2, z_er = (z - z_R)^2.
  static SlackState from_iterate(const Scenario& s, const TrajectoryPlan& plan,
                                 const JammingSchedule& schedule);
};

/// Smallest admissible expansion distance (m^2). Positive values below it
/// are raised to it; nonpositive values throw std::domain_error.
inline constexpr double kExpansionFloor = 1.0;
double floor_expansion(double d, const char* what);

// Horizontal subproblem -------------------------------------------------

/// Lower bound of R_E1 in (d_se, d_re). Variables "d_se", "d_re".
AffineBound lb_re1(const LinkConstants& c, double d_se0, double d_re0);
/// Lower bound of ||q - q_D||^2 + z^2 in q. Variables "q_x", "q_y".
AffineBound lb_distance_ed(const Vec2& q0, const Vec2& q_d, double z);
/// Upper bound of R_D(d_ed) at fixed jamming power. Variable "d_ed".
AffineBound ub_rd(const LinkConstants& c, double jamming, double d_ed0);
/// Lower bound of R_E2(d_re). Variable "d_re".
AffineBound lb_re2(const LinkConstants& c, double d_re0);
/// Lower bound of tau^2 + upsilon^2/v0^2. Variables "tau", "upsilon".
AffineBound lb_propulsion_tau(double tau0, double speed0, double hover_induced_velocity);

std::vector<AffineBound> lb_re1_horizontal(const LinkConstants& c, const SlackState& st);
std::vector<AffineBound> lb_distance_ed_horizontal(const Scenario& s, const TrajectoryPlan& plan);
std::vector<AffineBound> ub_rd_horizontal(const LinkConstants& c, const SlackState& st);
std::vector<AffineBound> lb_re2_horizontal(const LinkConstants& c, const SlackState& st);
std::vector<AffineBound> lb_propulsion_tau_horizontal(const Scenario& s, const SlackState& st);

// Power subproblem ------------------------------------------------------

/// Lower bound of R_D(P) for a fixed pose. Variable "p_e".
AffineBound lb_rd_power(const LinkConstants& c, double h2_ed, double p0);
/// Upper bound of R_D1(P) = log2(noise_d + P h2_ed + signal_d). Variable "p_e".
AffineBound ub_rd1_power(const LinkConstants& c, double h2_ed, double p0);

// Vertical subproblem ---------------------------------------------------

/// Horizontal squared distances from the fixed horizontal position.
struct PlanarDistances {
  double se = 0.0;
  double re = 0.0;
  double ed = 0.0;
};

struct VerticalBounds {
  AffineBound re1;     // lower bound of R~_E1, variables "z_h", "z_er"
  AffineBound height;  // lower bound of z^2, variable "z"
  AffineBound rd;      // upper bound of R~_D, variable "z_h"
  AffineBound re2;     // lower bound of R~_E2, variable "z_er"
};

VerticalBounds bounds_vertical(const LinkConstants& c, const PlanarDistances& planar, double jamming,
                               double z0, double z_h0, double z_er0);

std::vector<VerticalBounds> bounds_vertical(const Scenario& s, const TrajectoryPlan& plan,
                                            const SlackState& st);

// Convexity checker -----------------------------------------------------

using Lemma1Coefficients = std::array<double, 4>;

double lemma1_value(const Lemma1Coefficients& c, double x, double y);
/// Closed-form partial derivatives of lemma1_value.
double lemma1_dfdx(const Lemma1Coefficients& c, double x, double y);
double lemma1_dfdy(const Lemma1Coefficients& c, double x, double y);

struct Lemma1Sample {
  double x = 0.0;
  double y = 0.0;
  double minor1 = 0.0;  // leading principal minors of diag(x,y) H diag(x,y)
  double minor2 = 0.0;
};

struct Lemma1Report {
  bool passed = true;
  int samples = 0;
  double worst_minor1 = 0.0;
  double worst_minor2 = 0.0;
  std::optional<Lemma1Sample> witness;  // first failing sample
};

/// Samples (x, y) log-uniformly in [lo, hi]^2 and checks that the central
/// finite-difference Hessian has both leading principal minors >= -tol.
/// The Hessian is congruence-scaled by diag(x, y) first, which keeps the
/// signs of the minors and puts the entries on a common scale.
Lemma1Report check_lemma1_convexity(const Lemma1Coefficients& c, int n_samples, std::uint64_t seed = 1,
                                    double lo = 0.1, double hi = 100.0, double tol = 1e-8);

}  // namespace uavpe
