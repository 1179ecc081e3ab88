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

#include "uavpe/bcd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "uavpe/subproblems.hpp"

namespace uavpe {

namespace {

struct Blocks {
  bool horizontal = false;
  bool vertical = false;
  bool power = false;
  FlightMode mode = FlightMode::k2D;
};

Blocks blocks_for(Scheme scheme) {
  switch (scheme) {
    case Scheme::kProposed2D: return {true, false, true, FlightMode::k2D};
    case Scheme::kProposed3D: return {true, true, true, FlightMode::k3D};
    case Scheme::kFpot: return {true, false, false, FlightMode::k2D};
    case Scheme::kOpft: return {false, false, true, FlightMode::k2D};
  }
  return {};
}

struct Candidate {
  TrajectoryPlan plan;
  JammingSchedule schedule;
  std::vector<int> infeasible;
  std::string statuses;
  double residual = 0.0;
  bool ok = true;
  bool solver_infeasible = false;
  std::string failure;
};

TrajectoryPlan blend(const TrajectoryPlan& a, const TrajectoryPlan& b, double alpha) {
  // alpha * a + (1 - alpha) * b
  TrajectoryPlan out = b;
  for (int n = 0; n < a.pose_count(); ++n) {
    out.position[n] = alpha * a.position[n] + (1.0 - alpha) * b.position[n];
    out.height[n] = alpha * a.height[n] + (1.0 - alpha) * b.height[n];
    out.velocity[n] = alpha * a.velocity[n] + (1.0 - alpha) * b.velocity[n];
    out.vertical_velocity[n] = alpha * a.vertical_velocity[n] + (1.0 - alpha) * b.vertical_velocity[n];
    out.acceleration[n] = alpha * a.acceleration[n] + (1.0 - alpha) * b.acceleration[n];
    out.vertical_acceleration[n] = alpha * a.vertical_acceleration[n] + (1.0 - alpha) * b.vertical_acceleration[n];
  }
  return out;
}

void dump_program(const std::string& dir, const std::string& name, const opt::ConvexProgram& p) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = std::filesystem::path(dir) / (name + ".txt");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write program dump " + path.string());
  opt::write_program(out, p);
}

std::string program_text(const opt::ConvexProgram& p) {
  std::ostringstream os;
  opt::write_program(os, p);
  return os.str();
}

class Driver {
 public:
  Driver(const Scenario& s, Scheme scheme, const BcdOptions& o) : s_(s), scheme_(scheme), o_(o), b_(blocks_for(scheme)) {
    s_.validate();
  }

  RunResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r;
    r.scheme = scheme_;
    TrajectoryPlan plan = o_.initial_plan ? *o_.initial_plan : initial_trajectory(s_, b_.mode);
    JammingSchedule sched;
    if (scheme_ == Scheme::kFpot) {
      sched = JammingSchedule::constant(plan.pose_count(), o_.fixed_power >= 0.0 ? o_.fixed_power : s_.max_jamming_power);
    } else if (o_.initial_schedule) {
      sched = *o_.initial_schedule;
    } else {
      sched = JammingSchedule::constant(plan.pose_count(),
                                        o_.initial_power == InitialPower::kMax ? s_.max_jamming_power : 0.0);
    }
    if (static_cast<int>(sched.power.size()) != plan.pose_count())
      throw std::invalid_argument("initial schedule length does not match the plan");
    const double eps = o_.epsilon >= 0.0 ? o_.epsilon : s_.tolerance;

    std::vector<int> infeasible;
    double theta = average_er(s_, plan, sched, o_.success_tolerance);
    r.theta_trace.push_back(theta);
    r.stop_reason = "iteration limit";
    for (int j = 1; j <= o_.max_iterations; ++j) {
      Candidate c = sweep(plan, sched, j);
      IterationRecord rec;
      rec.iteration = j;
      rec.statuses = c.statuses;
      rec.residual = c.residual;
      if (!c.ok) {
        if (j == 1 && c.solver_infeasible) throw BcdError(c.failure, dump_);
        rec.accepted = false;
        rec.theta = theta;
        log(rec);
        r.records.push_back(rec);
        r.stop_reason = c.failure;
        break;
      }
      double cand = average_er(s_, c.plan, c.schedule, o_.success_tolerance);
      if (cand < theta - o_.monotone_slack && b_.horizontal &&
          check_feasibility(s_, plan, b_.mode).feasible()) {
        double alpha = 1.0;
        for (int k = 1; k <= o_.backtracks && cand < theta - o_.monotone_slack; ++k) {
          alpha *= 0.5;
          Candidate m;
          m.plan = blend(c.plan, plan, alpha);
          m.schedule = sched;
          if (b_.power) {
            PowerStep ps = power_update(s_, m.plan, sched, o_.power_method, o_.solver);
            m.schedule = std::move(ps.schedule);
            m.infeasible = std::move(ps.infeasible_slots);
          }
          const double mt = average_er(s_, m.plan, m.schedule, o_.success_tolerance);
          rec.backtracks = k;
          if (mt >= theta - o_.monotone_slack) {
            c.plan = std::move(m.plan);
            c.schedule = std::move(m.schedule);
            c.infeasible = std::move(m.infeasible);
            cand = mt;
          }
        }
      }
      if (cand < theta - o_.monotone_slack) {
        rec.accepted = false;
        rec.theta = cand;
        log(rec);
        r.records.push_back(rec);
        r.stop_reason = "no ascent; previous iterate kept";
        r.converged = true;
        break;
      }
      rec.theta = cand;
      log(rec);
      r.records.push_back(rec);
      const double change = std::abs(cand - theta);
      plan = std::move(c.plan);
      sched = std::move(c.schedule);
      infeasible = std::move(c.infeasible);
      theta = cand;
      r.theta_trace.push_back(theta);
      r.iterations = j;
      if (change <= eps) {
        r.converged = true;
        r.stop_reason = "converged";
        break;
      }
    }
    r.plan = std::move(plan);
    r.schedule = std::move(sched);
    r.infeasible_slots = std::move(infeasible);
    finalize_result(s_, &r, o_.success_tolerance);
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }

 private:
  Candidate sweep(const TrajectoryPlan& plan, const JammingSchedule& sched, int j) {
    Candidate c;
    c.plan = plan;
    c.schedule = sched;
    std::ostringstream statuses;
    auto fail = [&](const char* block, const opt::Solution& sol, const opt::ConvexProgram& p) {
      c.ok = false;
      c.solver_infeasible = sol.status == opt::SolveStatus::kInfeasible;
      c.failure = std::string(block) + " subproblem " + opt::to_string(sol.status) + ": " + sol.message;
      dump_ = program_text(p);
      c.statuses = statuses.str();
    };
    if (b_.horizontal) {
      const Iterate it = Iterate::from(s_, c.plan, c.schedule);
      const HorizontalProgram hp = build_horizontal(s_, it);
      dump_program(o_.dump_dir, "horizontal_" + std::to_string(j), hp.program);
      const opt::Solution sol = opt::solve(hp.program, o_.solver);
      statuses << "horizontal=" << opt::to_string(sol.status);
      c.residual = std::max(c.residual, sol.residual);
      if (!sol.optimal()) {
        fail("horizontal", sol, hp.program);
        return c;
      }
      c.plan = extract_horizontal(hp, sol.values, c.plan);
    }
    if (b_.vertical) {
      const Iterate it = Iterate::from(s_, c.plan, c.schedule);
      const VerticalProgram vp = build_vertical(s_, it);
      dump_program(o_.dump_dir, "vertical_" + std::to_string(j), vp.program);
      const opt::Solution sol = opt::solve(vp.program, o_.solver);
      statuses << (b_.horizontal ? " " : "") << "vertical=" << opt::to_string(sol.status);
      c.residual = std::max(c.residual, sol.residual);
      if (!sol.optimal()) {
        fail("vertical", sol, vp.program);
        return c;
      }
      c.plan = extract_vertical(vp, sol.values, c.plan);
    }
    if (b_.power) {
      if (!o_.dump_dir.empty()) {
        std::filesystem::create_directories(o_.dump_dir);
        std::ofstream out(std::filesystem::path(o_.dump_dir) / ("power_" + std::to_string(j) + ".txt"));
        for (int n = 0; n < c.plan.pose_count(); ++n)
          opt::write_program(out, build_power(power_slot(s_, c.plan, n, sched.power[n]), n).program);
      }
      PowerStep ps = power_update(s_, c.plan, sched, o_.power_method, o_.solver);
      c.schedule = std::move(ps.schedule);
      c.infeasible = std::move(ps.infeasible_slots);
      if (statuses.tellp() > 0) statuses << " ";
      statuses << "power=" << (c.infeasible.empty() ? "ok" : std::to_string(c.infeasible.size()) + " flagged");
      if (ps.generic_fallbacks > 0) statuses << " fallbacks=" << ps.generic_fallbacks;
    }
    c.statuses = statuses.str();
    return c;
  }

  void log(const IterationRecord& rec) const {
    if (!o_.log) return;
    char buf[96];
    std::snprintf(buf, sizeof buf, "j=%d theta=%.9f", rec.iteration, rec.theta);
    *o_.log << to_string(scheme_) << " " << buf << " " << rec.statuses;
    std::snprintf(buf, sizeof buf, " residual=%.3g", rec.residual);
    *o_.log << buf;
    if (rec.backtracks > 0) *o_.log << " backtracks=" << rec.backtracks;
    if (!rec.accepted) *o_.log << " rejected";
    *o_.log << '\n';
  }

  Scenario s_;
  Scheme scheme_;
  const BcdOptions& o_;
  Blocks b_;
  std::string dump_;
};

}  // namespace

const char* to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kProposed2D: return "2d";
    case Scheme::kProposed3D: return "3d";
    case Scheme::kFpot: return "fpot";
    case Scheme::kOpft: return "opft";
  }
  return "?";
}

PowerStep power_update(const Scenario& s, const TrajectoryPlan& plan, const JammingSchedule& previous,
                       PowerMethod method, const opt::SolverOptions& solver) {
  PowerStep out;
  const int poses = plan.pose_count();
  out.schedule.power.assign(poses, s.max_jamming_power);
  for (int n = 0; n < poses; ++n) {
    const opt::PowerSlot slot = power_slot(s, plan, n, previous.power.at(n));
    opt::PowerDecision d = opt::solve_power_bisection(slot);
    if (method == PowerMethod::kGeneric && d.feasible) {
      const PowerProgram pp = build_power(slot, n);
      const opt::Solution sol = opt::solve(pp.program, solver);
      if (sol.optimal()) d.power = sol.value(pp.power);
      else ++out.generic_fallbacks;
    }
    if (!d.feasible) {
      d.power = s.max_jamming_power;
      const double r_d = rate(snr_destination(slot.link, link_gains(s, plan.pose(n)), d.power));
      if (r_d > slot.rate_e) out.infeasible_slots.push_back(n);
    }
    out.schedule.power[n] = d.power;
  }
  return out;
}

void finalize_result(const Scenario& s, RunResult* r, double success_tolerance) {
  r->rates = slot_rates(s, r->plan, r->schedule, success_tolerance);
  for (int n : r->infeasible_slots) r->rates[n].er = 0.0;
  r->horizontal_power = horizontal_power_profile(s, r->plan);
  r->vertical_power = vertical_power_profile(s, r->plan);
}

RunResult run_algorithm1(const Scenario& s, const BcdOptions& options) {
  return Driver(s, Scheme::kProposed2D, options).run();
}

RunResult run_algorithm2(const Scenario& s, const BcdOptions& options) {
  return Driver(s, Scheme::kProposed3D, options).run();
}

RunResult run_benchmark(const Scenario& s, Scheme scheme, const BcdOptions& options) {
  if (scheme != Scheme::kFpot && scheme != Scheme::kOpft)
    throw std::invalid_argument("run_benchmark: scheme must be fpot or opft");
  return Driver(s, scheme, options).run();
}

RunResult run_scheme(const Scenario& s, Scheme scheme, const BcdOptions& options) {
  return Driver(s, scheme, options).run();
}

}  // namespace uavpe
