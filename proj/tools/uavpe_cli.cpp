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

// uavpe run | validate | sweep-report
//
// Exit codes: 0 success, 1 configuration error, 2 infeasible model.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uavpe/bcd.hpp"
#include "uavpe/io.hpp"
#include "uavpe/kinematics.hpp"

namespace fs = std::filesystem;
using namespace uavpe;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitInfeasible = 2;

struct Job {
  Scenario scenario;
  Scheme scheme;
  std::string dir;
  std::optional<io::SweepTag> tag;
};

struct JobOutcome {
  int code = 0;
  std::string log;
};

std::string point_label(const std::string& axis, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%g", axis.c_str(), value);
  return buf;
}

JobOutcome run_job(const Job& job, const io::RunConfig& cfg) {
  JobOutcome outcome;
  std::ostringstream log;
  BcdOptions opt;
  opt.max_iterations = cfg.max_iterations;
  opt.epsilon = cfg.epsilon;
  opt.solver = cfg.solver;
  opt.log = &log;
  if (cfg.dump_programs) opt.dump_dir = (fs::path(job.dir) / "programs").string();
  try {
    RunResult r = run_scheme(job.scenario, job.scheme, opt);
    io::persist_result(r, job.scenario, job.dir, job.tag);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: theta=%.6f iterations=%d %s -> %s\n", to_string(job.scheme), r.theta(),
                  r.iterations, r.stop_reason.c_str(), job.dir.c_str());
    log << buf;
  } catch (const BcdError& e) {
    log << "infeasible model (" << job.dir << "): " << e.what() << '\n';
    if (!e.dump().empty()) {
      fs::create_directories(job.dir);
      std::ofstream(fs::path(job.dir) / "infeasible_program.txt") << e.dump();
      log << "  program dump written to " << (fs::path(job.dir) / "infeasible_program.txt").string() << '\n';
    }
    outcome.code = kExitInfeasible;
  } catch (const std::exception& e) {
    log << "error (" << job.dir << "): " << e.what() << '\n';
    outcome.code = kExitConfig;
  }
  outcome.log = log.str();
  return outcome;
}

int command_run(const io::RunConfig& cfg) {
  const Scenario base = io::load_scenario(cfg.scenario_path);
  std::vector<Job> jobs;
  const bool per_scheme_dirs = cfg.schemes.size() > 1;
  auto add_jobs = [&](const Scenario& s, const fs::path& dir, std::optional<io::SweepTag> tag) {
    for (Scheme scheme : cfg.schemes) {
      const fs::path d = per_scheme_dirs ? dir / to_string(scheme) : dir;
      jobs.push_back({s, scheme, d.string(), tag});
    }
  };
  if (cfg.sweep.active()) {
    for (double v : cfg.sweep.values) {
      const Scenario s = io::apply_sweep_point(base, cfg.sweep.name, v);
      add_jobs(s, fs::path(cfg.out_dir) / point_label(cfg.sweep.name, v), io::SweepTag{cfg.sweep.name, v});
    }
  } else {
    add_jobs(base, fs::path(cfg.out_dir), std::nullopt);
  }

  std::vector<std::future<JobOutcome>> futures;
  futures.reserve(jobs.size());
  for (const Job& job : jobs) futures.push_back(std::async(std::launch::async, run_job, std::cref(job), std::cref(cfg)));
  int code = 0;
  for (auto& f : futures) {
    const JobOutcome o = f.get();
    std::cout << o.log;
    code = std::max(code, o.code);
  }
  return code;
}

int command_validate(const std::string& path) {
  const Scenario s = io::load_scenario(path);
  std::cout << io::scenario_to_json(s);
  for (FlightMode mode : {FlightMode::k2D, FlightMode::k3D}) {
    const TrajectoryPlan plan = initial_trajectory(s, mode);
    const FeasibilityReport rep = check_feasibility(s, plan, mode);
    const char* name = mode == FlightMode::k2D ? "2d" : "3d";
    std::printf("straight-line plan (%s): %s, P_hor avg %.3f W, P_ver avg %.3f W\n", name,
                rep.feasible() ? "feasible" : "infeasible", rep.horizontal_power_average,
                rep.vertical_power_average);
    for (const Violation& v : rep.violations)
      std::printf("  %s slot=%d excess=%.6g\n", v.constraint.c_str(), v.slot, v.magnitude);
  }
  return 0;
}

int command_sweep_report(const std::string& root, const std::string& out_path) {
  const auto rows = io::collect_summaries(root);
  if (out_path.empty()) {
    io::write_sweep_report(std::cout, rows);
  } else {
    std::ofstream out(out_path);
    if (!out) throw io::ConfigError("cannot write " + out_path);
    io::write_sweep_report(out, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proactive eavesdropping trajectory and jamming optimizer"};
  app.require_subcommand(1);

  io::RunConfig cfg;
  std::string modes = "2d";
  std::string sweep;
  auto* run = app.add_subcommand("run", "optimize trajectory and jamming power");
  run->add_option("--config", cfg.scenario_path, "scenario JSON")->required();
  run->add_option("--mode", modes, "comma separated list of 2d, 3d, fpot, opft");
  run->add_option("--sweep", sweep, "p_dbm=v1,v2,... or t_s=v1,v2,...");
  run->add_option("--out", cfg.out_dir, "output directory");
  run->add_flag("--dump-programs", cfg.dump_programs, "write every convex subproblem");
  run->add_option("--max-iter", cfg.max_iterations, "BCD iteration cap")->check(CLI::PositiveNumber);
  run->add_option("--epsilon", cfg.epsilon, "BCD stopping tolerance (default from scenario)");
  run->add_option("--seed", cfg.seed, "seed (runs are deterministic; recorded only)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "print the scenario and check the straight-line plan");
  validate->add_option("--config", validate_path, "scenario JSON")->required();

  std::string report_root = "results";
  std::string report_out;
  auto* report = app.add_subcommand("sweep-report", "aggregate summary.json files into one CSV");
  report->add_option("--out", report_root, "results directory to scan");
  report->add_option("--csv", report_out, "write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) {
      cfg.schemes.clear();
      std::stringstream list(modes);
      std::string item;
      while (std::getline(list, item, ',')) cfg.schemes.push_back(io::parse_scheme(item));
      if (cfg.schemes.empty()) throw io::ConfigError("--mode is empty");
      cfg.sweep = io::parse_sweep(sweep);
      return command_run(cfg);
    }
    if (*validate) return command_validate(validate_path);
    return command_sweep_report(report_root, report_out);
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
