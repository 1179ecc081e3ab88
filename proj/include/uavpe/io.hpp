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

// Scenario files, run configuration and result persistence.
//
// Scenario JSON accepts linear keys (p_s_w, sigma2_w, beta0, ...) or their
// decibel forms (p_s_dbm, sigma2_dbm, beta0_db, ...); p_dbm sets both P_S
// and P_R. Conversion to linear units happens once, at load.
//
// Result directory layout:
//   trajectory.csv  n,t,x,y,z,vx,vy,vz,ax,ay,az
//   power.csv       n,t,P_E_W,P_hor_W,P_ver_W
//   rates.csv       n,t,R_D,R_E,ER
//   summary.json    mode, theta_trace, theta_final, iterations, converged,
//                   infeasible_slots (+ stop_reason, sweep when applicable)

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavpe/bcd.hpp"
#include "uavpe/scenario.hpp"

namespace uavpe::io {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Scenario parse_scenario(const std::string& json_text);
std::string scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);
void save_scenario(const std::string& path, const Scenario& s);

Scheme parse_scheme(const std::string& name);

struct SweepAxis {
  std::string name;  // "p_dbm" or "t_s"; empty for no sweep
  std::vector<double> values;

  bool active() const { return !name.empty(); }
};

/// "p_dbm=0,5,10,15" or "t_s=50,100"; empty text gives an inactive axis.
SweepAxis parse_sweep(const std::string& text);

/// Scenario at one sweep point. A period change keeps the slot duration.
Scenario apply_sweep_point(Scenario s, const std::string& axis, double value);

struct RunConfig {
  std::string scenario_path;
  std::vector<Scheme> schemes{Scheme::kProposed2D};
  SweepAxis sweep;
  std::string out_dir = "results";
  std::uint64_t seed = 1;
  int max_iterations = 30;
  double epsilon = -1.0;
  bool dump_programs = false;
  opt::SolverOptions solver;
};

struct SweepTag {
  std::string axis;
  double value = 0.0;
};

void write_power_csv(std::ostream& out, const Scenario& s, const RunResult& r);
void write_rates_csv(std::ostream& out, const Scenario& s, const RunResult& r);
std::string summary_json(const RunResult& r, const std::optional<SweepTag>& tag = std::nullopt);

/// Writes the four result files into dir (created if needed).
void persist_result(const RunResult& r, const Scenario& s, const std::string& dir,
                    const std::optional<SweepTag>& tag = std::nullopt);

struct SweepRow {
  std::string axis;
  double value = 0.0;
  std::string scheme;
  double theta_final = 0.0;
};

/// Collects every summary.json under root (recursively), sorted by axis,
/// value and scheme.
std::vector<SweepRow> collect_summaries(const std::string& root);
void write_sweep_report(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace uavpe::io
