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

#include "uavpe/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "uavpe/kinematics.hpp"

namespace uavpe::io {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kScenarioKeys = {
    "q_s", "q_d", "q_r", "z_r", "q_i", "q_f", "h_i", "h_f", "z_fixed", "h_min", "h_max",
    "v_xy_max", "v_z_max", "a_xy_max", "a_z_max",
    "p_dbm", "p_s_w", "p_s_dbm", "p_r_w", "p_r_dbm", "p_e_max_w", "p_e_max_dbm",
    "sigma2_w", "sigma2_dbm", "beta0", "beta0_db",
    "rotor", "p_hor_ave", "p_ver_ave", "w_weight", "t", "n", "delta_t", "epsilon"};

const std::set<std::string> kRotorKeys = {"p0", "pi", "u_tip", "v0", "d0", "rho", "s", "a"};

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("scenario key '" + key + "' must be a number");
  return j.get<double>();
}

Vec2 point(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("scenario key '" + key + "' must be a two-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

// Reads a quantity that may be given linearly or in decibels.
bool read_power(const json& root, const std::string& linear, const std::string& db, bool dbm, double* out) {
  const bool has_linear = root.contains(linear);
  const bool has_db = root.contains(db);
  if (has_linear && has_db) throw ConfigError("scenario gives both '" + linear + "' and '" + db + "'");
  if (has_linear) *out = number(root[linear], linear);
  if (has_db) *out = dbm ? dbm_to_watts(number(root[db], db)) : db_to_linear(number(root[db], db));
  return has_linear || has_db;
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("scenario must be a JSON object");
  for (const auto& [key, value] : root.items())
    if (!kScenarioKeys.contains(key)) throw ConfigError("unknown scenario key '" + key + "'");

  Scenario s = reference_scenario1();
  auto get = [&](const char* key, double* dst) {
    if (root.contains(key)) *dst = number(root[key], key);
  };
  auto get_point = [&](const char* key, Vec2* dst) {
    if (root.contains(key)) *dst = point(root[key], key);
  };
  get_point("q_s", &s.source);
  get_point("q_d", &s.destination);
  get_point("q_r", &s.relay);
  get("z_r", &s.relay_height);
  get_point("q_i", &s.start);
  get_point("q_f", &s.end);
  get("h_i", &s.start_height);
  get("h_f", &s.end_height);
  get("z_fixed", &s.fixed_height);
  get("h_min", &s.min_height);
  get("h_max", &s.max_height);
  get("v_xy_max", &s.max_speed_xy);
  get("v_z_max", &s.max_speed_z);
  get("a_xy_max", &s.max_accel_xy);
  get("a_z_max", &s.max_accel_z);

  if (root.contains("p_dbm")) {
    if (root.contains("p_s_w") || root.contains("p_s_dbm") || root.contains("p_r_w") || root.contains("p_r_dbm"))
      throw ConfigError("scenario gives 'p_dbm' together with a per-node transmit power");
    s.source_power = s.relay_power = dbm_to_watts(number(root["p_dbm"], "p_dbm"));
  }
  read_power(root, "p_s_w", "p_s_dbm", true, &s.source_power);
  read_power(root, "p_r_w", "p_r_dbm", true, &s.relay_power);
  if (!read_power(root, "p_e_max_w", "p_e_max_dbm", true, &s.max_jamming_power))
    throw ConfigError("scenario is missing the maximum jamming power ('p_e_max_w' or 'p_e_max_dbm')");
  read_power(root, "sigma2_w", "sigma2_dbm", true, &s.noise_power);
  read_power(root, "beta0", "beta0_db", false, &s.reference_gain);

  if (root.contains("rotor")) {
    const json& r = root["rotor"];
    if (!r.is_object()) throw ConfigError("scenario key 'rotor' must be an object");
    for (const auto& [key, value] : r.items())
      if (!kRotorKeys.contains(key)) throw ConfigError("unknown rotor key '" + key + "'");
    auto rg = [&](const char* key, double* dst) {
      if (r.contains(key)) *dst = number(r[key], std::string("rotor.") + key);
    };
    rg("p0", &s.rotor.blade_profile_power);
    rg("pi", &s.rotor.induced_power);
    rg("u_tip", &s.rotor.tip_speed);
    rg("v0", &s.rotor.hover_induced_velocity);
    rg("d0", &s.rotor.fuselage_drag_ratio);
    rg("rho", &s.rotor.air_density);
    rg("s", &s.rotor.rotor_solidity);
    rg("a", &s.rotor.disc_area);
  }
  get("p_hor_ave", &s.horizontal_power_budget);
  get("p_ver_ave", &s.vertical_power_budget);
  get("w_weight", &s.weight);
  get("t", &s.period);
  get("epsilon", &s.tolerance);
  if (root.contains("n") && root.contains("delta_t")) throw ConfigError("scenario gives both 'n' and 'delta_t'");
  if (root.contains("n")) {
    const json& n = root["n"];
    if (!n.is_number_integer() || n.get<long long>() <= 0) throw ConfigError("scenario key 'n' must be a positive integer");
    s.slots = n.get<int>();
  } else {
    const double dt = root.contains("delta_t") ? number(root["delta_t"], "delta_t") : 1.0;
    if (!(dt > 0.0)) throw ConfigError("scenario key 'delta_t' must be positive");
    s.slots = static_cast<int>(std::lround(s.period / dt));
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

std::string scenario_to_json(const Scenario& s) {
  auto pt = [](const Vec2& v) { return json::array({v.x(), v.y()}); };
  json j;
  j["q_s"] = pt(s.source);
  j["q_d"] = pt(s.destination);
  j["q_r"] = pt(s.relay);
  j["z_r"] = s.relay_height;
  j["q_i"] = pt(s.start);
  j["q_f"] = pt(s.end);
  j["h_i"] = s.start_height;
  j["h_f"] = s.end_height;
  j["z_fixed"] = s.fixed_height;
  j["h_min"] = s.min_height;
  j["h_max"] = s.max_height;
  j["v_xy_max"] = s.max_speed_xy;
  j["v_z_max"] = s.max_speed_z;
  j["a_xy_max"] = s.max_accel_xy;
  j["a_z_max"] = s.max_accel_z;
  j["p_s_w"] = s.source_power;
  j["p_r_w"] = s.relay_power;
  j["p_e_max_w"] = s.max_jamming_power;
  j["sigma2_w"] = s.noise_power;
  j["beta0"] = s.reference_gain;
  j["rotor"] = {{"p0", s.rotor.blade_profile_power}, {"pi", s.rotor.induced_power},
                {"u_tip", s.rotor.tip_speed},        {"v0", s.rotor.hover_induced_velocity},
                {"d0", s.rotor.fuselage_drag_ratio}, {"rho", s.rotor.air_density},
                {"s", s.rotor.rotor_solidity},       {"a", s.rotor.disc_area}};
  j["p_hor_ave"] = s.horizontal_power_budget;
  j["p_ver_ave"] = s.vertical_power_budget;
  j["w_weight"] = s.weight;
  j["t"] = s.period;
  j["n"] = s.slots;
  j["epsilon"] = s.tolerance;
  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void save_scenario(const std::string& path, const Scenario& s) {
  std::ofstream out = open_out(path);
  out << scenario_to_json(s);
}

Scheme parse_scheme(const std::string& name) {
  if (name == "2d") return Scheme::kProposed2D;
  if (name == "3d") return Scheme::kProposed3D;
  if (name == "fpot") return Scheme::kFpot;
  if (name == "opft") return Scheme::kOpft;
  throw ConfigError("unknown mode '" + name + "' (expected 2d, 3d, fpot or opft)");
}

SweepAxis parse_sweep(const std::string& text) {
  SweepAxis axis;
  if (text.empty() || text == "none") return axis;
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("sweep must look like p_dbm=0,5,10 or t_s=50,100");
  axis.name = text.substr(0, eq);
  if (axis.name != "p_dbm" && axis.name != "t_s") throw ConfigError("unknown sweep axis '" + axis.name + "'");
  std::stringstream list(text.substr(eq + 1));
  std::string item;
  while (std::getline(list, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0') throw ConfigError("bad sweep value '" + item + "'");
    axis.values.push_back(v);
  }
  if (axis.values.empty()) throw ConfigError("sweep list is empty");
  return axis;
}

Scenario apply_sweep_point(Scenario s, const std::string& axis, double value) {
  if (axis == "p_dbm") {
    s.source_power = s.relay_power = dbm_to_watts(value);
  } else if (axis == "t_s") {
    const double dt = s.slot_duration();
    s.period = value;
    s.slots = static_cast<int>(std::lround(value / dt));
    if (s.slots < 1) throw ConfigError("sweep period too short for the slot duration");
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "'");
  }
  s.validate();
  return s;
}

void write_power_csv(std::ostream& out, const Scenario& s, const RunResult& r) {
  const double dt = s.slot_duration();
  out << "n,t,P_E_W,P_hor_W,P_ver_W\n";
  for (int n = 0; n < r.plan.pose_count(); ++n) {
    out << n << ',' << format("%.12g", n * dt) << ',' << format("%.12g", r.schedule.power[n]) << ','
        << format("%.12g", r.horizontal_power[n]) << ',' << format("%.12g", r.vertical_power[n]) << '\n';
  }
}

void write_rates_csv(std::ostream& out, const Scenario& s, const RunResult& r) {
  const double dt = s.slot_duration();
  out << "n,t,R_D,R_E,ER\n";
  for (int n = 0; n < r.plan.pose_count(); ++n) {
    const SlotRates& sr = r.rates[n];
    out << n << ',' << format("%.12g", n * dt) << ',' << format("%.12g", sr.rate_d) << ','
        << format("%.12g", sr.rate_e) << ',' << format("%.12g", sr.er) << '\n';
  }
}

std::string summary_json(const RunResult& r, const std::optional<SweepTag>& tag) {
  json j;
  j["mode"] = to_string(r.scheme);
  j["theta_trace"] = r.theta_trace;
  j["theta_final"] = r.theta();
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["infeasible_slots"] = r.infeasible_slots;
  j["stop_reason"] = r.stop_reason;
  if (tag) j["sweep"] = {{"axis", tag->axis}, {"value", tag->value}};
  return j.dump(2) + "\n";
}

void persist_result(const RunResult& r, const Scenario& s, const std::string& dir,
                    const std::optional<SweepTag>& tag) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
  const fs::path root(dir);
  {
    std::ofstream out = open_out(root / "trajectory.csv");
    write_trajectory_csv(out, r.plan, s.slot_duration());
  }
  {
    std::ofstream out = open_out(root / "power.csv");
    write_power_csv(out, s, r);
  }
  {
    std::ofstream out = open_out(root / "rates.csv");
    write_rates_csv(out, s, r);
  }
  std::ofstream out = open_out(root / "summary.json");
  out << summary_json(r, tag);
  if (!out) throw std::runtime_error("write failed for " + (root / "summary.json").string());
}

std::vector<SweepRow> collect_summaries(const std::string& root) {
  std::vector<SweepRow> rows;
  if (!fs::exists(root)) throw ConfigError("results directory " + root + " does not exist");
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().filename() != "summary.json") continue;
    std::ifstream in(entry.path());
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(entry.path().string() + ": " + e.what());
    }
    SweepRow row;
    row.scheme = j.at("mode").get<std::string>();
    row.theta_final = j.at("theta_final").get<double>();
    if (j.contains("sweep")) {
      row.axis = j["sweep"].at("axis").get<std::string>();
      row.value = j["sweep"].at("value").get<double>();
    }
    rows.push_back(row);
  }
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.axis, a.value, a.scheme) < std::tie(b.axis, b.value, b.scheme);
  });
  return rows;
}

void write_sweep_report(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "axis,value,scheme,theta_final\n";
  for (const SweepRow& r : rows)
    out << (r.axis.empty() ? "none" : r.axis) << ',' << format("%.12g", r.value) << ',' << r.scheme << ','
        << format("%.12g", r.theta_final) << '\n';
}

}  // namespace uavpe::io
