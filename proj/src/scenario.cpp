// Copyright 2026 The u2d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "u2d/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

namespace u2d {

namespace {

constexpr double kGeomTol = 1e-9;

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

}  // namespace

LatticeAction action_from_index(int index) {
  if (index < 0 || index >= kNumActions) {
    throw std::domain_error("action index out of range: " + std::to_string(index));
  }
  return {index, {index / 9 - 1, (index / 3) % 3 - 1, index % 3 - 1}};
}

int action_index(const LatticePoint& step) {
  if (std::abs(step.x) > 1 || std::abs(step.y) > 1 || std::abs(step.z) > 1) {
    throw std::domain_error("lattice step is not a unit move");
  }
  return (step.x + 1) * 9 + (step.y + 1) * 3 + (step.z + 1);
}

ActionSet ActionSet::all() {
  ActionSet s;
  s.bits_.set();
  return s;
}

std::vector<int> ActionSet::indices() const {
  std::vector<int> out;
  for (int i = 0; i < kNumActions; ++i) {
    if (bits_.test(static_cast<std::size_t>(i))) out.push_back(i);
  }
  return out;
}

std::vector<LatticeAction> ActionSet::actions() const {
  std::vector<LatticeAction> out;
  for (int i : indices()) out.push_back(action_from_index(i));
  return out;
}

bool admissible(const Scenario& s, const Vec3& pos) {
  if (!std::isfinite(pos.x) || !std::isfinite(pos.y) || !std::isfinite(pos.z)) return false;
  const double tol = kGeomTol * std::max(1.0, s.cell_radius);
  if (horizontal_distance(pos, s.bs_pos) > s.cell_radius + tol) return false;
  if (pos.z < s.h_min - tol || pos.z > s.h_max + tol) return false;
  if (s.region) {
    const Region& r = *s.region;
    if (pos.x < r.x_min - tol || pos.x > r.x_max + tol) return false;
    if (pos.y < r.y_min - tol || pos.y > r.y_max + tol) return false;
  }
  return true;
}

ActionSet available_actions(const Vec3& pos, const Scenario& s) {
  if (!admissible(s, pos)) {
    throw std::domain_error("position outside the admissible region");
  }
  ActionSet out;
  for (int i = 0; i < kNumActions; ++i) {
    const LatticeAction a = action_from_index(i);
    if (admissible(s, pos + a.displacement(s.delta))) out.insert(i);
  }
  return out;
}

Vec3 interpolate_position(const Vec3& prev_end, const Vec3& end, int t, int cycle_frames) {
  if (cycle_frames < 1 || t < 1 || t > cycle_frames) {
    throw std::domain_error("frame index " + std::to_string(t) + " outside [1, " +
                            std::to_string(cycle_frames) + "]");
  }
  if (t == cycle_frames) return end;
  const double w = static_cast<double>(t) / cycle_frames;
  return prev_end + w * (end - prev_end);
}

std::vector<ScenarioCheck> check_scenario(const Scenario& s) {
  std::vector<ScenarioCheck> checks;
  auto add = [&](std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail)});
  };
  const int n = s.n_uavs();
  const int k = s.n_subchannels;

  add("n_uavs", n >= 1, "N = " + std::to_string(n) + " (need N >= 1)");
  add("n_subchannels", k >= 1 && k <= n,
      "K <= N with K >= 1 (K = " + std::to_string(k) + ", N = " + std::to_string(n) + ")");
  add("T_s", s.sensing_frames >= 1, "T_s >= 1 (T_s = " + std::to_string(s.sensing_frames) + ")");
  add("T_t", s.transmission_frames >= 0,
      "T_t >= 0 (T_t = " + std::to_string(s.transmission_frames) + ")");
  add("t_f", s.frame_duration > 0.0, "t_f > 0");
  add("v_max", s.v_max > 0.0, "v_max > 0");
  add("cell_radius", s.cell_radius > 0.0, "cell_radius > 0");
  add("h_min", s.h_min > 0.0 && s.h_min <= s.h_max, "0 < h_min <= h_max");
  add("lambda", s.sensing_factor > 0.0, "lambda > 0");
  add("f_c", s.carrier_ghz > 0.0, "f_c > 0");
  add("R_th", s.rate_threshold > 0.0, "R_th > 0");
  add("rho", s.discount >= 0.0 && s.discount <= 1.0, "rho in [0, 1]");
  add("bs_pos", s.bs_pos.z > 0.0, "BS height H_0 > 0");

  const double expected_delta =
      s.cycle_frames() * s.frame_duration * s.v_max / std::numbers::sqrt3;
  const bool delta_ok = s.delta > 0.0 && std::abs(s.delta - expected_delta) <=
                                             1e-9 * std::max(std::abs(expected_delta), 1e-300);
  {
    std::ostringstream os;
    os.precision(12);
    os << "delta = T_c*t_f*v_max/sqrt(3) (delta = " << s.delta << ", expected " << expected_delta
       << ")";
    add("delta", delta_ok, os.str());
  }

  if (s.region) {
    const Region& r = *s.region;
    add("region", r.x_min <= r.x_max && r.y_min <= r.y_max, "region bounds ordered");
  }

  for (int i = 0; i < n; ++i) {
    const UavSpec& u = s.uavs[static_cast<std::size_t>(i)];
    const std::string prefix = "uavs[" + std::to_string(i) + "].";
    const double tol = kGeomTol * std::max(1.0, s.cell_radius);
    add(prefix + "init_pos", admissible(s, u.init_pos),
        "initial position inside the cell disc with h_min <= z <= h_max");
    add(prefix + "device_pos",
        u.device_pos.z == 0.0 && horizontal_distance(u.device_pos, s.bs_pos) <= s.cell_radius + tol,
        "device on the ground inside the cell disc");
    add(prefix + "target_pos",
        u.target_pos.z == 0.0 && horizontal_distance(u.target_pos, s.bs_pos) <= s.cell_radius + tol,
        "target on the ground inside the cell disc");
  }
  return checks;
}

namespace {

double get_number(const Json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioError(path + key, "missing field");
  if (!it->is_number()) throw ScenarioError(path + key, "expected a number");
  return it->get<double>();
}

int get_int(const Json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioError(path + key, "missing field");
  if (!it->is_number_integer()) throw ScenarioError(path + key, "expected an integer");
  return it->get<int>();
}

Vec3 get_vec3(const Json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioError(path + key, "missing field");
  if (!it->is_array() || it->size() != 3) {
    throw ScenarioError(path + key, "expected an array of 3 numbers");
  }
  for (const auto& c : *it) {
    if (!c.is_number()) throw ScenarioError(path + key, "expected an array of 3 numbers");
  }
  return {(*it)[0].get<double>(), (*it)[1].get<double>(), (*it)[2].get<double>()};
}

void reject_unknown(const Json& obj, const std::set<std::string>& known, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ScenarioError(path + key, "unknown field");
  }
}

OrderedJson vec3_json(const Vec3& v) { return OrderedJson::array({v.x, v.y, v.z}); }

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ScenarioError("document", std::string("parse error at byte ") + std::to_string(e.byte) +
                                        ": " + e.what());
  }
  if (!doc.is_object()) throw ScenarioError("document", "top level must be an object");

  reject_unknown(doc,
                 {"bs_pos", "uavs", "n_uavs", "n_subchannels", "cell_radius", "h_min", "h_max",
                  "delta", "v_max", "t_f", "T_s", "T_t", "lambda", "P_u", "P_b", "N_0", "f_c",
                  "R_th", "rho", "radio", "region"},
                 "");

  Scenario s;
  s.bs_pos = get_vec3(doc, "bs_pos", "");
  s.n_subchannels = get_int(doc, "n_subchannels", "");
  s.cell_radius = get_number(doc, "cell_radius", "");
  s.h_min = get_number(doc, "h_min", "");
  s.h_max = get_number(doc, "h_max", "");
  s.delta = get_number(doc, "delta", "");
  s.v_max = get_number(doc, "v_max", "");
  s.frame_duration = get_number(doc, "t_f", "");
  s.sensing_frames = get_int(doc, "T_s", "");
  s.transmission_frames = get_int(doc, "T_t", "");
  s.sensing_factor = get_number(doc, "lambda", "");
  s.uav_power_dbm = get_number(doc, "P_u", "");
  s.bs_power_dbm = get_number(doc, "P_b", "");
  s.noise_dbm = get_number(doc, "N_0", "");
  s.carrier_ghz = get_number(doc, "f_c", "");
  s.rate_threshold = get_number(doc, "R_th", "");
  s.discount = get_number(doc, "rho", "");

  auto uavs = doc.find("uavs");
  if (uavs == doc.end()) throw ScenarioError("uavs", "missing field");
  if (!uavs->is_array()) throw ScenarioError("uavs", "expected an array");
  for (std::size_t i = 0; i < uavs->size(); ++i) {
    const std::string path = "uavs[" + std::to_string(i) + "].";
    const Json& u = (*uavs)[i];
    if (!u.is_object()) throw ScenarioError(path, "expected an object");
    reject_unknown(u, {"init_pos", "device_pos", "target_pos"}, path);
    s.uavs.push_back(
        {get_vec3(u, "init_pos", path), get_vec3(u, "device_pos", path), get_vec3(u, "target_pos", path)});
  }
  const int declared_n = get_int(doc, "n_uavs", "");
  if (declared_n != s.n_uavs()) {
    throw ScenarioError("n_uavs", "declares " + std::to_string(declared_n) + " UAVs but uavs has " +
                                      std::to_string(s.n_uavs()));
  }

  if (auto radio = doc.find("radio"); radio != doc.end()) {
    if (!radio->is_object()) throw ScenarioError("radio", "expected an object");
    reject_unknown(*radio,
                   {"los_intercept", "los_distance_slope", "los_frequency_slope", "nlos_intercept",
                    "nlos_distance_base", "nlos_height_slope", "nlos_frequency_slope", "rice_k_db"},
                   "radio.");
    RadioCoefficients& r = s.radio;
    const RadioCoefficients defaults;
    auto opt = [&](const char* key, double fallback) {
      return radio->contains(key) ? get_number(*radio, key, "radio.") : fallback;
    };
    r.los_intercept = opt("los_intercept", defaults.los_intercept);
    r.los_distance_slope = opt("los_distance_slope", defaults.los_distance_slope);
    r.los_frequency_slope = opt("los_frequency_slope", defaults.los_frequency_slope);
    r.nlos_intercept = opt("nlos_intercept", defaults.nlos_intercept);
    r.nlos_distance_base = opt("nlos_distance_base", defaults.nlos_distance_base);
    r.nlos_height_slope = opt("nlos_height_slope", defaults.nlos_height_slope);
    r.nlos_frequency_slope = opt("nlos_frequency_slope", defaults.nlos_frequency_slope);
    r.rice_k_db = opt("rice_k_db", defaults.rice_k_db);
  }

  if (auto region = doc.find("region"); region != doc.end()) {
    if (!region->is_object()) throw ScenarioError("region", "expected an object");
    reject_unknown(*region, {"x_min", "x_max", "y_min", "y_max"}, "region.");
    s.region = Region{get_number(*region, "x_min", "region."), get_number(*region, "x_max", "region."),
                      get_number(*region, "y_min", "region."), get_number(*region, "y_max", "region.")};
  }

  return s;
}

Scenario load_scenario(std::string_view text) {
  Scenario s = parse_scenario(text);
  for (const ScenarioCheck& c : check_scenario(s)) {
    if (!c.passed) throw ScenarioError(c.name, "invariant violated: " + c.detail);
  }
  return s;
}

std::string save_scenario(const Scenario& s) {
  OrderedJson doc;
  doc["n_uavs"] = s.n_uavs();
  doc["n_subchannels"] = s.n_subchannels;
  doc["bs_pos"] = vec3_json(s.bs_pos);
  doc["cell_radius"] = s.cell_radius;
  doc["h_min"] = s.h_min;
  doc["h_max"] = s.h_max;
  doc["delta"] = s.delta;
  doc["v_max"] = s.v_max;
  doc["t_f"] = s.frame_duration;
  doc["T_s"] = s.sensing_frames;
  doc["T_t"] = s.transmission_frames;
  doc["lambda"] = s.sensing_factor;
  doc["P_u"] = s.uav_power_dbm;
  doc["P_b"] = s.bs_power_dbm;
  doc["N_0"] = s.noise_dbm;
  doc["f_c"] = s.carrier_ghz;
  doc["R_th"] = s.rate_threshold;
  doc["rho"] = s.discount;
  const RadioCoefficients& r = s.radio;
  doc["radio"] = OrderedJson{{"los_intercept", r.los_intercept},
                             {"los_distance_slope", r.los_distance_slope},
                             {"los_frequency_slope", r.los_frequency_slope},
                             {"nlos_intercept", r.nlos_intercept},
                             {"nlos_distance_base", r.nlos_distance_base},
                             {"nlos_height_slope", r.nlos_height_slope},
                             {"nlos_frequency_slope", r.nlos_frequency_slope},
                             {"rice_k_db", r.rice_k_db}};
  if (s.region) {
    doc["region"] = OrderedJson{{"x_min", s.region->x_min},
                                {"x_max", s.region->x_max},
                                {"y_min", s.region->y_min},
                                {"y_max", s.region->y_max}};
  }
  OrderedJson uavs = OrderedJson::array();
  for (const UavSpec& u : s.uavs) {
    uavs.push_back(OrderedJson{{"init_pos", vec3_json(u.init_pos)},
                               {"device_pos", vec3_json(u.device_pos)},
                               {"target_pos", vec3_json(u.target_pos)}});
  }
  doc["uavs"] = std::move(uavs);
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("document", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Scenario read_scenario_file(const std::filesystem::path& path) { return load_scenario(read_text_file(path)); }

Scenario table3_scenario(std::uint64_t placement_seed, int n_uavs) {
  Scenario s;
  std::mt19937_64 rng(placement_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto place = [&] {
    const double r = s.cell_radius * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    // Round to centimeters so the document stays readable.
    return Vec3{std::round(r * std::cos(theta) * 100.0) / 100.0,
                std::round(r * std::sin(theta) * 100.0) / 100.0, 0.0};
  };
  for (int i = 0; i < n_uavs; ++i) {
    UavSpec u;
    u.device_pos = place();
    u.target_pos = place();
    u.init_pos = {u.device_pos.x, u.device_pos.y, 100.0};
    s.uavs.push_back(u);
  }
  s.n_subchannels = std::min(2, n_uavs);
  return s;
}

}  // namespace u2d
