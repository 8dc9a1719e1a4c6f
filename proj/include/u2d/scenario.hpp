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

#pragma once

#include <array>
#include <bitset>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace u2d {

/// Cartesian position in meters; z is altitude.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
inline double horizontal_distance(const Vec3& a, const Vec3& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Integer offset on a UAV's lattice, in units of the lattice spacing.
struct LatticePoint {
  int x = 0;
  int y = 0;
  int z = 0;

  friend LatticePoint operator+(const LatticePoint& a, const LatticePoint& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend LatticePoint operator-(const LatticePoint& a, const LatticePoint& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept {
    auto h = static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x));
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(p.y);
    h = h * 0x9E3779B97F4A7C15ULL ^ static_cast<std::uint32_t>(p.z);
    return static_cast<std::size_t>(h);
  }
};

inline constexpr int kNumActions = 27;
inline constexpr int kStayAction = 13;

/// One of the 27 lattice moves. Index is row-major over (dx, dy, dz), each
/// ordered -1, 0, +1.
struct LatticeAction {
  int index = kStayAction;
  LatticePoint step;

  Vec3 displacement(double delta) const {
    return {delta * step.x, delta * step.y, delta * step.z};
  }
};

LatticeAction action_from_index(int index);
int action_index(const LatticePoint& step);

/// Subset of the 27 lattice moves.
class ActionSet {
 public:
  ActionSet() = default;
  static ActionSet all();

  void insert(int index) { bits_.set(static_cast<std::size_t>(index)); }
  bool contains(int index) const {
    return index >= 0 && index < kNumActions && bits_.test(static_cast<std::size_t>(index));
  }
  int size() const { return static_cast<int>(bits_.count()); }
  bool empty() const { return bits_.none(); }
  std::vector<int> indices() const;
  std::vector<LatticeAction> actions() const;

  friend bool operator==(const ActionSet&, const ActionSet&) = default;

 private:
  std::bitset<kNumActions> bits_;
};

/// Coefficients of the air-to-ground path-loss model, lg = log10, d in m,
/// f in GHz:
///   LoS  = los_intercept + los_distance_slope * lg(d) + los_frequency_slope * lg(f)
///   NLoS = max(LoS, nlos_intercept + (nlos_distance_base - nlos_height_slope * lg(h)) * lg(d)
///                   + nlos_frequency_slope * lg(40*pi*f/3))
struct RadioCoefficients {
  double los_intercept = 28.0;
  double los_distance_slope = 22.0;
  double los_frequency_slope = 20.0;
  double nlos_intercept = -17.5;
  double nlos_distance_base = 46.0;
  double nlos_height_slope = 7.0;
  double nlos_frequency_slope = 20.0;
  double rice_k_db = 10.0;

  friend bool operator==(const RadioCoefficients&, const RadioCoefficients&) = default;
};

/// Optional axis-aligned horizontal box intersected with the cell disc.
struct Region {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  friend bool operator==(const Region&, const Region&) = default;
};

struct UavSpec {
  Vec3 init_pos;
  Vec3 device_pos;
  Vec3 target_pos;

  friend bool operator==(const UavSpec&, const UavSpec&) = default;
};

struct Scenario {
  Vec3 bs_pos{0.0, 0.0, 10.0};
  std::vector<UavSpec> uavs;
  int n_subchannels = 2;
  double cell_radius = 500.0;
  double h_min = 50.0;
  double h_max = 150.0;
  double delta = 25.0;
  double v_max = 25.0 * std::sqrt(3.0) / 8.0;
  double frame_duration = 2.0;  // t_f, seconds
  int sensing_frames = 2;       // T_s
  int transmission_frames = 2;  // T_t
  double sensing_factor = 5e-4;  // lambda, 1/(s*m)
  double uav_power_dbm = 10.0;
  double bs_power_dbm = 41.0;
  double noise_dbm = -85.0;
  double carrier_ghz = 2.0;
  double rate_threshold = 1.0;  // R_th, bit/s/Hz
  double discount = 0.9;        // rho
  RadioCoefficients radio;
  std::optional<Region> region;

  int n_uavs() const { return static_cast<int>(uavs.size()); }
  int cycle_frames() const { return sensing_frames + transmission_frames; }

  /// Absolute position of lattice point `p` of UAV `uav`.
  Vec3 position(int uav, const LatticePoint& p) const {
    return uavs.at(static_cast<std::size_t>(uav)).init_pos +
           Vec3{delta * p.x, delta * p.y, delta * p.z};
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Error raised for malformed or invalid scenario documents.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ScenarioCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every invariant check; never throws.
std::vector<ScenarioCheck> check_scenario(const Scenario& s);

bool admissible(const Scenario& s, const Vec3& pos);

/// Moves whose destination stays admissible. Throws std::domain_error when
/// `pos` itself is outside the admissible region.
ActionSet available_actions(const Vec3& pos, const Scenario& s);

/// Position at frame `t` of a cycle with `cycle_frames` frames, moving
/// uniformly from `prev_end` to `end`.
Vec3 interpolate_position(const Vec3& prev_end, const Vec3& end, int t, int cycle_frames);

// Schema only; invariants are left to check_scenario.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(std::string_view text);
std::string save_scenario(const Scenario& s);
std::string read_text_file(const std::filesystem::path& path);
Scenario read_scenario_file(const std::filesystem::path& path);

/// Default parameters with `n_uavs` device/target pairs placed uniformly
/// in the cell disc; each UAV starts 100 m above its device.
Scenario table3_scenario(std::uint64_t placement_seed, int n_uavs = 10);

}  // namespace u2d
