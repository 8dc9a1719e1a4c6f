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

#include "u2d/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace u2d {

Vec3 StpProfile::uav_at(double l) const {
  const double span = horizontal_distance(device, bs);
  const double f = span > 0.0 ? l / span : 0.0;
  return {device.x + f * (bs.x - device.x), device.y + f * (bs.y - device.y), altitude};
}

StpProfile stp_profile(const Vec3& device, const Vec3& bs, double altitude, int n_points,
                       const RadioModel& radio) {
  if (n_points < 3) throw std::invalid_argument("stp_profile needs at least 3 points");
  const double span = horizontal_distance(device, bs);
  if (!(span > 0.0)) throw std::invalid_argument("device and BS share a ground position");
  StpProfile p{device, bs, altitude, {}, {}, {}};
  for (int k = 0; k < n_points; ++k) {
    const double l = span * k / (n_points - 1);
    const Vec3 uav = p.uav_at(l);
    p.l2d.push_back(l);
    p.stp_u2d.push_back(stp_u2d(uav, device, radio));
    p.stp_cell.push_back(stp_cellular(uav, device, bs, radio));
  }
  return p;
}

bool profile_monotone(const StpProfile& p, double slack) {
  for (int k = 1; k < p.size(); ++k) {
    if (p.stp_u2d[static_cast<std::size_t>(k)] > p.stp_u2d[static_cast<std::size_t>(k - 1)] + slack) return false;
    if (p.stp_cell[static_cast<std::size_t>(k)] < p.stp_cell[static_cast<std::size_t>(k - 1)] - slack) return false;
  }
  return true;
}

double total_variation(const std::vector<double>& v) {
  double tv = 0.0;
  for (std::size_t k = 1; k < v.size(); ++k) tv += std::abs(v[k] - v[k - 1]);
  return tv;
}

SwitchingPoint switching_point(const StpProfile& p, const std::function<double(double)>& difference) {
  SwitchingPoint out;
  out.monotone = profile_monotone(p);
  const int n = p.size();
  auto diff_at = [&](int k) {
    return p.stp_u2d[static_cast<std::size_t>(k)] - p.stp_cell[static_cast<std::size_t>(k)];
  };
  for (int k = 0; k + 1 < n; ++k) {
    const double d0 = diff_at(k);
    const double d1 = diff_at(k + 1);
    if (!(d0 >= 0.0 && d1 < 0.0)) continue;
    double lo = p.l2d[static_cast<std::size_t>(k)];
    double hi = p.l2d[static_cast<std::size_t>(k + 1)];
    const double l0 = lo;
    const double width = hi - lo;
    auto g = [&](double l) {
      if (difference) return difference(l);
      return d0 + (d1 - d0) * (l - l0) / width;
    };
    while (hi - lo > 0.1) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) >= 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.l2d = 0.5 * (lo + hi);
    return out;
  }
  return out;
}

SwitchingPoint switching_point(const StpProfile& p, const RadioModel& radio) {
  return switching_point(p, [&](double l) {
    const Vec3 uav = p.uav_at(l);
    return stp_u2d(uav, p.device, radio) - stp_cellular(uav, p.device, p.bs, radio);
  });
}

std::string to_string(ModeLabel label) {
  switch (label) {
    case ModeLabel::kU2d: return "U2D";
    case ModeLabel::kCellular: return "Cellular";
    case ModeLabel::kFail: return "Fail";
    case ModeLabel::kMixed: return "Mixed";
  }
  return "Mixed";
}

ModeLabel label_for(const ModeProbabilities& m, double dominance) {
  if (m.p_u2d >= dominance) return ModeLabel::kU2d;
  if (m.p_cell >= dominance) return ModeLabel::kCellular;
  if (m.p_fail >= dominance) return ModeLabel::kFail;
  return ModeLabel::kMixed;
}

namespace {

double grid_coord(double lo, double hi, int k, int n) { return lo + (hi - lo) * (k + 0.5) / n; }

}  // namespace

std::vector<ModeMapCell> mode_map(const Scenario& s, int uav, double altitude, int resolution,
                                  ModeSplit split, double dominance) {
  if (resolution < 1) throw std::invalid_argument("mode_map resolution must be at least 1");
  const Vec3& device = s.uavs.at(static_cast<std::size_t>(uav)).device_pos;
  const RadioModel radio = RadioModel::from_scenario(s);
  const double r = s.cell_radius;
  std::vector<ModeMapCell> cells;
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      ModeMapCell c;
      c.x = s.bs_pos.x + grid_coord(-r, r, i, resolution);
      c.y = s.bs_pos.y + grid_coord(-r, r, j, resolution);
      c.modes = evaluate_frame_link({c.x, c.y, altitude}, device, s.bs_pos, radio, split).modes;
      c.label = label_for(c.modes, dominance);
      cells.push_back(c);
    }
  }
  return cells;
}

std::vector<CollinearCell> collinear_mode_sweep(const Scenario& s, double altitude, int resolution,
                                                ModeSplit split, double dominance) {
  if (resolution < 1) throw std::invalid_argument("sweep resolution must be at least 1");
  const RadioModel radio = RadioModel::from_scenario(s);
  const double r = s.cell_radius;
  std::vector<CollinearCell> cells;
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      CollinearCell c;
      c.l_bd = grid_coord(0.0, r, i, resolution);
      c.l_bt = grid_coord(0.0, r, j, resolution);
      const Vec3 device{s.bs_pos.x + c.l_bd, s.bs_pos.y, 0.0};
      const Vec3 uav{s.bs_pos.x + c.l_bt, s.bs_pos.y, altitude};
      c.modes = evaluate_frame_link(uav, device, s.bs_pos, radio, split).modes;
      c.label = label_for(c.modes, dominance);
      cells.push_back(c);
    }
  }
  return cells;
}

namespace {

struct P2 {
  double x;
  double y;
};

double cross(P2 o, P2 a, P2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

double segment_distance(P2 p, P2 a, P2 b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

}  // namespace

double distance_to_triangle(const Vec3& p3, const Vec3& a3, const Vec3& b3, const Vec3& c3) {
  const P2 p{p3.x, p3.y};
  const P2 a{a3.x, a3.y};
  const P2 b{b3.x, b3.y};
  const P2 c{c3.x, c3.y};
  const double area2 = cross(a, b, c);
  const double scale = std::max({std::hypot(b.x - a.x, b.y - a.y), std::hypot(c.x - a.x, c.y - a.y),
                                 std::hypot(c.x - b.x, c.y - b.y), 1.0});
  if (std::abs(area2) <= 1e-9 * scale * scale) {
    const double ab = std::hypot(b.x - a.x, b.y - a.y);
    const double ac = std::hypot(c.x - a.x, c.y - a.y);
    const double bc = std::hypot(c.x - b.x, c.y - b.y);
    if (ab >= ac && ab >= bc) return segment_distance(p, a, b);
    if (ac >= bc) return segment_distance(p, a, c);
    return segment_distance(p, b, c);
  }
  const double s1 = cross(a, b, p);
  const double s2 = cross(b, c, p);
  const double s3 = cross(c, a, p);
  const bool inside = (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
  if (inside) return 0.0;
  return std::min({segment_distance(p, a, b), segment_distance(p, b, c), segment_distance(p, c, a)});
}

double triangle_containment(const std::vector<Vec3>& trajectory, const Vec3& bs, const Vec3& device,
                            const Vec3& target, double delta) {
  if (trajectory.empty()) throw std::invalid_argument("trajectory is empty");
  const double tol = delta * (1.0 + 1e-9);
  const auto inside = std::count_if(trajectory.begin(), trajectory.end(), [&](const Vec3& p) {
    return distance_to_triangle(p, bs, device, target) <= tol;
  });
  return static_cast<double>(inside) / static_cast<double>(trajectory.size());
}

std::string to_string(TerminalBehavior b) {
  switch (b) {
    case TerminalBehavior::kStill: return "still";
    case TerminalBehavior::kOscillating: return "oscillating";
    case TerminalBehavior::kWandering: return "wandering";
  }
  return "wandering";
}

TerminalBehavior terminal_behavior(const std::vector<Vec3>& trajectory, int tail_length, double delta) {
  if (tail_length < 1 || static_cast<int>(trajectory.size()) < tail_length) {
    throw std::invalid_argument("trajectory shorter than the requested tail");
  }
  const double eps = 1e-6 * std::max(1.0, delta);
  std::vector<Vec3> visited;
  for (auto it = trajectory.end() - tail_length; it != trajectory.end(); ++it) {
    const bool seen = std::any_of(visited.begin(), visited.end(),
                                  [&](const Vec3& v) { return distance(v, *it) <= eps; });
    if (!seen) visited.push_back(*it);
  }
  if (visited.size() == 1) return TerminalBehavior::kStill;
  if (visited.size() > 4) return TerminalBehavior::kWandering;
  for (std::size_t i = 0; i < visited.size(); ++i) {
    for (std::size_t j = i + 1; j < visited.size(); ++j) {
      const Vec3 d = visited[i] - visited[j];
      if (std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)}) > delta + eps) {
        return TerminalBehavior::kWandering;
      }
    }
  }
  return TerminalBehavior::kOscillating;
}

}  // namespace u2d
