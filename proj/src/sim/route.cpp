// Copyright 2026 The driveadapt Authors
//
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

#include "sim/route.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace driveadapt::sim {

namespace {

constexpr std::array<std::string_view, kNumEventKinds> kEventNames = {
    "ped_sidewalk",        "ped_crosswalk",      "ped_at_intersection",
    "ped_walking_at_intersection", "right_turn_red", "follow_lead_vehicle",
    "yield_left_turn",     "two_way_stop"};

Turn turn_for(EventKind k) {
  switch (k) {
    case EventKind::kRightTurnRed: return Turn::kRight;
    case EventKind::kYieldLeftTurn: return Turn::kLeft;
    default: return Turn::kStraight;
  }
}

}  // namespace

std::string_view to_string(EventKind k) {
  return kEventNames[static_cast<std::size_t>(k)];
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i)
    if (kEventNames[i] == name) return static_cast<EventKind>(i);
  return std::nullopt;
}

void SessionConfig::validate() const {
  if (intersections != kNumIntersections)
    throw invalid_argument("session must have exactly 16 intersections");
  if (!(tick > 0.0) || tick > 0.1)
    throw invalid_argument("tick must be in (0, 0.1] s");
  if (!(intersection_spacing > 0.0))
    throw invalid_argument("intersection_spacing must be positive");
  if (!(trigger_distance > 0.0) || !(event_end_distance > 0.0))
    throw invalid_argument("event trigger/end distances must be positive");
  // Windows of consecutive events (two intersections apart) must not overlap.
  if (trigger_distance + event_end_distance >= 2.0 * intersection_spacing)
    throw invalid_argument(
        "trigger_distance + event_end_distance must be below twice the "
        "intersection spacing");
  if (!(turn_radius > 0.0) ||
      turn_radius * std::numbers::pi / 4.0 >= intersection_spacing / 2.0)
    throw invalid_argument("turn_radius does not fit the intersection spacing");
  if (!(max_session_time > 0.0))
    throw invalid_argument("max_session_time must be positive");
  if (!(sensing_range > 0.0) || !(lane_half_width > 0.0))
    throw invalid_argument("sensing_range and lane_half_width must be positive");
}

SessionConfig SessionConfig::from_config(const KeyValueConfig& kv) {
  SessionConfig c;
  c.intersections = kv.get_int("sim.intersections", c.intersections);
  c.intersection_spacing =
      kv.get_double("sim.intersection_spacing", c.intersection_spacing);
  c.trigger_distance = kv.get_double("sim.trigger_distance", c.trigger_distance);
  c.event_end_distance =
      kv.get_double("sim.event_end_distance", c.event_end_distance);
  c.turn_radius = kv.get_double("sim.turn_radius", c.turn_radius);
  c.tick = kv.get_double("sim.tick", c.tick);
  c.max_session_time = kv.get_double("sim.max_session_time", c.max_session_time);
  c.sensing_range = kv.get_double("sim.sensing_range", c.sensing_range);
  c.lane_half_width = kv.get_double("sim.lane_half_width", c.lane_half_width);
  c.validate();
  return c;
}

Route make_route(const SessionConfig& cfg,
                 const std::array<EventKind, 8>& order) {
  cfg.validate();
  Route r;
  const double spacing = cfg.intersection_spacing;
  const double total = spacing * (cfg.intersections + 1);

  std::vector<Turn> turns(cfg.intersections, Turn::kStraight);
  for (int j = 0; j < kNumEventKinds; ++j) {
    const int idx = 2 * j + 1;
    turns[idx] = turn_for(order[j]);
    EventInstance ev;
    ev.id = j;
    ev.kind = order[j];
    ev.intersection_index = idx;
    const double center = spacing * (idx + 1);
    ev.trigger_s = center - cfg.trigger_distance;
    ev.end_s = center + cfg.event_end_distance;
    r.events_.push_back(ev);
  }
  for (int i = 0; i < cfg.intersections; ++i)
    r.intersections_.push_back({spacing * (i + 1), turns[i]});

  // Integrate heading along arc length; arcs are centered on the intersection.
  const double half_arc = cfg.turn_radius * std::numbers::pi / 4.0;
  Vec2 p{0.0, 0.0};
  double heading = 0.0;
  double s = 0.0;
  r.vertices_.push_back(p);
  r.vertex_s_.push_back(0.0);
  auto straight_to = [&](double s_end) {
    const double ds = s_end - s;
    if (ds <= 0.0) return;
    p = {p.x + ds * std::cos(heading), p.y + ds * std::sin(heading)};
    s = s_end;
    r.vertices_.push_back(p);
    r.vertex_s_.push_back(s);
  };
  for (const auto& in : r.intersections_) {
    if (in.turn == Turn::kStraight) continue;
    straight_to(in.s - half_arc);
    const double curvature =
        (in.turn == Turn::kLeft ? 1.0 : -1.0) / cfg.turn_radius;
    constexpr int kArcSteps = 24;
    const double ds = 2.0 * half_arc / kArcSteps;
    for (int k = 0; k < kArcSteps; ++k) {
      const double h1 = heading + curvature * ds;
      p = {p.x + (std::sin(h1) - std::sin(heading)) / curvature,
           p.y - (std::cos(h1) - std::cos(heading)) / curvature};
      heading = h1;
      s += ds;
      r.vertices_.push_back(p);
      r.vertex_s_.push_back(s);
    }
  }
  straight_to(total);
  return r;
}

Route generate_route(std::uint64_t seed, const SessionConfig& cfg) {
  std::array<EventKind, 8> order;
  for (int i = 0; i < kNumEventKinds; ++i) order[i] = static_cast<EventKind>(i);
  Rng rng(derive_seed({seed, 0x726f757465ULL}));
  // Fisher-Yates with our own index draws so the permutation depends only on
  // the engine, not on std::shuffle's implementation.
  for (int i = kNumEventKinds - 1; i > 0; --i) {
    const auto j = uniform_index(rng, static_cast<std::size_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  return make_route(cfg, order);
}

std::size_t Route::segment_at(double s) const {
  auto it = std::upper_bound(vertex_s_.begin(), vertex_s_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - vertex_s_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, vertex_s_.size() - 2);
}

Vec2 Route::point_at(double s) const {
  const std::size_t i = segment_at(s);
  const Vec2 a = vertices_[i], b = vertices_[i + 1];
  const double len = vertex_s_[i + 1] - vertex_s_[i];
  const double u = (s - vertex_s_[i]) / len;  // may extrapolate past ends
  return {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
}

double Route::heading_at(double s) const {
  const std::size_t i = segment_at(s);
  const Vec2 a = vertices_[i], b = vertices_[i + 1];
  return std::atan2(b.y - a.y, b.x - a.x);
}

Vec2 Route::offset_point(double s, double lateral) const {
  const Vec2 c = point_at(s);
  const double h = heading_at(s);
  return {c.x - lateral * std::sin(h), c.y + lateral * std::cos(h)};
}

Route::Projection Route::project(Vec2 p, double s_hint, double window) const {
  const std::size_t first = segment_at(s_hint - window);
  const std::size_t last = segment_at(s_hint + window);
  Projection best;
  double best_d2 = INFINITY;
  for (std::size_t i = first; i <= last; ++i) {
    const Vec2 a = vertices_[i], b = vertices_[i + 1];
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double u = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    // The end segments extend indefinitely so the vehicle can run past them.
    const double lo = (i == 0) ? -INFINITY : 0.0;
    const double hi = (i + 2 == vertices_.size()) ? INFINITY : 1.0;
    u = std::clamp(u, lo, hi);
    const double cx = a.x + u * dx, cy = a.y + u * dy;
    const double d2 = (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy);
    if (d2 < best_d2) {
      best_d2 = d2;
      const double len = std::sqrt(len2);
      best.s = vertex_s_[i] + u * len;
      best.lateral = (dx * (p.y - a.y) - dy * (p.x - a.x)) / len;
      best.heading = std::atan2(dy, dx);
    }
  }
  return best;
}

int Route::route_index_at(double s) const {
  const double half = intersections_.size() > 1
                          ? (intersections_[1].s - intersections_[0].s) / 2.0
                          : 0.0;
  for (std::size_t i = 0; i < intersections_.size(); ++i)
    if (s < intersections_[i].s + half) return static_cast<int>(i);
  return static_cast<int>(intersections_.size()) - 1;
}

bool Route::operator==(const Route& o) const {
  if (vertices_.size() != o.vertices_.size() || events_.size() != o.events_.size())
    return false;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (!(vertices_[i] == o.vertices_[i]) || vertex_s_[i] != o.vertex_s_[i])
      return false;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const auto &a = events_[i], &b = o.events_[i];
    if (a.kind != b.kind || a.trigger_s != b.trigger_s || a.end_s != b.end_s ||
        a.intersection_index != b.intersection_index)
      return false;
  }
  return true;
}

}  // namespace driveadapt::sim
