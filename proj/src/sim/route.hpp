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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "common/config.hpp"

namespace driveadapt::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline bool operator==(const Vec2& a, const Vec2& b) {
  return a.x == b.x && a.y == b.y;
}

// Four pedestrian-related kinds followed by four traffic-related kinds.
enum class EventKind : int {
  kPedSidewalk = 0,
  kPedCrosswalk,
  kPedAtIntersection,
  kPedWalkingAtIntersection,
  kRightTurnRed,
  kFollowLeadVehicle,
  kYieldLeftTurn,
  kTwoWayStop,
};

inline constexpr int kNumEventKinds = 8;
inline constexpr int kNumIntersections = 16;

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view name);
constexpr bool is_pedestrian_event(EventKind k) {
  return static_cast<int>(k) < 4;
}

enum class Turn : int { kStraight = 0, kLeft, kRight };

struct SessionConfig {
  int intersections = kNumIntersections;
  double intersection_spacing = 150.0;  // m between consecutive intersections
  double trigger_distance = 60.0;       // event activates this far before
  double event_end_distance = 150.0;    // event ends this far after
  double turn_radius = 12.0;            // m, arc joining turning segments
  double tick = 0.02;                   // s
  double max_session_time = 900.0;      // s of simulated time
  double sensing_range = 80.0;          // m ahead considered by the controller
  double lane_half_width = 2.0;         // m

  // Validates; throws invalid_argument on inconsistent values.
  void validate() const;
  static SessionConfig from_config(const KeyValueConfig& kv);
};

struct Intersection {
  double s = 0.0;  // arc length of the intersection center
  Turn turn = Turn::kStraight;
};

struct EventInstance {
  int id = 0;  // ordinal 0..7 within the session
  EventKind kind = EventKind::kPedSidewalk;
  int intersection_index = 0;
  double trigger_s = 0.0;
  double end_s = 0.0;
};

// Polyline route. Arc-length parametrized; straight segments between
// intersections, turning intersections rounded with a circular arc sampled
// every metre.
class Route {
 public:
  const std::vector<Intersection>& intersections() const { return intersections_; }
  const std::vector<EventInstance>& events() const { return events_; }
  const std::vector<Vec2>& vertices() const { return vertices_; }
  double length() const { return vertex_s_.back(); }

  Vec2 point_at(double s) const;
  double heading_at(double s) const;
  // World point at arc length s, offset `lateral` metres to the left.
  Vec2 offset_point(double s, double lateral) const;

  struct Projection {
    double s = 0.0;
    double lateral = 0.0;  // positive left of the route
    double heading = 0.0;  // route heading at s
  };
  // Closest point search restricted to [s_hint - window, s_hint + window].
  Projection project(Vec2 p, double s_hint, double window = 30.0) const;

  // Intersection index whose zone contains s, or the last one passed.
  int route_index_at(double s) const;

  bool operator==(const Route& o) const;

 private:
  friend Route generate_route(std::uint64_t seed, const SessionConfig& cfg);
  friend Route make_route(const SessionConfig& cfg,
                          const std::array<EventKind, 8>& order);
  std::size_t segment_at(double s) const;

  std::vector<Vec2> vertices_;
  std::vector<double> vertex_s_;
  std::vector<Intersection> intersections_;
  std::vector<EventInstance> events_;
};

// Seeded permutation of the eight event kinds over the odd intersections.
Route generate_route(std::uint64_t seed, const SessionConfig& cfg);
// Builds the route for an explicit event order.
Route make_route(const SessionConfig& cfg, const std::array<EventKind, 8>& order);

}  // namespace driveadapt::sim
