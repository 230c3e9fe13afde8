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
#include <vector>

#include "control/style.hpp"
#include "sim/route.hpp"

namespace driveadapt::sim {

enum class ObstacleKind : int { kPedestrian = 0, kCar, kStopSign, kTrafficLight };

std::string_view to_string(ObstacleKind k);

inline constexpr double kMaxPedestrianSpeed = 2.5;

// Per-obstacle scripted behaviour, set up when the owning event activates.
struct ObstacleScript {
  enum class Motion {
    kStatic,         // never moves
    kConstant,       // moves with (v_s, v_lateral) from spawn
    kWhenEgoNear,    // starts moving once ego is within trigger_gap
    kRedLight,       // blocking until release_time
    kOncoming,       // constant motion; blocks while short of conflict_s
  };
  Motion motion = Motion::kStatic;
  double trigger_gap = 0.0;    // kWhenEgoNear: ego distance that starts it
  double start_delay = 0.0;    // kWhenEgoNear: extra wait after trigger
  double release_time = 0.0;   // kRedLight: simulation time of green
  double lateral_limit = 1e9;  // stop once |lateral| exceeds this
  bool triggered = false;
  double triggered_at = 0.0;
};

struct Obstacle {
  int id = 0;
  ObstacleKind kind = ObstacleKind::kPedestrian;
  // Route frame.
  double s = 0.0;
  double lateral = 0.0;
  double v_s = 0.0;
  double v_lateral = 0.0;
  // World frame, derived from the route frame every step.
  Vec2 pos;
  double speed = 0.0;
  double heading = 0.0;
  // Stop-line kinds: a stop is currently required. Cars: crossing traffic
  // currently occupies the conflict point `conflict_s`.
  bool blocking = false;
  std::optional<double> conflict_s;
  ObstacleScript script;
};

struct ControlInput {
  double accel = 0.0;  // m/s^2 commanded
  double steer = 0.0;  // rad, positive left
};

struct EventProgress {
  std::optional<double> t_start;
  std::optional<double> t_end;
  bool completed() const { return t_end.has_value(); }
};

struct EgoState {
  Vec2 pos;
  double heading = 0.0;
  double speed = 0.0;
  double accel = 0.0;  // applied over the last tick
  double steer = 0.0;
  double s = 0.0;        // route progress
  double lateral = 0.0;  // offset from the route, positive left
};

struct WorldState {
  std::int64_t tick = 0;
  double time = 0.0;
  EgoState ego;
  int route_index = 0;
  std::optional<int> active_event;  // index into Route::events()
  std::array<EventProgress, 8> events{};
  std::vector<Obstacle> obstacles;
  bool automation_on = true;
  control::DrivingStyle style = control::DrivingStyle::kLD;
  int next_obstacle_id = 0;

  bool finished(const Route& route) const { return ego.s >= route.length(); }
};

inline constexpr double kWheelbase = 2.7;

WorldState initial_world(const Route& route, control::DrivingStyle style);

// One fixed tick: kinematic bicycle update, speed clamped at zero, scripted
// obstacle motion, event activation/deactivation by arc-length thresholds.
WorldState step(const WorldState& world, const Route& route,
                const ControlInput& controls, double dt);

// Obstacles spawned when the event activates at time `now`.
std::vector<Obstacle> spawn_event_obstacles(const EventInstance& ev,
                                            const Route& route, double now,
                                            int& next_id);

}  // namespace driveadapt::sim
