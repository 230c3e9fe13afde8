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

#include <optional>
#include <set>

#include "control/style.hpp"
#include "sim/world.hpp"

namespace driveadapt::control {

// Longitudinal target chosen among the obstacles ahead.
struct Target {
  double gap = 0.0;         // m, free distance to the target
  double lead_speed = 0.0;  // m/s along the route
  double s0 = 0.0;          // m, minimum distance for the target's kind
  sim::ObstacleKind kind = sim::ObstacleKind::kCar;
  int obstacle_id = -1;
  bool stop_line = false;  // stop sign, red light
};

struct IdmConstants {
  double delta = 4.0;    // free-road exponent
  double headway = 1.5;  // s
};

inline constexpr double kCarLength = 4.5;

// IDM acceleration clamped to [-max_decel, max_accel]. Without a target
// only the free-road term applies. Throws domain_error("collision state")
// when the target gap is not positive.
double idm_acceleration(double speed, const std::optional<Target>& target,
                        const StyleParams& params,
                        const IdmConstants& constants = {});

// Minimum distance for an obstacle kind; stop lines use the intersection MDD.
double mdd_for(sim::ObstacleKind kind, const StyleParams& params);

// Nearest relevant obstacle ahead within sensing range: in-lane pedestrians
// and cars, crossing cars at their conflict point, and blocking stop lines
// that have not been released.
std::optional<Target> target_selection(const sim::WorldState& world,
                                       const StyleParams& params,
                                       const sim::SessionConfig& cfg,
                                       const std::set<int>& released_stops = {});

struct StanleyGains {
  double gain = 2.5;       // 1/s
  double softening = 0.1;  // m/s
  double max_steer = 0.61;  // rad
};

// heading_error + atan(gain * cross_track_error / (speed + softening)),
// clamped. cross_track_error is positive when the path lies to the left.
double stanley_steering(double cross_track_error, double heading_error,
                        double speed, const StanleyGains& gains = {});

struct StopSignHold {
  bool holding = false;
  double held = 0.0;
  std::set<int> released;  // stop-sign obstacle ids already served
};

// While the two-way-stop event is active: once the vehicle has come to rest
// in front of the sign, holds for stop_sign_duration and then releases the
// sign. Returns true while holding.
bool stop_sign_hold(const sim::WorldState& world, const StyleParams& params,
                    StopSignHold& state, double dt);

struct ControllerState {
  StopSignHold stop;
};

// Full automated command: IDM + stop-line capture + stop-sign hold for the
// longitudinal axis, Stanley for the lateral axis.
sim::ControlInput automated_control(const sim::WorldState& world,
                                    const sim::Route& route,
                                    const sim::SessionConfig& cfg,
                                    ControllerState& state);

// Stanley steering toward the route at the front axle.
double lateral_control(const sim::WorldState& world, const sim::Route& route,
                       const StanleyGains& gains = {});

}  // namespace driveadapt::control
