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

#include "control/controller.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace driveadapt::control {

using sim::ObstacleKind;

double idm_acceleration(double speed, const std::optional<Target>& target,
                        const StyleParams& p, const IdmConstants& c) {
  double a = p.max_accel * (1.0 - std::pow(speed / p.set_speed, c.delta));
  if (target) {
    if (!(target->gap > 0.0)) throw domain_error("collision state");
    const double dv = speed - target->lead_speed;
    const double s_star =
        target->s0 +
        std::max(0.0, speed * c.headway +
                          speed * dv / (2.0 * std::sqrt(p.max_accel * p.max_decel)));
    const double ratio = s_star / target->gap;
    a -= p.max_accel * ratio * ratio;
  }
  return std::clamp(a, -p.max_decel, p.max_accel);
}

double mdd_for(ObstacleKind kind, const StyleParams& p) {
  switch (kind) {
    case ObstacleKind::kPedestrian: return p.mdd_pedestrian;
    case ObstacleKind::kCar: return p.mdd_car;
    case ObstacleKind::kStopSign:
    case ObstacleKind::kTrafficLight: return p.mdd_intersection;
  }
  return p.mdd_car;
}

std::optional<Target> target_selection(const sim::WorldState& w,
                                       const StyleParams& p,
                                       const sim::SessionConfig& cfg,
                                       const std::set<int>& released) {
  std::optional<Target> best;
  const double ego_s = w.ego.s;
  for (const auto& o : w.obstacles) {
    Target t;
    t.kind = o.kind;
    t.obstacle_id = o.id;
    t.s0 = mdd_for(o.kind, p);
    switch (o.kind) {
      case ObstacleKind::kPedestrian:
        if (o.s - ego_s <= 0.0) continue;
        if (std::abs(o.lateral) >= cfg.lane_half_width + 0.5) continue;
        t.gap = o.s - ego_s;
        t.lead_speed = o.v_s;
        break;
      case ObstacleKind::kCar:
        if (o.conflict_s) {
          if (!o.blocking || *o.conflict_s - ego_s <= 0.0) continue;
          t.gap = *o.conflict_s - ego_s;
          t.lead_speed = 0.0;
        } else {
          if (o.s - ego_s <= 0.0) continue;
          if (std::abs(o.lateral) >= cfg.lane_half_width) continue;
          t.gap = o.s - ego_s - kCarLength;
          t.lead_speed = o.v_s;
        }
        break;
      case ObstacleKind::kStopSign:
      case ObstacleKind::kTrafficLight:
        if (!o.blocking || released.count(o.id)) continue;
        if (o.s - ego_s <= 0.0) continue;
        t.gap = o.s - ego_s;
        t.lead_speed = 0.0;
        t.stop_line = true;
        break;
    }
    if (t.gap > cfg.sensing_range) continue;
    if (!best || t.gap < best->gap) best = t;
  }
  return best;
}

double stanley_steering(double cte, double heading_error, double speed,
                        const StanleyGains& g) {
  const double steer =
      heading_error + std::atan(g.gain * cte / (speed + g.softening));
  return std::clamp(steer, -g.max_steer, g.max_steer);
}

bool stop_sign_hold(const sim::WorldState& w, const StyleParams& p,
                    StopSignHold& st, double dt) {
  const sim::Obstacle* sign = nullptr;
  for (const auto& o : w.obstacles)
    if (o.kind == ObstacleKind::kStopSign && !st.released.count(o.id)) sign = &o;
  if (!sign || !w.active_event) {
    st.holding = false;
    st.held = 0.0;
    return false;
  }
  if (st.holding) {
    st.held += dt;
    if (st.held >= p.stop_sign_duration - 1e-9) {
      st.holding = false;
      st.released.insert(sign->id);
      return false;
    }
    return true;
  }
  const double to_line = sign->s - w.ego.s;
  if (w.ego.speed == 0.0 && to_line > 0.0 && to_line <= p.mdd_intersection + 2.0) {
    st.holding = true;
    st.held = dt;  // the first stationary tick already elapsed
    if (st.held >= p.stop_sign_duration - 1e-9) {
      st.holding = false;
      st.released.insert(sign->id);
      return false;
    }
    return true;
  }
  return false;
}

double lateral_control(const sim::WorldState& w, const sim::Route& route,
                       const StanleyGains& g) {
  const sim::Vec2 front{w.ego.pos.x + sim::kWheelbase * std::cos(w.ego.heading),
                        w.ego.pos.y + sim::kWheelbase * std::sin(w.ego.heading)};
  const auto proj = route.project(front, w.ego.s + sim::kWheelbase);
  const double heading_error = std::remainder(proj.heading - w.ego.heading, 2.0 * M_PI);
  return stanley_steering(-proj.lateral, heading_error, w.ego.speed, g);
}

sim::ControlInput automated_control(const sim::WorldState& w,
                                    const sim::Route& route,
                                    const sim::SessionConfig& cfg,
                                    ControllerState& state) {
  const StyleParams p = style_params(w.style);
  sim::ControlInput u;
  u.steer = lateral_control(w, route);

  if (stop_sign_hold(w, p, state.stop, cfg.tick)) {
    u.accel = -p.max_decel;
    return u;
  }
  const auto target = target_selection(w, p, cfg, state.stop.released);
  if (target && target->gap <= 0.0) {
    u.accel = -p.max_decel;
    return u;
  }
  u.accel = idm_acceleration(w.ego.speed, target, p);
  // IDM only approaches a stationary target asymptotically; finish the stop
  // once the vehicle is slow and at its minimum distance.
  if (target && target->stop_line && target->gap - target->s0 < 1.0 &&
      w.ego.speed < 1.5)
    u.accel = -p.max_decel;
  return u;
}

}  // namespace driveadapt::control
