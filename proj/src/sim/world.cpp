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

#include "sim/world.hpp"

#include <algorithm>
#include <cmath>

namespace driveadapt::sim {

std::string_view to_string(ObstacleKind k) {
  switch (k) {
    case ObstacleKind::kPedestrian: return "pedestrian";
    case ObstacleKind::kCar: return "car";
    case ObstacleKind::kStopSign: return "stop_sign";
    case ObstacleKind::kTrafficLight: return "traffic_light";
  }
  return "?";
}

namespace {

void refresh_world_frame(Obstacle& o, const Route& route) {
  o.pos = route.offset_point(o.s, o.lateral);
  o.speed = std::hypot(o.v_s, o.v_lateral);
  o.heading = route.heading_at(o.s) + std::atan2(o.v_lateral, o.v_s);
}

Obstacle make_obstacle(ObstacleKind kind, double s, double lateral, int& next_id) {
  Obstacle o;
  o.id = next_id++;
  o.kind = kind;
  o.s = s;
  o.lateral = lateral;
  return o;
}

void advance(Obstacle& o, const WorldState& w, double t_next, double dt) {
  using Motion = ObstacleScript::Motion;
  auto& sc = o.script;
  bool moving = false;
  double vs = o.v_s, vl = o.v_lateral;
  switch (sc.motion) {
    case Motion::kStatic:
      break;
    case Motion::kConstant:
    case Motion::kOncoming:
      moving = true;
      break;
    case Motion::kWhenEgoNear:
      if (!sc.triggered && o.s - w.ego.s <= sc.trigger_gap) {
        sc.triggered = true;
        sc.triggered_at = w.time;
      }
      moving = sc.triggered && t_next - sc.triggered_at > sc.start_delay;
      break;
    case Motion::kRedLight:
      o.blocking = t_next < sc.release_time;
      break;
  }
  if (moving && std::abs(o.lateral) <= sc.lateral_limit) {
    o.s += vs * dt;
    o.lateral += vl * dt;
  }
  if (sc.motion == Motion::kOncoming && o.conflict_s)
    o.blocking = o.s > *o.conflict_s - 8.0;
}

}  // namespace

std::vector<Obstacle> spawn_event_obstacles(const EventInstance& ev,
                                            const Route& route, double now,
                                            int& next_id) {
  using Motion = ObstacleScript::Motion;
  const double c = route.intersections()[ev.intersection_index].s;
  const double stop_line = c - 6.0;
  std::vector<Obstacle> out;
  auto add = [&](Obstacle o) {
    refresh_world_frame(o, route);
    out.push_back(o);
  };
  switch (ev.kind) {
    case EventKind::kPedSidewalk: {
      auto o = make_obstacle(ObstacleKind::kPedestrian, c - 15.0, -4.5, next_id);
      o.v_s = 1.2;
      o.script.motion = Motion::kConstant;
      add(o);
      break;
    }
    case EventKind::kPedCrosswalk: {
      auto o = make_obstacle(ObstacleKind::kPedestrian, c - 8.0, -5.0, next_id);
      o.v_lateral = 1.3;
      o.script.motion = Motion::kWhenEgoNear;
      o.script.trigger_gap = 45.0;
      o.script.lateral_limit = 5.5;
      add(o);
      break;
    }
    case EventKind::kPedAtIntersection: {
      auto o = make_obstacle(ObstacleKind::kPedestrian, c - 4.0, -0.5, next_id);
      o.v_lateral = -1.3;
      o.script.motion = Motion::kWhenEgoNear;
      o.script.trigger_gap = 35.0;
      o.script.start_delay = 3.0;
      o.script.lateral_limit = 5.5;
      add(o);
      break;
    }
    case EventKind::kPedWalkingAtIntersection: {
      auto o = make_obstacle(ObstacleKind::kPedestrian, c + 8.0, 7.0, next_id);
      o.v_lateral = -1.1;
      o.script.motion = Motion::kConstant;
      o.script.lateral_limit = 7.5;
      add(o);
      break;
    }
    case EventKind::kRightTurnRed: {
      auto o = make_obstacle(ObstacleKind::kTrafficLight, stop_line, 0.0, next_id);
      o.blocking = true;
      o.script.motion = Motion::kRedLight;
      o.script.release_time = now + 10.0;
      add(o);
      break;
    }
    case EventKind::kFollowLeadVehicle: {
      auto o = make_obstacle(ObstacleKind::kCar, ev.trigger_s + 35.0, 0.0, next_id);
      o.v_s = 8.0;
      o.script.motion = Motion::kConstant;
      add(o);
      break;
    }
    case EventKind::kYieldLeftTurn: {
      auto o = make_obstacle(ObstacleKind::kCar, c + 90.0, 3.5, next_id);
      o.v_s = -10.0;
      o.conflict_s = c;
      o.blocking = true;
      o.script.motion = Motion::kOncoming;
      add(o);
      break;
    }
    case EventKind::kTwoWayStop: {
      auto o = make_obstacle(ObstacleKind::kStopSign, stop_line, 0.0, next_id);
      o.blocking = true;
      add(o);
      break;
    }
  }
  return out;
}

WorldState initial_world(const Route& route, control::DrivingStyle style) {
  WorldState w;
  w.style = style;
  w.ego.pos = route.point_at(0.0);
  w.ego.heading = route.heading_at(0.0);
  w.route_index = route.route_index_at(0.0);
  return w;
}

WorldState step(const WorldState& world, const Route& route,
                const ControlInput& controls, double dt) {
  WorldState w = world;
  w.tick = world.tick + 1;
  w.time = static_cast<double>(w.tick) * dt;

  auto& e = w.ego;
  const double v = world.ego.speed;
  e.pos.x += v * std::cos(world.ego.heading) * dt;
  e.pos.y += v * std::sin(world.ego.heading) * dt;
  e.heading += v / kWheelbase * std::tan(controls.steer) * dt;
  e.heading = std::remainder(e.heading, 2.0 * M_PI);
  e.steer = controls.steer;
  e.speed = std::max(0.0, v + controls.accel * dt);
  e.accel = (e.speed - v) / dt;
  const auto proj = route.project(e.pos, world.ego.s);
  e.s = proj.s;
  e.lateral = proj.lateral;
  w.route_index = route.route_index_at(e.s);

  for (auto& o : w.obstacles) {
    advance(o, world, w.time, dt);
    refresh_world_frame(o, route);
  }

  const auto& events = route.events();
  if (w.active_event) {
    const int idx = *w.active_event;
    if (e.s >= events[idx].end_s) {
      w.events[idx].t_end = w.time;
      w.active_event.reset();
      w.obstacles.clear();
    }
  } else {
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (w.events[i].t_start) continue;
      if (e.s >= events[i].trigger_s) {
        w.active_event = static_cast<int>(i);
        w.events[i].t_start = w.time;
        w.obstacles = spawn_event_obstacles(events[i], route, w.time,
                                            w.next_obstacle_id);
      }
      break;
    }
  }
  return w;
}

}  // namespace driveadapt::sim
