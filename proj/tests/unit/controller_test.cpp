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

#include <cmath>

#include <gtest/gtest.h>

#include "common/error.hpp"
#include "control/controller.hpp"
#include "sim/route.hpp"
#include "sim/world.hpp"

namespace driveadapt::control {
namespace {

using sim::EventKind;

constexpr std::array<EventKind, 8> kStopFirst = {
    EventKind::kTwoWayStop,       EventKind::kPedSidewalk,  EventKind::kPedCrosswalk,
    EventKind::kPedAtIntersection, EventKind::kPedWalkingAtIntersection,
    EventKind::kRightTurnRed,     EventKind::kFollowLeadVehicle, EventKind::kYieldLeftTurn};

TEST(StyleTable, Values) {
  const auto la = style_params(DrivingStyle::kLA);
  EXPECT_EQ(la.set_speed, 13.0);
  EXPECT_EQ(la.max_accel, 4.0);
  EXPECT_EQ(la.max_decel, 5.0);
  EXPECT_EQ(la.stop_sign_duration, 2.0);
  EXPECT_EQ(style_params(DrivingStyle::kHA).stop_sign_duration, 1.8);
  EXPECT_EQ(style_params(DrivingStyle::kHD).stop_sign_duration, 3.0);
  EXPECT_EQ(style_params(DrivingStyle::kLD).set_speed, 12.0);
}

// Set speed rises and car MDD falls from HD to HA. Intersection and
// pedestrian MDD follow the table, which grows with aggressiveness.
TEST(StyleTable, Orderings) {
  for (int i = 0; i + 1 < 4; ++i) {
    const auto a = style_params(kAllStyles[i]);
    const auto b = style_params(kAllStyles[i + 1]);
    EXPECT_LT(a.set_speed, b.set_speed);
    EXPECT_LT(a.max_accel, b.max_accel);
    EXPECT_GT(a.mdd_car, b.mdd_car);
  }
}

TEST(StyleOrder, ShiftSaturates) {
  EXPECT_EQ(shift_style(DrivingStyle::kLD, -1), DrivingStyle::kHD);
  EXPECT_EQ(shift_style(DrivingStyle::kHD, -1), DrivingStyle::kHD);
  EXPECT_EQ(shift_style(DrivingStyle::kLA, 1), DrivingStyle::kHA);
  EXPECT_EQ(shift_style(DrivingStyle::kHA, 3), DrivingStyle::kHA);
  EXPECT_EQ(parse_style("LA"), DrivingStyle::kLA);
  EXPECT_FALSE(parse_style("MA").has_value());
}

TEST(Idm, FreeRoad) {
  const auto p = style_params(DrivingStyle::kLA);
  EXPECT_DOUBLE_EQ(idm_acceleration(0.0, std::nullopt, p), 4.0);
  EXPECT_NEAR(idm_acceleration(13.0, std::nullopt, p), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(idm_acceleration(40.0, std::nullopt, p), -5.0);
}

TEST(Idm, Interaction) {
  const auto p = style_params(DrivingStyle::kLA);
  Target t;
  t.gap = 30.0;
  t.lead_speed = 5.0;
  t.s0 = 9.0;
  EXPECT_NEAR(idm_acceleration(10.0, t, p), -1.2919696634718796, 1e-12);
  t.gap = 1.0;
  EXPECT_DOUBLE_EQ(idm_acceleration(10.0, t, p), -5.0);
  t.gap = 0.0;
  EXPECT_THROW(idm_acceleration(10.0, t, p), Error);
}

TEST(Idm, MinimumDistances) {
  const auto p = style_params(DrivingStyle::kHD);
  EXPECT_EQ(mdd_for(sim::ObstacleKind::kPedestrian, p), p.mdd_pedestrian);
  EXPECT_EQ(mdd_for(sim::ObstacleKind::kCar, p), p.mdd_car);
  EXPECT_EQ(mdd_for(sim::ObstacleKind::kStopSign, p), p.mdd_intersection);
  EXPECT_EQ(mdd_for(sim::ObstacleKind::kTrafficLight, p), p.mdd_intersection);
}

TEST(Stanley, Values) {
  EXPECT_NEAR(stanley_steering(1.0, 0.0, 10.0), 0.24264766501773763, 1e-12);
  EXPECT_NEAR(stanley_steering(-0.5, 0.1, 3.0), -0.28328414774568556, 1e-12);
  EXPECT_DOUBLE_EQ(stanley_steering(50.0, 0.0, 0.0), 0.61);
  EXPECT_DOUBLE_EQ(stanley_steering(-50.0, 0.0, 0.0), -0.61);
}

TEST(Controller, SteadySpeedWithoutObstacles) {
  const sim::SessionConfig cfg;
  const auto route = sim::generate_route(5, cfg);
  for (auto style : kAllStyles) {
    auto w = sim::initial_world(route, style);
    ControllerState st;
    for (int i = 0; i < 1500; ++i) {
      w.obstacles.clear();
      w = sim::step(w, route, automated_control(w, route, cfg, st), cfg.tick);
    }
    EXPECT_NEAR(w.ego.speed, style_params(style).set_speed,
                0.02 * style_params(style).set_speed)
        << to_string(style);
    EXPECT_LT(std::abs(w.ego.lateral), 0.5);
  }
}

TEST(Controller, StopSignHold) {
  const sim::SessionConfig cfg;
  const auto route = sim::make_route(cfg, kStopFirst);
  for (auto style : kAllStyles) {
    auto w = sim::initial_world(route, style);
    ControllerState st;
    int run = 0, longest = 0;
    while (!w.events[0].completed() && w.time < 200.0) {
      w = sim::step(w, route, automated_control(w, route, cfg, st), cfg.tick);
      run = w.ego.speed == 0.0 ? run + 1 : 0;
      longest = std::max(longest, run);
    }
    ASSERT_TRUE(w.events[0].completed());
    EXPECT_NEAR(longest * cfg.tick, style_params(style).stop_sign_duration, cfg.tick + 1e-9)
        << to_string(style);
  }
}

TEST(Controller, TargetSkipsObstaclesBehind) {
  const sim::SessionConfig cfg;
  const auto route = sim::generate_route(1, cfg);
  auto w = sim::initial_world(route, DrivingStyle::kLD);
  w.ego.s = 100.0;
  sim::Obstacle behind;
  behind.kind = sim::ObstacleKind::kCar;
  behind.s = 90.0;
  w.obstacles.push_back(behind);
  EXPECT_FALSE(target_selection(w, style_params(DrivingStyle::kLD), cfg).has_value());
  sim::Obstacle ahead = behind;
  ahead.id = 1;
  ahead.s = 130.0;
  w.obstacles.push_back(ahead);
  const auto t = target_selection(w, style_params(DrivingStyle::kLD), cfg);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(t->obstacle_id, 1);
  EXPECT_EQ(t->s0, style_params(DrivingStyle::kLD).mdd_car);
}

}  // namespace
}  // namespace driveadapt::control
