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

#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "common/error.hpp"
#include "control/controller.hpp"
#include "sim/route.hpp"
#include "sim/session_log.hpp"
#include "sim/world.hpp"

namespace driveadapt::sim {
namespace {

TEST(Route, Layout) {
  const SessionConfig cfg;
  const auto r = generate_route(11, cfg);
  ASSERT_EQ(r.intersections().size(), 16u);
  ASSERT_EQ(r.events().size(), 8u);
  std::set<int> kinds;
  for (const auto& ev : r.events()) {
    EXPECT_EQ(ev.intersection_index % 2, 1);
    const double center = r.intersections()[ev.intersection_index].s;
    EXPECT_DOUBLE_EQ(center - ev.trigger_s, 60.0);
    EXPECT_DOUBLE_EQ(ev.end_s - center, 150.0);
    kinds.insert(static_cast<int>(ev.kind));
  }
  EXPECT_EQ(kinds.size(), 8u);
  EXPECT_GT(r.length(), r.intersections().back().s);
}

TEST(Route, SeededPermutation) {
  const SessionConfig cfg;
  EXPECT_TRUE(generate_route(3, cfg) == generate_route(3, cfg));
  int differing = 0;
  for (std::uint64_t s = 0; s < 10; ++s)
    differing += !(generate_route(s, cfg) == generate_route(s + 100, cfg));
  EXPECT_GE(differing, 8);
}

TEST(Route, ProjectionRoundTrip) {
  const SessionConfig cfg;
  const auto r = generate_route(2, cfg);
  for (double s = 5.0; s < r.length() - 5.0; s += 37.0) {
    const auto p = r.offset_point(s, 1.2);
    const auto proj = r.project(p, s);
    EXPECT_NEAR(proj.s, s, 0.05);
    EXPECT_NEAR(proj.lateral, 1.2, 0.05);
  }
}

TEST(EventKinds, Names) {
  for (int k = 0; k < kNumEventKinds; ++k) {
    const auto kind = static_cast<EventKind>(k);
    EXPECT_EQ(parse_event_kind(to_string(kind)), kind);
  }
  EXPECT_FALSE(parse_event_kind("meteor").has_value());
  EXPECT_TRUE(is_pedestrian_event(EventKind::kPedCrosswalk));
  EXPECT_FALSE(is_pedestrian_event(EventKind::kTwoWayStop));
}

struct Drive {
  SessionLog log;
  WorldState world;
};

Drive drive_session(std::uint64_t seed, control::DrivingStyle style) {
  const SessionConfig cfg;
  const auto route = generate_route(seed, cfg);
  Drive d;
  d.world = initial_world(route, style);
  control::ControllerState st;
  while (!d.world.finished(route) && d.world.time < cfg.max_session_time) {
    const auto before = d.world.active_event;
    const auto u = control::automated_control(d.world, route, cfg, st);
    d.world = step(d.world, route, u, cfg.tick);
    if (!before && d.world.active_event)
      d.log.append(EventMark{EventMark::Phase::kStart, *d.world.active_event,
                             route.events()[*d.world.active_event].kind, d.world.time});
    d.log.append(make_tick_record(d.world, u, false, false));
    if (before && !d.world.active_event)
      d.log.append(EventMark{EventMark::Phase::kEnd, *before, route.events()[*before].kind,
                             d.world.time});
  }
  return d;
}

TEST(World, EveryEventCompletesUnderAutomation) {
  for (std::uint64_t seed : {1, 2, 3}) {
    for (auto style : control::kAllStyles) {
      const auto d = drive_session(seed, style);
      for (int e = 0; e < 8; ++e) {
        ASSERT_TRUE(d.world.events[e].completed()) << seed << " " << e;
        const auto [t0, t1] = event_window(d.log, e);
        EXPECT_GT(t1 - t0, 5.0);
        EXPECT_LT(t1 - t0, 60.0);
      }
      EXPECT_LT(d.world.time, 600.0);
    }
  }
}

TEST(World, Deterministic) {
  const auto a = drive_session(9, control::DrivingStyle::kLA);
  const auto b = drive_session(9, control::DrivingStyle::kLA);
  std::ostringstream sa, sb;
  a.log.write_jsonl(sa);
  b.log.write_jsonl(sb);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(World, SpeedNeverNegative) {
  const SessionConfig cfg;
  const auto route = generate_route(1, cfg);
  auto w = initial_world(route, control::DrivingStyle::kLD);
  for (int i = 0; i < 200; ++i) {
    w = step(w, route, ControlInput{-10.0, 0.0}, cfg.tick);
    ASSERT_GE(w.ego.speed, 0.0);
  }
  EXPECT_EQ(w.ego.speed, 0.0);
}

TEST(SessionLog, JsonlRoundTrip) {
  const auto d = drive_session(4, control::DrivingStyle::kHD);
  SessionLog log = d.log;
  SurveyMark m;
  m.is_response = true;
  m.event_id = 2;
  m.t = 12.5;
  m.question = "preference";
  m.response = "same";
  log.append(m);
  std::stringstream ss;
  log.write_jsonl(ss);
  const auto back = SessionLog::read_jsonl(ss);
  std::ostringstream again;
  back.write_jsonl(again);
  EXPECT_EQ(ss.str(), again.str());
  EXPECT_EQ(back.ticks().size(), log.ticks().size());
}

TEST(SessionLog, MalformedLine) {
  std::istringstream in("{\"type\":\"tick\"\n");
  EXPECT_THROW(SessionLog::read_jsonl(in), Error);
}

TEST(SessionLog, EventWindowErrors) {
  SessionLog log;
  EXPECT_THROW(event_window(log, 0), Error);
  log.append(EventMark{EventMark::Phase::kStart, 0, EventKind::kPedSidewalk, 1.0});
  try {
    event_window(log, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()), "event not completed");
  }
}

}  // namespace
}  // namespace driveadapt::sim
