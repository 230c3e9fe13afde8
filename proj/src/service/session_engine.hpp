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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adapt/adaptation.hpp"
#include "control/controller.hpp"
#include "sim/session_log.hpp"

namespace driveadapt::service {

// Longitudinal commands while the human drives.
inline constexpr double kHumanThrottleAccel = 2.0;
inline constexpr double kHumanBrakeDecel = 4.0;
inline constexpr double kCoastDecel = 0.2;

struct HumanInput {
  bool brake = false;
  bool throttle = false;
  std::optional<double> steer;  // rad; only used while automation is off
};

struct SessionSpec {
  int participant = 0;
  int session_index = 0;  // position in the participant's session order
  adapt::SessionMode mode = adapt::SessionMode::kFixedLD;
  std::uint64_t route_seed = 1;
  sim::SessionConfig sim;
};

struct EventAnnotation {
  int id = 0;
  sim::EventKind kind = sim::EventKind::kPedSidewalk;
  int intersection_index = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  bool completed = false;
  control::DrivingStyle style = control::DrivingStyle::kLD;        // at activation
  control::DrivingStyle style_after = control::DrivingStyle::kLD;  // after the survey
  bool takeover_brake = false;
  bool takeover_throttle = false;
  std::string question;  // "trust" | "preference" | "" (fixed sessions)
  std::string response;  // wire spelling, empty until answered
  std::optional<int> trust;
  std::optional<int> trust_level;  // running sum of trust answers
};

// One drive: automation, takeover, survey pauses and the tick log.
class SessionEngine {
 public:
  explicit SessionEngine(const SessionSpec& spec);

  const SessionSpec& spec() const { return spec_; }
  const sim::Route& route() const { return route_; }
  const sim::WorldState& world() const { return world_; }
  const adapt::AdaptationState& adaptation() const { return adaptation_; }
  const adapt::TakeoverState& takeover() const { return takeover_; }
  const std::optional<adapt::SurveyPrompt>& pending_survey() const { return pending_; }
  const sim::SessionLog& log() const { return log_; }
  const std::vector<EventAnnotation>& events() const { return events_; }

  bool paused() const { return pending_.has_value(); }
  bool finished() const;

  // Advances one tick. Throws state_error while a survey is pending or after
  // the drive has finished.
  void tick(const HumanInput& input);

  // Throw state_error without a matching pending prompt.
  void answer_trust(int response);
  void answer_preference(adapt::PreferenceResponse response);
  // Accepts the wire spelling of either question.
  void answer(const std::string& wire);

  // Ticks logged while the event was active.
  std::vector<sim::TickRecord> event_trace(int event_id) const;

  // session.json contents.
  nlohmann::json record() const;

 private:
  void finish_answer(const std::string& wire);

  SessionSpec spec_;
  sim::Route route_;
  sim::WorldState world_;
  adapt::AdaptationState adaptation_;
  adapt::TakeoverState takeover_;
  control::ControllerState controller_;
  std::optional<adapt::SurveyPrompt> pending_;
  sim::SessionLog log_;
  std::vector<EventAnnotation> events_;
  std::vector<std::size_t> first_tick_of_event_, last_tick_of_event_;
  int trust_sum_ = 0;
};

// Re-drives a session from its log: pedal and steering inputs per tick and
// survey answers in order. Throws invalid_argument if the log does not fit
// the session described by `spec`.
SessionEngine replay_session(const SessionSpec& spec, const sim::SessionLog& log);

nlohmann::json to_json(const EventAnnotation& a);

}  // namespace driveadapt::service
