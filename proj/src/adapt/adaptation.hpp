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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "control/style.hpp"
#include "sim/world.hpp"

namespace driveadapt::adapt {

using control::DrivingStyle;

enum class AdaptationMode { kFixed, kTrustBased, kPreferenceBased };

// The six session types, in the canonical order used by the Latin square.
enum class SessionMode : int {
  kFixedLD = 0,
  kFixedLA,
  kTrustLD,
  kTrustLA,
  kPrefLD,
  kPrefLA,
};
inline constexpr int kNumSessionModes = 6;

std::string_view to_string(SessionMode m);
std::optional<SessionMode> parse_session_mode(std::string_view name);
AdaptationMode adaptation_mode(SessionMode m);
DrivingStyle initial_style(SessionMode m);

// Class order doubles as the classifier's label order and vote tie-break.
enum class PreferenceResponse : int {
  kMoreDefensive = 0,
  kSame = 1,
  kMoreAggressive = 2,
};

std::string_view to_string(PreferenceResponse r);
std::optional<PreferenceResponse> parse_preference(std::string_view s);

// Trust-change answers are integers in [-2, 2], spelled "+2" "+1" "0" "-1" "-2".
bool valid_trust_response(int r);
std::string trust_to_wire(int r);
std::optional<int> parse_trust(std::string_view s);

struct AdaptationState {
  AdaptationMode mode = AdaptationMode::kFixed;
  DrivingStyle style = DrivingStyle::kLD;
  int trust_accumulator = 0;
  std::optional<PreferenceResponse> last_preference;
};

AdaptationState initial_adaptation(SessionMode m);

// Adds the answer to the accumulator; at +2 / -2 the style moves one level
// more aggressive / defensive (saturating at HA / HD) and the accumulator
// resets to 0. Throws invalid_argument outside [-2, 2] and state_error when
// the session is not trust-based.
AdaptationState apply_trust_response(const AdaptationState& s, int response);

// one level per non-"same" answer, saturating. Throws state_error when the
// session is not preference-based.
AdaptationState apply_preference_response(const AdaptationState& s,
                                          PreferenceResponse response);

inline constexpr double kResumeDelay = 2.0;

struct TakeoverState {
  bool automation_on = true;
  double pedal_release_timer = kResumeDelay;  // [0, 2]
  bool takeover_brake = false;     // latched since the current event began
  bool takeover_throttle = false;
};

TakeoverState takeover_update(const TakeoverState& s, bool brake_pressed,
                              bool throttle_pressed, double dt);

struct SurveyPrompt {
  enum class Question { kTrust, kPreference };
  Question question = Question::kTrust;
  int event_id = 0;
  DrivingStyle style = DrivingStyle::kLD;

  std::string_view question_name() const {
    return question == Question::kTrust ? "trust" : "preference";
  }
  std::vector<std::string> options() const;
};

// Emits a prompt on the tick at which an event deactivates (present in
// `before.active_event`, absent in `after`). Fixed sessions never prompt.
std::optional<SurveyPrompt> schedule_survey(const sim::WorldState& before,
                                            const sim::WorldState& after,
                                            AdaptationMode mode);

// Balanced (Williams) 6x6 Latin square row for a participant.
std::array<SessionMode, kNumSessionModes> session_order(int participant_id);

}  // namespace driveadapt::adapt
