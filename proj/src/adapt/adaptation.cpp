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

#include "adapt/adaptation.hpp"

#include <algorithm>

#include "common/error.hpp"

namespace driveadapt::adapt {

namespace {
constexpr std::array<std::string_view, kNumSessionModes> kModeNames = {
    "fixed_LD", "fixed_LA", "trust_LD", "trust_LA", "pref_LD", "pref_LA"};
constexpr std::array<std::string_view, 3> kPreferenceNames = {
    "more_defensive", "same", "more_aggressive"};
}  // namespace

std::string_view to_string(SessionMode m) {
  return kModeNames[static_cast<std::size_t>(m)];
}

std::optional<SessionMode> parse_session_mode(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i)
    if (kModeNames[i] == name) return static_cast<SessionMode>(i);
  return std::nullopt;
}

AdaptationMode adaptation_mode(SessionMode m) {
  switch (m) {
    case SessionMode::kFixedLD:
    case SessionMode::kFixedLA: return AdaptationMode::kFixed;
    case SessionMode::kTrustLD:
    case SessionMode::kTrustLA: return AdaptationMode::kTrustBased;
    case SessionMode::kPrefLD:
    case SessionMode::kPrefLA: return AdaptationMode::kPreferenceBased;
  }
  return AdaptationMode::kFixed;
}

DrivingStyle initial_style(SessionMode m) {
  const int i = static_cast<int>(m);
  return i % 2 == 0 ? DrivingStyle::kLD : DrivingStyle::kLA;
}

std::string_view to_string(PreferenceResponse r) {
  return kPreferenceNames[static_cast<std::size_t>(r)];
}

std::optional<PreferenceResponse> parse_preference(std::string_view s) {
  for (std::size_t i = 0; i < kPreferenceNames.size(); ++i)
    if (kPreferenceNames[i] == s) return static_cast<PreferenceResponse>(i);
  return std::nullopt;
}

bool valid_trust_response(int r) { return r >= -2 && r <= 2; }

std::string trust_to_wire(int r) {
  if (!valid_trust_response(r))
    throw invalid_argument("trust response out of range: " + std::to_string(r));
  return r > 0 ? "+" + std::to_string(r) : std::to_string(r);
}

std::optional<int> parse_trust(std::string_view s) {
  static const std::array<std::string_view, 5> wire = {"-2", "-1", "0", "+1", "+2"};
  for (int i = 0; i < 5; ++i)
    if (wire[i] == s) return i - 2;
  if (s == "1") return 1;
  if (s == "2") return 2;
  return std::nullopt;
}

AdaptationState initial_adaptation(SessionMode m) {
  AdaptationState s;
  s.mode = adaptation_mode(m);
  s.style = initial_style(m);
  return s;
}

AdaptationState apply_trust_response(const AdaptationState& s, int response) {
  if (s.mode != AdaptationMode::kTrustBased)
    throw state_error("trust response outside a trust-based session");
  if (!valid_trust_response(response))
    throw invalid_argument("trust response must be one of +2,+1,0,-1,-2");
  AdaptationState n = s;
  n.trust_accumulator += response;
  if (n.trust_accumulator >= 2) {
    n.style = control::shift_style(n.style, +1);
    n.trust_accumulator = 0;
  } else if (n.trust_accumulator <= -2) {
    n.style = control::shift_style(n.style, -1);
    n.trust_accumulator = 0;
  }
  return n;
}

AdaptationState apply_preference_response(const AdaptationState& s,
                                          PreferenceResponse response) {
  if (s.mode != AdaptationMode::kPreferenceBased)
    throw state_error("preference response outside a preference-based session");
  AdaptationState n = s;
  n.last_preference = response;
  if (response == PreferenceResponse::kMoreAggressive)
    n.style = control::shift_style(n.style, +1);
  else if (response == PreferenceResponse::kMoreDefensive)
    n.style = control::shift_style(n.style, -1);
  return n;
}

TakeoverState takeover_update(const TakeoverState& s, bool brake, bool throttle,
                              double dt) {
  TakeoverState n = s;
  if (brake || throttle) {
    n.automation_on = false;
    n.pedal_release_timer = 0.0;
    n.takeover_brake = n.takeover_brake || brake;
    n.takeover_throttle = n.takeover_throttle || throttle;
    return n;
  }
  n.pedal_release_timer = std::min(kResumeDelay, s.pedal_release_timer + dt);
  if (n.pedal_release_timer >= kResumeDelay - 1e-9) {
    n.pedal_release_timer = kResumeDelay;
    n.automation_on = true;
  }
  return n;
}

std::vector<std::string> SurveyPrompt::options() const {
  if (question == Question::kTrust) return {"+2", "+1", "0", "-1", "-2"};
  return {"more_aggressive", "same", "more_defensive"};
}

std::optional<SurveyPrompt> schedule_survey(const sim::WorldState& before,
                                            const sim::WorldState& after,
                                            AdaptationMode mode) {
  if (mode == AdaptationMode::kFixed) return std::nullopt;
  if (!before.active_event || after.active_event) return std::nullopt;
  SurveyPrompt p;
  p.question = mode == AdaptationMode::kTrustBased
                   ? SurveyPrompt::Question::kTrust
                   : SurveyPrompt::Question::kPreference;
  p.event_id = *before.active_event;
  p.style = after.style;
  return p;
}

std::array<SessionMode, kNumSessionModes> session_order(int participant_id) {
  // Williams design for even n: 0, 1, n-1, 2, n-2, ... shifted per row.
  constexpr std::array<int, kNumSessionModes> first = {0, 1, 5, 2, 4, 3};
  const int row = ((participant_id % kNumSessionModes) + kNumSessionModes) %
                  kNumSessionModes;
  std::array<SessionMode, kNumSessionModes> out;
  for (int c = 0; c < kNumSessionModes; ++c)
    out[c] = static_cast<SessionMode>((first[c] + row) % kNumSessionModes);
  return out;
}

}  // namespace driveadapt::adapt
