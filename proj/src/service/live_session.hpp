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

#include <cstddef>
#include <deque>
#include <optional>
#include <string>

#include <json.hpp>

#include "service/session_engine.hpp"

namespace driveadapt::service {

inline constexpr int kWireVersion = 1;
inline constexpr double kFramePeriod = 0.05;  // s of simulated time
inline constexpr std::size_t kCommandQueueCapacity = 64;

// Interactive session: validated commands queue up and are applied at the
// start of the next tick; frames are snapshots taken between ticks.
class LiveSession {
 public:
  explicit LiveSession(const SessionSpec& spec);

  const SessionEngine& engine() const { return engine_; }

  // Validates a command message and queues it. Returns the ack or error
  // reply; a rejected command leaves the session untouched.
  nlohmann::json submit(const nlohmann::json& msg);
  nlohmann::json submit_text(const std::string& text);

  // Drains the queue and advances one tick unless paused or finished.
  // Returns true when a tick was simulated.
  bool step();
  // True once per frame period of simulated time.
  bool frame_due() const;
  nlohmann::json frame();

  nlohmann::json hello(bool read_only) const;

 private:
  struct Command {
    enum class Type { kSurvey, kPedalPress, kPedalRelease, kSteering };
    Type type = Type::kSurvey;
    std::string response;
    bool brake = false;  // pedal commands: brake or throttle
    std::optional<double> angle;
  };

  static nlohmann::json error(const std::string& reason, const nlohmann::json& id);
  void apply(const Command& c);

  SessionEngine engine_;
  std::deque<Command> queue_;
  bool survey_queued_ = false;
  bool brake_ = false, throttle_ = false;
  std::optional<double> steer_;
  std::int64_t frames_ = 0;
};

}  // namespace driveadapt::service
