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
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "control/style.hpp"
#include "sim/world.hpp"

namespace driveadapt::sim {

struct TickRecord {
  std::int64_t tick = 0;
  double t = 0.0;
  double x = 0.0, y = 0.0, heading = 0.0;
  double speed = 0.0, accel = 0.0, steer = 0.0;
  double s = 0.0, lateral = 0.0;
  int route_index = 0;
  control::DrivingStyle style = control::DrivingStyle::kLD;
  double cmd_accel = 0.0, cmd_steer = 0.0;
  bool human_throttle = false, human_brake = false;
  std::optional<int> event;
  bool automation = true;
};

struct EventMark {
  enum class Phase { kStart, kEnd };
  Phase phase = Phase::kStart;
  int event_id = 0;
  EventKind kind = EventKind::kPedSidewalk;
  double t = 0.0;
};

// Survey prompt or answer, serialized with its wire spelling.
struct SurveyMark {
  bool is_response = false;
  int event_id = 0;
  double t = 0.0;
  std::string question;  // "trust" | "preference"
  std::string response;  // empty for prompts
  control::DrivingStyle style_before = control::DrivingStyle::kLD;
  control::DrivingStyle style_after = control::DrivingStyle::kLD;
};

using LogRecord = std::variant<TickRecord, EventMark, SurveyMark>;

TickRecord make_tick_record(const WorldState& w, const ControlInput& cmd,
                            bool human_throttle, bool human_brake);

// Append-only, chronological session log; one JSON object per line.
class SessionLog {
 public:
  void append(LogRecord r) { records_.push_back(std::move(r)); }
  const std::vector<LogRecord>& records() const { return records_; }

  void write_jsonl(std::ostream& out) const;
  static std::string to_json_line(const LogRecord& r);
  static SessionLog read_jsonl(std::istream& in);

  std::vector<TickRecord> ticks() const;

 private:
  std::vector<LogRecord> records_;
};

// Span from activation to deactivation of one event. Throws
// state_error("event not reached") if the log never activated it, and
// state_error("event not completed") if it never deactivated.
std::pair<double, double> event_window(const SessionLog& log, int event_id);

}  // namespace driveadapt::sim
