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

#include "sim/session_log.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "common/error.hpp"

namespace driveadapt::sim {

using nlohmann::json;

TickRecord make_tick_record(const WorldState& w, const ControlInput& cmd,
                            bool human_throttle, bool human_brake) {
  TickRecord r;
  r.tick = w.tick;
  r.t = w.time;
  r.x = w.ego.pos.x;
  r.y = w.ego.pos.y;
  r.heading = w.ego.heading;
  r.speed = w.ego.speed;
  r.accel = w.ego.accel;
  r.steer = w.ego.steer;
  r.s = w.ego.s;
  r.lateral = w.ego.lateral;
  r.route_index = w.route_index;
  r.style = w.style;
  r.cmd_accel = cmd.accel;
  r.cmd_steer = cmd.steer;
  r.human_throttle = human_throttle;
  r.human_brake = human_brake;
  r.event = w.active_event;
  r.automation = w.automation_on;
  return r;
}

namespace {

control::DrivingStyle style_from(const json& j) {
  auto s = control::parse_style(j.get<std::string>());
  if (!s) throw invalid_argument("bad style in log: " + j.dump());
  return *s;
}

json to_json(const LogRecord& rec) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, TickRecord>) {
          return json{{"type", "tick"},
                      {"tick", r.tick},
                      {"t", r.t},
                      {"x", r.x},
                      {"y", r.y},
                      {"heading", r.heading},
                      {"speed", r.speed},
                      {"accel", r.accel},
                      {"steer", r.steer},
                      {"s", r.s},
                      {"lateral", r.lateral},
                      {"route_index", r.route_index},
                      {"style", std::string(control::to_string(r.style))},
                      {"cmd_accel", r.cmd_accel},
                      {"cmd_steer", r.cmd_steer},
                      {"human_throttle", r.human_throttle},
                      {"human_brake", r.human_brake},
                      {"event", r.event ? json(*r.event) : json(nullptr)},
                      {"automation", r.automation}};
        } else if constexpr (std::is_same_v<T, EventMark>) {
          return json{{"type", r.phase == EventMark::Phase::kStart ? "event_start"
                                                                   : "event_end"},
                      {"event", r.event_id},
                      {"kind", std::string(to_string(r.kind))},
                      {"t", r.t}};
        } else {
          json j{{"type", r.is_response ? "survey_response" : "survey_prompt"},
                 {"event", r.event_id},
                 {"t", r.t},
                 {"question", r.question},
                 {"style_before", std::string(control::to_string(r.style_before))}};
          if (r.is_response) {
            j["response"] = r.response;
            j["style_after"] = std::string(control::to_string(r.style_after));
          }
          return j;
        }
      },
      rec);
}

}  // namespace

std::string SessionLog::to_json_line(const LogRecord& r) { return to_json(r).dump(); }

void SessionLog::write_jsonl(std::ostream& out) const {
  for (const auto& r : records_) out << to_json(r).dump() << '\n';
}

SessionLog SessionLog::read_jsonl(std::istream& in) {
  SessionLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type");
      if (type == "tick") {
        TickRecord r;
        r.tick = j.at("tick");
        r.t = j.at("t");
        r.x = j.at("x");
        r.y = j.at("y");
        r.heading = j.at("heading");
        r.speed = j.at("speed");
        r.accel = j.at("accel");
        r.steer = j.at("steer");
        r.s = j.at("s");
        r.lateral = j.at("lateral");
        r.route_index = j.at("route_index");
        r.style = style_from(j.at("style"));
        r.cmd_accel = j.at("cmd_accel");
        r.cmd_steer = j.at("cmd_steer");
        r.human_throttle = j.at("human_throttle");
        r.human_brake = j.at("human_brake");
        if (!j.at("event").is_null()) r.event = j.at("event").get<int>();
        r.automation = j.at("automation");
        log.append(r);
      } else if (type == "event_start" || type == "event_end") {
        EventMark m;
        m.phase = type == "event_start" ? EventMark::Phase::kStart
                                        : EventMark::Phase::kEnd;
        m.event_id = j.at("event");
        auto kind = parse_event_kind(j.at("kind").get<std::string>());
        if (!kind) throw invalid_argument("unknown event kind");
        m.kind = *kind;
        m.t = j.at("t");
        log.append(m);
      } else if (type == "survey_prompt" || type == "survey_response") {
        SurveyMark m;
        m.is_response = type == "survey_response";
        m.event_id = j.at("event");
        m.t = j.at("t");
        m.question = j.at("question");
        m.style_before = style_from(j.at("style_before"));
        if (m.is_response) {
          m.response = j.at("response");
          m.style_after = style_from(j.at("style_after"));
        }
        log.append(m);
      } else {
        throw invalid_argument("unknown record type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw invalid_argument("session log line " + std::to_string(lineno) +
                             ": " + e.what());
    } catch (const Error& e) {
      throw invalid_argument("session log line " + std::to_string(lineno) +
                             ": " + e.what());
    }
  }
  return log;
}

std::vector<TickRecord> SessionLog::ticks() const {
  std::vector<TickRecord> out;
  for (const auto& r : records_)
    if (auto* t = std::get_if<TickRecord>(&r)) out.push_back(*t);
  return out;
}

std::pair<double, double> event_window(const SessionLog& log, int event_id) {
  std::optional<double> start, end;
  for (const auto& r : log.records()) {
    if (auto* m = std::get_if<EventMark>(&r); m && m->event_id == event_id) {
      if (m->phase == EventMark::Phase::kStart) start = m->t;
      else end = m->t;
    }
  }
  if (!start) throw state_error("event not reached");
  if (!end) throw state_error("event not completed");
  return {*start, *end};
}

}  // namespace driveadapt::sim
