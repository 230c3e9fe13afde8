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

#include "service/live_session.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"
#include "control/controller.hpp"

namespace driveadapt::service {

using nlohmann::json;

LiveSession::LiveSession(const SessionSpec& spec) : engine_(spec) {}

json LiveSession::error(const std::string& reason, const json& id) {
  json j{{"v", kWireVersion}, {"type", "error"}, {"reason", reason}};
  if (!id.is_null()) j["id"] = id;
  return j;
}

json LiveSession::submit_text(const std::string& text) {
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::exception&) {
    return error("malformed JSON", nullptr);
  }
  return submit(msg);
}

json LiveSession::submit(const json& msg) {
  if (!msg.is_object()) return error("command must be a JSON object", nullptr);
  const json id = msg.contains("id") ? msg["id"] : json(nullptr);
  if (!msg.contains("v") || msg["v"] != kWireVersion)
    return error("unsupported or missing version; expected v=" + std::to_string(kWireVersion), id);
  if (!msg.contains("type") || !msg["type"].is_string()) return error("missing command type", id);
  if (queue_.size() >= kCommandQueueCapacity) return error("command queue full", id);
  if (engine_.finished()) return error("session has finished", id);

  const auto type = msg["type"].get<std::string>();
  Command c;
  if (type == "survey_response") {
    const auto& p = engine_.pending_survey();
    if (!p || survey_queued_) return error("no survey is pending", id);
    if (!msg.contains("response")) return error("survey_response needs a response", id);
    std::string r;
    if (msg["response"].is_string())
      r = msg["response"].get<std::string>();
    else if (msg["response"].is_number_integer())
      r = adapt::trust_to_wire(msg["response"].get<int>());
    else
      return error("response must be a string", id);
    const auto options = p->options();
    if (p->question == adapt::SurveyPrompt::Question::kTrust) {
      const auto t = adapt::parse_trust(r);
      if (!t) return error("trust answer must be one of +2, +1, 0, -1, -2", id);
      r = adapt::trust_to_wire(*t);
    } else if (!adapt::parse_preference(r)) {
      return error("preference answer must be more_aggressive, same or more_defensive", id);
    }
    c.type = Command::Type::kSurvey;
    c.response = r;
    survey_queued_ = true;
  } else if (type == "pedal_press" || type == "pedal_release") {
    if (!msg.contains("pedal") || !msg["pedal"].is_string())
      return error(type + " needs a pedal", id);
    const auto pedal = msg["pedal"].get<std::string>();
    if (pedal != "brake" && pedal != "throttle")
      return error("pedal must be brake or throttle", id);
    c.type = type == "pedal_press" ? Command::Type::kPedalPress : Command::Type::kPedalRelease;
    c.brake = pedal == "brake";
  } else if (type == "steering") {
    if (!msg.contains("angle")) return error("steering needs an angle", id);
    if (!msg["angle"].is_null()) {
      if (!msg["angle"].is_number()) return error("angle must be a number or null", id);
      const double a = msg["angle"].get<double>();
      if (!std::isfinite(a)) return error("angle must be finite", id);
      c.angle = std::clamp(a, -control::StanleyGains{}.max_steer, control::StanleyGains{}.max_steer);
    }
    c.type = Command::Type::kSteering;
  } else {
    return error("unknown command type '" + type + "'", id);
  }
  queue_.push_back(std::move(c));
  json ack{{"v", kWireVersion}, {"type", "ack"}, {"command", type}};
  if (!id.is_null()) ack["id"] = id;
  return ack;
}

void LiveSession::apply(const Command& c) {
  switch (c.type) {
    case Command::Type::kSurvey:
      survey_queued_ = false;
      engine_.answer(c.response);
      break;
    case Command::Type::kPedalPress:
      (c.brake ? brake_ : throttle_) = true;
      break;
    case Command::Type::kPedalRelease:
      (c.brake ? brake_ : throttle_) = false;
      break;
    case Command::Type::kSteering:
      steer_ = c.angle;
      break;
  }
}

bool LiveSession::step() {
  while (!queue_.empty()) {
    apply(queue_.front());
    queue_.pop_front();
  }
  if (engine_.paused() || engine_.finished()) return false;
  HumanInput in;
  in.brake = brake_;
  in.throttle = throttle_ && !brake_;
  in.steer = steer_;
  engine_.tick(in);
  if (engine_.world().automation_on) steer_.reset();
  return true;
}

bool LiveSession::frame_due() const {
  const auto slot = static_cast<std::int64_t>(
      std::floor(engine_.world().time / kFramePeriod + 1e-9));
  return slot >= frames_;
}

json LiveSession::frame() {
  const auto& w = engine_.world();
  frames_ = static_cast<std::int64_t>(std::floor(w.time / kFramePeriod + 1e-9)) + 1;
  json obstacles = json::array();
  for (const auto& o : w.obstacles)
    obstacles.push_back({{"id", o.id},
                         {"kind", std::string(sim::to_string(o.kind))},
                         {"x", o.pos.x},
                         {"y", o.pos.y},
                         {"heading", o.heading},
                         {"speed", o.speed},
                         {"blocking", o.blocking}});
  json active = nullptr;
  if (w.active_event) {
    const auto& ev = engine_.route().events()[static_cast<std::size_t>(*w.active_event)];
    active = {{"id", ev.id}, {"kind", std::string(sim::to_string(ev.kind))}};
  }
  json survey = nullptr;
  if (const auto& p = engine_.pending_survey())
    survey = {{"event_id", p->event_id},
              {"question", std::string(p->question_name())},
              {"options", p->options()}};
  const auto& to = engine_.takeover();
  json resume_in = nullptr;
  if (!to.automation_on && !brake_ && !throttle_)
    resume_in = std::max(0.0, adapt::kResumeDelay - to.pedal_release_timer);
  return json{{"v", kWireVersion},
              {"type", "frame"},
              {"t", w.time},
              {"tick", w.tick},
              {"ego",
               {{"x", w.ego.pos.x},
                {"y", w.ego.pos.y},
                {"heading", w.ego.heading},
                {"speed", w.ego.speed},
                {"steer", w.ego.steer},
                {"s", w.ego.s}}},
              {"obstacles", obstacles},
              {"style", std::string(control::to_string(w.style))},
              {"automation_on", w.automation_on},
              {"resume_in", resume_in},
              {"active_event", active},
              {"pending_survey", survey},
              {"finished", engine_.finished()},
              {"pedals", {{"brake", brake_}, {"throttle", throttle_}}}};
}

json LiveSession::hello(bool read_only) const {
  const auto& spec = engine_.spec();
  json route = json::array();
  for (const auto& p : engine_.route().vertices()) route.push_back({p.x, p.y});
  json intersections = json::array();
  for (const auto& x : engine_.route().intersections()) {
    const auto p = engine_.route().point_at(x.s);
    intersections.push_back({{"x", p.x}, {"y", p.y}, {"s", x.s}});
  }
  return json{{"v", kWireVersion},
              {"type", "hello"},
              {"role", read_only ? "read_only" : "control"},
              {"mode", std::string(adapt::to_string(spec.mode))},
              {"participant", spec.participant},
              {"tick", spec.sim.tick},
              {"frame_period", kFramePeriod},
              {"route", route},
              {"intersections", intersections}};
}

}  // namespace driveadapt::service
