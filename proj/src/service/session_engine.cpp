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

#include "service/session_engine.hpp"

#include "common/error.hpp"

namespace driveadapt::service {

using nlohmann::json;

SessionEngine::SessionEngine(const SessionSpec& spec)
    : spec_(spec),
      route_(sim::generate_route(spec.route_seed, spec.sim)),
      adaptation_(adapt::initial_adaptation(spec.mode)) {
  spec_.sim.validate();
  world_ = sim::initial_world(route_, adaptation_.style);
  for (const auto& ev : route_.events()) {
    EventAnnotation a;
    a.id = ev.id;
    a.kind = ev.kind;
    a.intersection_index = ev.intersection_index;
    events_.push_back(a);
  }
  first_tick_of_event_.assign(events_.size(), 0);
  last_tick_of_event_.assign(events_.size(), 0);
}

bool SessionEngine::finished() const {
  return world_.finished(route_) || world_.time >= spec_.sim.max_session_time - 1e-9;
}

void SessionEngine::tick(const HumanInput& in) {
  if (paused()) throw state_error("session is paused for a survey answer");
  if (finished()) throw state_error("session has finished");
  const double dt = spec_.sim.tick;

  takeover_ = adapt::takeover_update(takeover_, in.brake, in.throttle, dt);
  world_.automation_on = takeover_.automation_on;

  sim::ControlInput u;
  if (world_.automation_on) {
    u = control::automated_control(world_, route_, spec_.sim, controller_);
  } else {
    controller_.stop.holding = false;
    controller_.stop.held = 0.0;
    u.accel = in.throttle ? kHumanThrottleAccel
                          : (in.brake ? -kHumanBrakeDecel : -kCoastDecel);
    u.steer = in.steer ? *in.steer : control::lateral_control(world_, route_);
  }

  const sim::WorldState before = world_;
  world_ = sim::step(world_, route_, u, dt);
  world_.automation_on = takeover_.automation_on;

  if (!before.active_event && world_.active_event) {
    const int id = *world_.active_event;
    auto& a = events_[static_cast<std::size_t>(id)];
    a.t_start = *world_.events[id].t_start;
    a.style = world_.style;
    takeover_.takeover_brake = false;
    takeover_.takeover_throttle = false;
    log_.append(sim::EventMark{sim::EventMark::Phase::kStart, id, a.kind, a.t_start});
    first_tick_of_event_[static_cast<std::size_t>(id)] = log_.records().size();
  }
  log_.append(sim::make_tick_record(world_, u, in.throttle, in.brake));
  if (world_.active_event) {
    auto& a = events_[static_cast<std::size_t>(*world_.active_event)];
    a.takeover_brake = a.takeover_brake || takeover_.takeover_brake;
    a.takeover_throttle = a.takeover_throttle || takeover_.takeover_throttle;
    last_tick_of_event_[static_cast<std::size_t>(*world_.active_event)] = log_.records().size();
  }
  if (before.active_event && !world_.active_event) {
    const int id = *before.active_event;
    auto& a = events_[static_cast<std::size_t>(id)];
    a.t_end = *world_.events[id].t_end;
    a.completed = true;
    a.style_after = world_.style;
    log_.append(sim::EventMark{sim::EventMark::Phase::kEnd, id, a.kind, a.t_end});
    pending_ = adapt::schedule_survey(before, world_, adaptation_.mode);
    if (pending_) {
      a.question = std::string(pending_->question_name());
      sim::SurveyMark m;
      m.event_id = id;
      m.t = world_.time;
      m.question = a.question;
      m.style_before = world_.style;
      log_.append(m);
    }
  }
}

void SessionEngine::answer_trust(int response) {
  if (!pending_) throw state_error("no survey is pending");
  if (pending_->question != adapt::SurveyPrompt::Question::kTrust)
    throw state_error("the pending survey asks for a preference, not a trust change");
  adaptation_ = adapt::apply_trust_response(adaptation_, response);
  trust_sum_ += response;
  auto& a = events_[static_cast<std::size_t>(pending_->event_id)];
  a.trust = response;
  a.trust_level = trust_sum_;
  finish_answer(adapt::trust_to_wire(response));
}

void SessionEngine::answer_preference(adapt::PreferenceResponse response) {
  if (!pending_) throw state_error("no survey is pending");
  if (pending_->question != adapt::SurveyPrompt::Question::kPreference)
    throw state_error("the pending survey asks for a trust change, not a preference");
  adaptation_ = adapt::apply_preference_response(adaptation_, response);
  finish_answer(std::string(adapt::to_string(response)));
}

void SessionEngine::answer(const std::string& wire) {
  if (!pending_) throw state_error("no survey is pending");
  if (pending_->question == adapt::SurveyPrompt::Question::kTrust) {
    const auto r = adapt::parse_trust(wire);
    if (!r) throw invalid_argument("trust answer must be one of +2, +1, 0, -1, -2");
    answer_trust(*r);
  } else {
    const auto r = adapt::parse_preference(wire);
    if (!r)
      throw invalid_argument("preference answer must be more_aggressive, same or more_defensive");
    answer_preference(*r);
  }
}

void SessionEngine::finish_answer(const std::string& wire) {
  auto& a = events_[static_cast<std::size_t>(pending_->event_id)];
  sim::SurveyMark m;
  m.is_response = true;
  m.event_id = pending_->event_id;
  m.t = world_.time;
  m.question = a.question;
  m.response = wire;
  m.style_before = world_.style;
  m.style_after = adaptation_.style;
  log_.append(m);
  world_.style = adaptation_.style;
  a.response = wire;
  a.style_after = adaptation_.style;
  pending_.reset();
}

std::vector<sim::TickRecord> SessionEngine::event_trace(int event_id) const {
  if (event_id < 0 || event_id >= static_cast<int>(events_.size()))
    throw invalid_argument("no event " + std::to_string(event_id));
  const auto& a = events_[static_cast<std::size_t>(event_id)];
  if (a.t_start == 0.0 && !world_.events[event_id].t_start) throw state_error("event not reached");
  if (!a.completed) throw state_error("event not completed");
  std::vector<sim::TickRecord> out;
  const auto& recs = log_.records();
  for (std::size_t i = first_tick_of_event_[event_id]; i < last_tick_of_event_[event_id]; ++i)
    if (const auto* t = std::get_if<sim::TickRecord>(&recs[i]); t && t->event == event_id)
      out.push_back(*t);
  return out;
}

json to_json(const EventAnnotation& a) {
  json j{{"id", a.id},
         {"kind", std::string(sim::to_string(a.kind))},
         {"intersection", a.intersection_index},
         {"t_start", a.t_start},
         {"t_end", a.t_end},
         {"completed", a.completed},
         {"style", std::string(control::to_string(a.style))},
         {"style_after", std::string(control::to_string(a.style_after))},
         {"takeover_brake", a.takeover_brake},
         {"takeover_throttle", a.takeover_throttle},
         {"question", a.question},
         {"response", a.response}};
  j["trust"] = a.trust ? json(*a.trust) : json(nullptr);
  j["trust_level"] = a.trust_level ? json(*a.trust_level) : json(nullptr);
  return j;
}

json SessionEngine::record() const {
  json events = json::array();
  for (const auto& a : events_) events.push_back(to_json(a));
  const auto& c = spec_.sim;
  return json{{"v", 1},
              {"participant", spec_.participant},
              {"session", spec_.session_index},
              {"mode", std::string(adapt::to_string(spec_.mode))},
              {"route_seed", spec_.route_seed},
              {"initial_style", std::string(control::to_string(adapt::initial_style(spec_.mode)))},
              {"final_style", std::string(control::to_string(adaptation_.style))},
              {"duration", world_.time},
              {"ticks", world_.tick},
              {"sim",
               {{"intersections", c.intersections},
                {"intersection_spacing", c.intersection_spacing},
                {"trigger_distance", c.trigger_distance},
                {"event_end_distance", c.event_end_distance},
                {"turn_radius", c.turn_radius},
                {"tick", c.tick},
                {"max_session_time", c.max_session_time},
                {"sensing_range", c.sensing_range},
                {"lane_half_width", c.lane_half_width}}},
              {"events", events}};
}

SessionEngine replay_session(const SessionSpec& spec, const sim::SessionLog& log) {
  SessionEngine engine(spec);
  for (const auto& rec : log.records()) {
    if (const auto* t = std::get_if<sim::TickRecord>(&rec)) {
      if (engine.paused()) throw invalid_argument("log ticks while a survey is pending");
      HumanInput in;
      in.brake = t->human_brake;
      in.throttle = t->human_throttle;
      if (!t->automation) in.steer = t->cmd_steer;
      engine.tick(in);
    } else if (const auto* s = std::get_if<sim::SurveyMark>(&rec); s && s->is_response) {
      if (!engine.paused()) throw invalid_argument("log answers a survey that was never asked");
      engine.answer(s->response);
    }
  }
  return engine;
}

}  // namespace driveadapt::service
