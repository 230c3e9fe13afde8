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

#include "service/cohort.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "common/error.hpp"
#include "driver/streams_io.hpp"

namespace driveadapt::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSessionRngTag = 0x5e55;

std::string session_dir_name(int participant, int index, adapt::SessionMode mode) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "p%02d_s%d_", participant, index);
  return buf + std::string(adapt::to_string(mode));
}

bool pressed(const std::vector<driver::PedalInterval>& plan, driver::Pedal pedal, double t) {
  return std::any_of(plan.begin(), plan.end(), [&](const auto& p) {
    return p.pedal == pedal && t >= p.start && t < p.end;
  });
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw io_error("cannot write " + p.string());
  return out;
}

json read_json(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw io_error("cannot read " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw invalid_argument(p.string() + ": " + e.what());
  }
}

features::FeatureRow meta_from_json(const json& session, const json& ev) {
  features::FeatureRow r;
  const auto mode = adapt::parse_session_mode(session.at("mode").get<std::string>());
  if (!mode) throw invalid_argument("unknown session mode " + session.at("mode").dump());
  const auto kind = sim::parse_event_kind(ev.at("kind").get<std::string>());
  if (!kind) throw invalid_argument("unknown event kind " + ev.at("kind").dump());
  const auto pref = adapt::parse_preference(ev.at("preference_state").get<std::string>());
  if (!pref) throw invalid_argument("bad preference state " + ev.at("preference_state").dump());
  r.participant = session.at("participant");
  r.session = session.at("session");
  r.event = ev.at("id");
  r.mode = *mode;
  r.event_kind = *kind;
  r.preference = *pref;
  if (!ev.at("trust").is_null()) r.trust = ev.at("trust").get<int>();
  if (!ev.at("trust_level").is_null()) r.trust_level = ev.at("trust_level").get<int>();
  r.takeover_brake = ev.at("takeover_brake");
  r.takeover_throttle = ev.at("takeover_throttle");
  return r;
}

features::DriveInfo drive_from_json(const json& ev) {
  features::DriveInfo d;
  const auto style = control::parse_style(ev.at("style").get<std::string>());
  if (!style) throw invalid_argument("unknown style " + ev.at("style").dump());
  d.style = *style;
  d.kind = *sim::parse_event_kind(ev.at("kind").get<std::string>());
  return d;
}

// Session directories grouped by participant id, in name order.
std::map<int, std::vector<fs::path>> session_dirs(const fs::path& dir) {
  fs::path root = dir;
  if (fs::is_directory(dir / "sessions")) root = dir / "sessions";
  if (!fs::is_directory(root)) throw io_error("no such directory " + root.string());
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory() && fs::exists(e.path() / "session.json")) dirs.push_back(e.path());
  if (dirs.empty())
    throw invalid_argument(
        "no sessions in " + root.string() +
        ": expected sessions/<name>/session.json with events/e<k>/ stream directories "
        "as written by `driveadapt simulate`");
  std::sort(dirs.begin(), dirs.end());
  std::map<int, std::vector<fs::path>> by_participant;
  for (const auto& d : dirs)
    by_participant[read_json(d / "session.json").at("participant").get<int>()].push_back(d);
  return by_participant;
}

std::vector<EventSample> load_participant(const std::vector<fs::path>& dirs) {
  std::vector<EventSample> out;
  for (const auto& d : dirs) {
    const json session = read_json(d / "session.json");
    for (const auto& ev : session.at("events")) {
      if (!ev.at("completed").get<bool>()) continue;
      EventSample s;
      s.meta = meta_from_json(session, ev);
      s.drive = drive_from_json(ev);
      s.streams = driver::read_streams(d / "events" / ("e" + std::to_string(s.meta.event)));
      out.push_back(std::move(s));
    }
  }
  std::sort(out.begin(), out.end(), [](const EventSample& a, const EventSample& b) {
    return std::tie(a.meta.session, a.meta.event) < std::tie(b.meta.session, b.meta.event);
  });
  return out;
}

features::ParticipantNorms norms_of(std::span<const EventSample> events) {
  std::vector<const driver::RawStreams*> ptrs;
  for (const auto& e : events) ptrs.push_back(&e.streams);
  return features::fit_participant_norms(ptrs);
}

// Appends the windowed blocks and label rows of one participant.
void append_windowed(std::span<const EventSample> events, ml::WindowedFeatures& out,
                     features::FeatureTable& labels) {
  const auto norms = norms_of(events);
  for (const auto& e : events) {
    const auto prepared = features::prepare_streams(e.streams, norms);
    for (auto m : features::kAllModalities) {
      const auto mi = static_cast<std::size_t>(m);
      for (std::size_t w = 0; w < out.windows.size(); ++w) {
        const auto v = features::extract_modality(m, prepared, out.windows[w], e.drive);
        out.blocks[mi][w].insert(out.blocks[mi][w].end(), v.begin(), v.end());
      }
    }
    labels.rows.push_back(e.meta);
  }
}

ml::WindowedFeatures empty_windowed(std::span<const double> windows) {
  if (windows.empty()) throw invalid_argument("no candidate windows");
  ml::WindowedFeatures w;
  w.windows.assign(windows.begin(), windows.end());
  for (auto& b : w.blocks) b.resize(windows.size());
  return w;
}

}  // namespace

CohortOptions CohortOptions::from_config(const KeyValueConfig& kv) {
  CohortOptions o;
  o.participants = kv.get_int("cohort.participants", o.participants);
  if (o.participants < 1) throw invalid_argument("cohort.participants must be >= 1");
  o.write_ticks = kv.get_bool("cohort.write_ticks", o.write_ticks);
  o.sim = sim::SessionConfig::from_config(kv);
  o.generator = driver::GeneratorConfig::from_config(kv);
  o.cohort = driver::CohortConfig::from_config(kv);
  return o;
}

std::uint64_t route_seed(std::uint64_t cohort_seed, int participant, int session_index) {
  return derive_seed({cohort_seed, static_cast<std::uint64_t>(participant),
                      static_cast<std::uint64_t>(session_index)});
}

SyntheticSession run_synthetic_session(const driver::DriverProfile& profile,
                                       const SessionSpec& spec,
                                       const driver::GeneratorConfig& gen,
                                       std::uint64_t seed) {
  SessionEngine engine(spec);
  Rng rng(seed);
  std::vector<std::optional<adapt::PreferenceResponse>> state(engine.events().size());
  std::vector<driver::PedalInterval> plan;
  std::optional<int> active;

  auto answer_pending = [&] {
    const auto& p = *engine.pending_survey();
    const auto pref = state.at(static_cast<std::size_t>(p.event_id)).value();
    if (p.question == adapt::SurveyPrompt::Question::kTrust)
      engine.answer_trust(driver::trust_response(pref, rng));
    else
      engine.answer_preference(pref);
  };

  while (!engine.finished()) {
    if (engine.paused()) {
      answer_pending();
      continue;
    }
    const double t = engine.world().time;
    HumanInput in;
    in.brake = pressed(plan, driver::Pedal::kBrake, t);
    in.throttle = !in.brake && pressed(plan, driver::Pedal::kThrottle, t);
    engine.tick(in);
    const auto now = engine.world().active_event;
    if (now && now != active) {
      const auto id = static_cast<std::size_t>(*now);
      const auto style = engine.world().style;
      state[id] = driver::latent_preference(profile, style, rng);
      const auto& cfg = spec.sim;
      const double expected = (cfg.trigger_distance + cfg.event_end_distance) /
                              control::style_params(style).set_speed;
      const auto presses = driver::emit_takeover(profile, engine.world().time, expected, style,
                                                 gen, rng);
      plan.insert(plan.end(), presses.begin(), presses.end());
    }
    active = now;
  }
  if (engine.paused()) answer_pending();

  SyntheticSession out;
  out.spec = spec;
  out.record = engine.record();
  for (auto& ev : out.record["events"]) {
    const auto id = static_cast<std::size_t>(ev.at("id").get<int>());
    ev["preference_state"] =
        state[id] ? json(std::string(adapt::to_string(*state[id]))) : json(nullptr);
  }
  for (const auto& a : engine.events()) {
    if (!a.completed) continue;
    EventSample s;
    auto& m = s.meta;
    m.participant = spec.participant;
    m.session = spec.session_index;
    m.event = a.id;
    m.mode = spec.mode;
    m.event_kind = a.kind;
    m.preference = *state[static_cast<std::size_t>(a.id)];
    m.trust = a.trust;
    m.trust_level = a.trust_level;
    m.takeover_brake = a.takeover_brake;
    m.takeover_throttle = a.takeover_throttle;
    s.drive = {a.style, a.kind};
    const auto trace = engine.event_trace(a.id);
    s.streams = driver::emit_streams(profile, trace, m.preference, a.kind,
                                     derive_seed({seed, static_cast<std::uint64_t>(a.id)}), gen);
    out.events.push_back(std::move(s));
  }
  out.log = engine.log();
  return out;
}

std::vector<SyntheticSession> simulate_participant(const driver::DriverProfile& profile,
                                                   const CohortOptions& opts) {
  std::vector<SyntheticSession> out;
  const auto order = adapt::session_order(profile.id);
  for (int k = 0; k < adapt::kNumSessionModes; ++k) {
    SessionSpec spec;
    spec.participant = profile.id;
    spec.session_index = k;
    spec.mode = order[static_cast<std::size_t>(k)];
    spec.route_seed = route_seed(opts.seed, profile.id, k);
    spec.sim = opts.sim;
    const auto seed = derive_seed({opts.seed, static_cast<std::uint64_t>(profile.id),
                                   static_cast<std::uint64_t>(k), kSessionRngTag});
    out.push_back(run_synthetic_session(profile, spec, opts.generator, seed));
  }
  return out;
}

CohortSummary simulate_cohort(const CohortOptions& opts, const fs::path& out) {
  CohortSummary summary;
  const auto root = out / "sessions";
  fs::create_directories(root);
  for (const auto& profile : driver::make_cohort(opts.participants, opts.seed, opts.cohort)) {
    for (const auto& s : simulate_participant(profile, opts)) {
      const auto dir = root / session_dir_name(profile.id, s.spec.session_index, s.spec.mode);
      fs::create_directories(dir);
      open_out(dir / "session.json") << s.record.dump(2) << '\n';
      if (opts.write_ticks) {
        auto ticks = open_out(dir / "ticks.jsonl");
        s.log.write_jsonl(ticks);
      }
      for (const auto& e : s.events)
        driver::write_streams(dir / "events" / ("e" + std::to_string(e.meta.event)), e.streams);
      ++summary.sessions;
      summary.events += static_cast<int>(s.events.size());
    }
    ++summary.participants;
  }
  return summary;
}

std::vector<features::FeatureRow> featurize_participant(std::span<const EventSample> events,
                                                        const features::WindowSpec& windows) {
  std::vector<features::FeatureRow> rows;
  if (events.empty()) return rows;
  const auto norms = norms_of(events);
  for (const auto& e : events) {
    auto r = e.meta;
    r.values = features::assemble(features::prepare_streams(e.streams, norms), windows, e.drive);
    rows.push_back(std::move(r));
  }
  return rows;
}

features::FeatureTable extract_directory(const fs::path& dir, const features::WindowSpec& windows) {
  features::FeatureTable t;
  t.names = features::feature_names();
  for (const auto& [id, dirs] : session_dirs(dir)) {
    const auto events = load_participant(dirs);
    auto rows = featurize_participant(events, windows);
    std::move(rows.begin(), rows.end(), std::back_inserter(t.rows));
  }
  return t;
}

ml::WindowedFeatures extract_windowed_directory(const fs::path& dir,
                                                std::span<const double> windows) {
  auto out = empty_windowed(windows);
  features::FeatureTable labels;
  for (const auto& [id, dirs] : session_dirs(dir))
    append_windowed(load_participant(dirs), out, labels);
  out.labels = ml::Dataset::from_table(labels);
  return out;
}

namespace {

std::vector<EventSample> participant_samples(const driver::DriverProfile& profile,
                                             const CohortOptions& opts) {
  std::vector<EventSample> events;
  for (auto& s : simulate_participant(profile, opts))
    std::move(s.events.begin(), s.events.end(), std::back_inserter(events));
  return events;
}

}  // namespace

features::FeatureTable simulate_features(const CohortOptions& opts,
                                         const features::WindowSpec& windows) {
  features::FeatureTable t;
  t.names = features::feature_names();
  for (const auto& profile : driver::make_cohort(opts.participants, opts.seed, opts.cohort)) {
    auto rows = featurize_participant(participant_samples(profile, opts), windows);
    std::move(rows.begin(), rows.end(), std::back_inserter(t.rows));
  }
  return t;
}

ml::WindowedFeatures simulate_windowed(const CohortOptions& opts, std::span<const double> windows) {
  auto out = empty_windowed(windows);
  features::FeatureTable labels;
  for (const auto& profile : driver::make_cohort(opts.participants, opts.seed, opts.cohort))
    append_windowed(participant_samples(profile, opts), out, labels);
  out.labels = ml::Dataset::from_table(labels);
  return out;
}

}  // namespace driveadapt::service
