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

#include "features/assemble.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "common/error.hpp"
#include "common/summary.hpp"
#include "features/gaze.hpp"
#include "features/signals.hpp"

namespace driveadapt::features {

namespace {

constexpr std::array<std::string_view, kNumModalities> kModalityNames = {
    "gaze", "grip", "maneuver", "pedal", "pupil", "peripheral", "semantics", "drive"};

void add_summary(std::vector<std::string>& out, const std::string& base) {
  for (const char* s : {"_mean", "_std", "_min", "_max"}) out.push_back(base + s);
}

void push_summary(std::vector<double>& out, const Summary& s) {
  out.insert(out.end(), {s.mean, s.std, s.min, s.max});
}

std::array<std::vector<std::string>, kNumModalities> build_names() {
  std::array<std::vector<std::string>, kNumModalities> n;
  auto& gaze = n[static_cast<int>(Modality::kGaze)];
  add_summary(gaze, "gaze_x");
  add_summary(gaze, "gaze_y");
  add_summary(gaze, "fixation");
  add_summary(gaze, "dwell");
  gaze.push_back("saccade_count");
  add_summary(gaze, "saccade_velocity");
  add_summary(gaze, "gaze_velocity");
  gaze.push_back("region_entropy");

  add_summary(n[static_cast<int>(Modality::kGrip)], "grip");

  auto& man = n[static_cast<int>(Modality::kManeuver)];
  add_summary(man, "can_throttle");
  add_summary(man, "can_steering");
  add_summary(man, "can_brake");

  auto& ped = n[static_cast<int>(Modality::kPedal)];
  add_summary(ped, "throttle_distance");
  ped.push_back("throttle_approaches");
  add_summary(ped, "brake_distance");
  ped.push_back("brake_approaches");

  auto& pup = n[static_cast<int>(Modality::kPupil)];
  add_summary(pup, "pupil_left");
  add_summary(pup, "pupil_right");

  auto& per = n[static_cast<int>(Modality::kPeripheral)];
  add_summary(per, "hr");
  per.push_back("hrv");
  add_summary(per, "gsr");
  per.insert(per.end(), {"scr_count", "scr_mean_amplitude", "scr_max_amplitude"});

  auto& sem = n[static_cast<int>(Modality::kSemantics)];
  for (int c = 0; c < driver::kNumSemanticClasses; ++c)
    sem.push_back("object_share_" +
                  std::string(driver::to_string(static_cast<driver::SemanticClass>(c))));
  sem.push_back("object_entropy");

  n[static_cast<int>(Modality::kDrive)] = {"aggressiveness", "event_type", "takeover"};
  return n;
}

const std::array<std::vector<std::string>, kNumModalities>& names_by_modality() {
  static const auto names = build_names();
  return names;
}

// Tail of a series covering the window.
template <typename T>
std::span<const T> tail(const std::vector<T>& v, std::size_t count) {
  return std::span<const T>(v).last(std::min(count, v.size()));
}

std::size_t window_samples(const driver::RawStreams& s, double window) {
  const std::size_t n = s.size();
  if (!(window > 0.0)) return n;
  const auto w = static_cast<std::size_t>(std::llround(window / s.dt));
  return std::clamp<std::size_t>(w, 1, n);
}

std::vector<double> gaze_features(std::span<const double> x, std::span<const double> y,
                                  double dt) {
  std::vector<double> out;
  push_summary(out, summarize(x));
  push_summary(out, summarize(y));
  const auto seg = detect_fixations(x, y, dt);
  std::vector<double> fix;
  for (const auto& f : seg.fixations) fix.push_back(f.dwell);
  push_summary(out, summarize(fix));
  push_summary(out, summarize(aoi_visit_durations(seg, dt)));
  out.push_back(static_cast<double>(seg.saccades.size()));
  std::vector<double> sv;
  for (const auto& s : seg.saccades) sv.push_back(s.mean_velocity);
  push_summary(out, summarize(sv));
  push_summary(out, summarize(seg.velocity));
  out.push_back(region_shares(seg, x, y).entropy);
  return out;
}

std::vector<double> semantic_features(std::span<const double> x, std::span<const double> y,
                                      std::span<const int> labels, double dt) {
  const auto seg = detect_fixations(x, y, dt);
  std::array<double, driver::kNumSemanticClasses> share{};
  std::size_t total = 0;
  for (const auto& f : seg.fixations)
    for (std::size_t k = f.begin; k < f.end; ++k) {
      share[static_cast<std::size_t>(labels[k])] += 1.0;
      ++total;
    }
  std::vector<double> out;
  if (total == 0) {
    out.assign(driver::kNumSemanticClasses + 1, 0.0);
    return out;
  }
  for (auto& s : share) s /= static_cast<double>(total);
  out.assign(share.begin(), share.end());
  out.push_back(shannon_entropy(share));
  return out;
}

std::vector<double> peripheral_features(const driver::RawStreams& s, std::size_t w) {
  const std::size_t n = s.size();
  const double window_start = s.t0 + s.dt * static_cast<double>(n - w) - 1e-9;
  std::size_t first = s.beat_times.size();
  while (first > 0 && s.beat_times[first - 1] >= window_start) --first;
  // Extend to at least two beats so variability is defined.
  const std::size_t have = s.beat_times.size() - first;
  if (have < 2) first -= std::min(first, 2 - have);
  const auto cardiac = cardiac_features(std::span<const double>(s.ibi).subspan(first));
  const auto scr = scr_features(tail(s.gsr, w), s.dt);
  std::vector<double> out;
  push_summary(out, cardiac.hr);
  out.push_back(cardiac.hrv);
  push_summary(out, scr.gsr);
  out.insert(out.end(), {static_cast<double>(scr.count), scr.mean_amplitude,
                         scr.max_amplitude});
  return out;
}

}  // namespace

std::string_view to_string(Modality m) { return kModalityNames[static_cast<int>(m)]; }

std::optional<Modality> parse_modality(std::string_view name) {
  for (int i = 0; i < kNumModalities; ++i)
    if (kModalityNames[i] == name) return static_cast<Modality>(i);
  return std::nullopt;
}

const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> v;
    for (const auto& group : names_by_modality()) v.insert(v.end(), group.begin(), group.end());
    return v;
  }();
  return all;
}

const std::vector<std::string>& modality_feature_names(Modality m) {
  return names_by_modality()[static_cast<int>(m)];
}

std::size_t modality_offset(Modality m) {
  std::size_t off = 0;
  for (int i = 0; i < static_cast<int>(m); ++i) off += names_by_modality()[i].size();
  return off;
}

Modality modality_of(std::size_t index) {
  for (int i = 0; i < kNumModalities; ++i) {
    const auto sz = names_by_modality()[i].size();
    if (index < sz) return static_cast<Modality>(i);
    index -= sz;
  }
  throw invalid_argument("feature index out of range");
}

WindowSpec WindowSpec::parse(std::string_view text) {
  WindowSpec w;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw invalid_argument("window entry '" + item + "' lacks '='");
    const auto m = parse_modality(item.substr(0, eq));
    if (!m) throw invalid_argument("unknown modality '" + item.substr(0, eq) + "'");
    const std::string value = item.substr(eq + 1);
    if (value == "full") {
      w[*m] = 0.0;
      continue;
    }
    std::size_t used = 0;
    double secs = 0.0;
    try {
      secs = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || !(secs >= 0.0) || !std::isfinite(secs))
      throw invalid_argument("bad window length '" + value + "'");
    w[*m] = secs;
  }
  return w;
}

std::string WindowSpec::to_string() const {
  std::string out;
  for (int i = 0; i < kNumModalities; ++i) {
    if (i) out += ',';
    out += std::string(kModalityNames[i]) + '=';
    if (seconds[i] > 0.0) {
      std::ostringstream v;
      v << seconds[i];
      out += v.str();
    } else {
      out += "full";
    }
  }
  return out;
}

void check_channels(const driver::RawStreams& s) {
  const std::size_t n = s.size();
  if (n == 0) throw invalid_argument("missing channel 'gaze_x'");
  auto need = [&](std::size_t size, const char* name) {
    if (size == 0) throw invalid_argument(std::string("missing channel '") + name + "'");
    if (size != n)
      throw invalid_argument(std::string("channel '") + name + "' has " +
                             std::to_string(size) + " samples, expected " +
                             std::to_string(n));
  };
  need(s.gaze_y.size(), "gaze_y");
  need(s.gaze_object.size(), "gaze_object");
  need(s.pupil_left.size(), "pupil_left");
  need(s.pupil_right.size(), "pupil_right");
  need(s.gsr.size(), "gsr");
  need(s.grip.size(), "grip");
  need(s.throttle_distance.size(), "throttle_distance");
  need(s.brake_distance.size(), "brake_distance");
  need(s.can_throttle.size(), "can_throttle");
  need(s.can_brake.size(), "can_brake");
  need(s.can_steering.size(), "can_steering");
  need(s.human_throttle.size(), "human_throttle");
  need(s.human_brake.size(), "human_brake");
  if (s.ibi.empty()) throw invalid_argument("missing channel 'ibi'");
  if (s.beat_times.size() != s.ibi.size())
    throw invalid_argument("channel 'ibi' and its beat times differ in length");
  if (!(s.dt > 0.0)) throw invalid_argument("non-positive sample interval");
}

ParticipantNorms fit_participant_norms(std::span<const driver::RawStreams* const> events) {
  std::vector<std::span<const double>> pl, pr, g, gr;
  for (const auto* e : events) {
    pl.emplace_back(e->pupil_left);
    pr.emplace_back(e->pupil_right);
    g.emplace_back(e->gsr);
    gr.emplace_back(e->grip);
  }
  return {fit_zstats(pl), fit_zstats(pr), fit_zstats(g), fit_zstats(gr)};
}

driver::RawStreams prepare_streams(const driver::RawStreams& raw,
                                   const ParticipantNorms& norms) {
  check_channels(raw);
  driver::RawStreams s = raw;
  s.gaze_x = interpolate_gaps(raw.gaze_x, GapFill::kNearest);
  s.gaze_y = interpolate_gaps(raw.gaze_y, GapFill::kNearest);
  s.gaze_object = interpolate_labels(raw.gaze_object);
  s.pupil_left =
      apply_zstats(interpolate_gaps(raw.pupil_left, GapFill::kNearest), norms.pupil_left);
  s.pupil_right =
      apply_zstats(interpolate_gaps(raw.pupil_right, GapFill::kNearest), norms.pupil_right);
  s.gsr = apply_zstats(interpolate_gaps(raw.gsr, GapFill::kLinear), norms.gsr);
  s.grip = apply_zstats(interpolate_gaps(raw.grip, GapFill::kLinear), norms.grip);
  s.throttle_distance = interpolate_gaps(raw.throttle_distance, GapFill::kLinear);
  s.brake_distance = interpolate_gaps(raw.brake_distance, GapFill::kLinear);
  s.can_throttle = interpolate_gaps(raw.can_throttle, GapFill::kLinear);
  s.can_brake = interpolate_gaps(raw.can_brake, GapFill::kLinear);
  s.can_steering = interpolate_gaps(raw.can_steering, GapFill::kLinear);
  return s;
}

std::vector<double> extract_modality(Modality m, const driver::RawStreams& s,
                                     double window, const DriveInfo& drive) {
  const std::size_t w = window_samples(s, window);
  std::vector<double> out;
  switch (m) {
    case Modality::kGaze:
      return gaze_features(tail(s.gaze_x, w), tail(s.gaze_y, w), s.dt);
    case Modality::kGrip:
      push_summary(out, summarize(tail(s.grip, w)));
      return out;
    case Modality::kManeuver:
      push_summary(out, summarize(tail(s.can_throttle, w)));
      push_summary(out, summarize(tail(s.can_steering, w)));
      push_summary(out, summarize(tail(s.can_brake, w)));
      return out;
    case Modality::kPedal: {
      const auto t = pedal_features(tail(s.throttle_distance, w));
      const auto b = pedal_features(tail(s.brake_distance, w));
      push_summary(out, t.distance);
      out.push_back(t.approaches);
      push_summary(out, b.distance);
      out.push_back(b.approaches);
      return out;
    }
    case Modality::kPupil:
      push_summary(out, summarize(tail(s.pupil_left, w)));
      push_summary(out, summarize(tail(s.pupil_right, w)));
      return out;
    case Modality::kPeripheral:
      return peripheral_features(s, w);
    case Modality::kSemantics:
      return semantic_features(tail(s.gaze_x, w), tail(s.gaze_y, w),
                               tail(s.gaze_object, w), s.dt);
    case Modality::kDrive: {
      bool takeover = false;
      for (auto v : tail(s.human_throttle, w)) takeover = takeover || v;
      for (auto v : tail(s.human_brake, w)) takeover = takeover || v;
      return {static_cast<double>(control::level(drive.style)),
              sim::is_pedestrian_event(drive.kind) ? 0.0 : 1.0, takeover ? 1.0 : 0.0};
    }
  }
  return out;
}

std::vector<double> assemble(const driver::RawStreams& prepared, const WindowSpec& windows,
                             const DriveInfo& drive) {
  check_channels(prepared);
  std::vector<double> out;
  out.reserve(feature_names().size());
  for (auto m : kAllModalities) {
    const auto part = extract_modality(m, prepared, windows[m], drive);
    out.insert(out.end(), part.begin(), part.end());
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!std::isfinite(out[i]))
      throw domain_error("feature '" + feature_names()[i] + "' is not finite");
  return out;
}

}  // namespace driveadapt::features
