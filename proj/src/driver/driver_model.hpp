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
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "adapt/adaptation.hpp"
#include "common/config.hpp"
#include "common/rng.hpp"
#include "control/style.hpp"
#include "sim/session_log.hpp"

namespace driveadapt::driver {

using adapt::PreferenceResponse;
using control::DrivingStyle;

inline constexpr int kNumSemanticClasses = 14;

enum class SemanticClass : int {
  kRoad = 0,
  kSidewalk,
  kBuilding,
  kTree,
  kSky,
  kCar,
  kPedestrian,
  kTrafficLight,
  kRoadSign,
  kCrosswalk,
  kCarInterior,
  kPole,
  kFence,
  kOther,
};

std::string_view to_string(SemanticClass c);

// Per-participant channel baselines.
struct SignalBaselines {
  double pupil_mm = 3.5;       // mean diameter
  double pupil_sd = 0.20;      // within-event variability, mm
  double gsr_level = 5.0;      // tonic level, uS
  double scr_rate = 1.0 / 12;  // responses per second
  double ibi_base = 0.8;       // s
  double grip_level = 0.45;    // normalized force
  double grip_sd = 0.05;
  double brake_rest_cm = 6.0;
  double throttle_rest_cm = 3.0;
};

struct DriverProfile {
  int id = 0;
  DrivingStyle comfort_style = DrivingStyle::kLA;  // latent preferred style
  double response_noise = 0.1;                      // [0, 0.3]
  SignalBaselines signal;
  std::uint64_t seed = 0;

  void validate() const;
};

// Shift of each preference-dependent effect, in pooled standard deviations
// of the feature it targets.
struct EffectSizes {
  double sky_share = 0.5;       // up when preferring more aggressive
  double gaze_y = 0.5;          // down (more car-interior looks), aggressive
  double pupil_std = 0.5;       // up, aggressive
  double brake_max = 0.5;       // down, aggressive
  double brake_std = 0.5;       // down, aggressive
  double grip_std = 0.5;        // down, aggressive
  double road_share = 0.5;      // up when preferring more defensive
  double car_share = 0.5;       // up, defensive
  double object_entropy = 0.5;  // up, defensive
  double scr_count = 0.5;       // up, defensive

  EffectSizes scaled(double k) const;
};

struct GeneratorConfig {
  EffectSizes effects;
  double missing_gaze_fraction = 0.0683;
  double missing_pedal_fraction = 0.005;
  // > 0: gaze and semantic effects only act on fixations that start this
  // many seconds or less before the event's end.
  double gaze_signal_window = 0.0;
  double takeover_floor = 0.05;
  double takeover_max = 0.6;

  static GeneratorConfig from_config(const KeyValueConfig& kv);
};

struct CohortConfig {
  // Comfort-style mix over HD, LD, LA, HA.
  std::array<double, 4> comfort_mix = {0.15, 0.35, 0.35, 0.15};
  double min_noise = 0.05;
  double max_noise = 0.25;

  static CohortConfig from_config(const KeyValueConfig& kv);
};

DriverProfile make_profile(int id, std::uint64_t cohort_seed,
                           const CohortConfig& cfg = {});
std::vector<DriverProfile> make_cohort(int n, std::uint64_t seed,
                                       const CohortConfig& cfg = {});

// sign(comfort - current) as a preference answer, replaced with a uniformly
// drawn other answer with probability response_noise.
PreferenceResponse latent_preference(const DriverProfile& profile,
                                     DrivingStyle current, Rng& rng);

// Trust-change answer accompanying a preference state.
int trust_response(PreferenceResponse state, Rng& rng);

enum class Pedal { kBrake, kThrottle };

struct PedalInterval {
  Pedal pedal = Pedal::kBrake;
  double start = 0.0;  // s, simulation time
  double end = 0.0;
};

double brake_takeover_probability(DrivingStyle comfort, DrivingStyle current,
                                  const GeneratorConfig& cfg);
double throttle_takeover_probability(DrivingStyle comfort, DrivingStyle current,
                                     const GeneratorConfig& cfg);

// Pedal presses planned at event activation. At most one press per event.
std::vector<PedalInterval> emit_takeover(const DriverProfile& profile,
                                         double event_start,
                                         double expected_duration,
                                         DrivingStyle current,
                                         const GeneratorConfig& cfg, Rng& rng);

// Time-aligned multimodal channels for one event window. Continuous channels
// share the tick time base t0 + i*dt; NaN marks a missing sample and -1 a
// missing gaze label.
struct RawStreams {
  double t0 = 0.0;
  double dt = 0.02;
  std::vector<double> gaze_x, gaze_y;  // screen-normalized, y up
  std::vector<int> gaze_object;        // SemanticClass or -1
  std::vector<double> pupil_left, pupil_right;  // mm
  std::vector<double> gsr;                      // uS
  std::vector<double> grip;                     // normalized force
  std::vector<double> throttle_distance, brake_distance;  // cm
  std::vector<double> can_throttle, can_brake, can_steering;
  std::vector<std::uint8_t> human_throttle, human_brake;
  std::vector<double> beat_times, ibi;  // event series, s

  std::size_t size() const { return gaze_x.size(); }
  double t_end() const { return t0 + dt * static_cast<double>(size() - 1); }
};

// Channel generators conditioned on the preference state of the event.
// `trace` is the ego trace over the event window (one record per tick).
RawStreams emit_streams(const DriverProfile& profile,
                        std::span<const sim::TickRecord> trace,
                        PreferenceResponse state, sim::EventKind kind,
                        std::uint64_t seed, const GeneratorConfig& cfg);

}  // namespace driveadapt::driver
