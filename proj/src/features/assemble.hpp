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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "control/style.hpp"
#include "driver/driver_model.hpp"
#include "features/preprocess.hpp"
#include "sim/route.hpp"

namespace driveadapt::features {

enum class Modality : int {
  kGaze = 0,
  kGrip,
  kManeuver,
  kPedal,
  kPupil,
  kPeripheral,
  kSemantics,
  kDrive,
};
inline constexpr int kNumModalities = 8;
inline constexpr std::array<Modality, kNumModalities> kAllModalities = {
    Modality::kGaze,  Modality::kGrip,       Modality::kManeuver,  Modality::kPedal,
    Modality::kPupil, Modality::kPeripheral, Modality::kSemantics, Modality::kDrive};

std::string_view to_string(Modality m);
std::optional<Modality> parse_modality(std::string_view name);

// Canonical feature order: modalities in enum order, names within each.
const std::vector<std::string>& feature_names();
const std::vector<std::string>& modality_feature_names(Modality m);
// Position of the modality's first feature in feature_names().
std::size_t modality_offset(Modality m);
Modality modality_of(std::size_t feature_index);

// Per-modality window length in seconds, anchored at the event end. 0 or a
// length beyond the event means the full event.
struct WindowSpec {
  std::array<double, kNumModalities> seconds{};

  double operator[](Modality m) const { return seconds[static_cast<int>(m)]; }
  double& operator[](Modality m) { return seconds[static_cast<int>(m)]; }
  bool operator==(const WindowSpec&) const = default;

  static WindowSpec full() { return {}; }
  // "gaze=1,grip=3,peripheral=full"; unnamed modalities stay full.
  static WindowSpec parse(std::string_view text);
  std::string to_string() const;
};

inline constexpr std::array<double, 5> kCandidateWindows = {1.0, 3.0, 5.0, 10.0, 0.0};

struct DriveInfo {
  control::DrivingStyle style = control::DrivingStyle::kLD;
  sim::EventKind kind = sim::EventKind::kPedSidewalk;
};

// Z-normalization moments of one participant's pupil, GSR and grip channels,
// fitted over every event of every session.
struct ParticipantNorms {
  ZStats pupil_left, pupil_right, gsr, grip;
};

ParticipantNorms fit_participant_norms(std::span<const driver::RawStreams* const> events);

// Gap filling (nearest for gaze, labels and pupils; linear for pedal
// distances) followed by the participant normalization. Throws
// invalid_argument naming the first absent or mis-sized channel.
driver::RawStreams prepare_streams(const driver::RawStreams& raw,
                                   const ParticipantNorms& norms);

void check_channels(const driver::RawStreams& s);

// Features of one modality over the last `window` seconds of prepared streams.
std::vector<double> extract_modality(Modality m, const driver::RawStreams& prepared,
                                     double window, const DriveInfo& drive);

// Full vector in feature_names() order.
std::vector<double> assemble(const driver::RawStreams& prepared,
                             const WindowSpec& windows, const DriveInfo& drive);

}  // namespace driveadapt::features
