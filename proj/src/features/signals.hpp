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

#include <span>
#include <vector>

#include "common/summary.hpp"

namespace driveadapt::features {

struct ScrParams {
  double min_rise = 0.05;       // normalized units, trough to peak
  double max_rise_time = 5.0;   // s
};

struct ScrResponse {
  std::size_t trough = 0;
  std::size_t peak = 0;
  double amplitude = 0.0;
};

// Trough-to-peak responses: maximal non-decreasing runs whose rise reaches
// min_rise within max_rise_time.
std::vector<ScrResponse> detect_scr(std::span<const double> gsr, double dt,
                                    const ScrParams& params = {});

struct ScrFeatures {
  Summary gsr;
  int count = 0;
  double mean_amplitude = 0.0;
  double max_amplitude = 0.0;
};

ScrFeatures scr_features(std::span<const double> gsr, double dt,
                         const ScrParams& params = {});

struct CardiacFeatures {
  Summary hr;         // bpm
  double hrv = 0.0;   // population std of the intervals, s
};

// Throws invalid_argument on an empty series or a non-positive interval.
CardiacFeatures cardiac_features(std::span<const double> ibi);

struct PedalFeatures {
  Summary distance;
  int approaches = 0;
};

// An approach is a sample strictly below `threshold` whose predecessor is at
// or above it.
int count_approaches(std::span<const double> distance, double threshold = 2.0);
PedalFeatures pedal_features(std::span<const double> distance, double threshold = 2.0);

}  // namespace driveadapt::features
