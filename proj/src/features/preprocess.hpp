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

namespace driveadapt::features {

struct ZStats {
  double mean = 0.0;
  double sd = 1.0;  // population
};

// Moments over the finite samples of all series together. Throws
// domain_error("zero variance") for constant input and invalid_argument when
// fewer than two finite samples exist.
ZStats fit_zstats(std::span<const std::span<const double>> series);
ZStats fit_zstats(std::span<const double> series);

// (x - mean) / sd; NaN stays NaN.
std::vector<double> apply_zstats(std::span<const double> x, const ZStats& z);

// Normalizes a single series by its own moments.
std::vector<double> znormalize(std::span<const double> x);

enum class GapFill {
  kNearest,  // gaze, pupil: nearest valid neighbour, ties to the earlier one
  kLinear,   // pedal distances: linear between neighbours, edges held
};

// Fills NaN samples. Throws invalid_argument when nothing is valid.
std::vector<double> interpolate_gaps(std::span<const double> x, GapFill fill);

// Nearest-neighbour fill for label series where -1 marks a missing sample.
std::vector<int> interpolate_labels(std::span<const int> labels);

}  // namespace driveadapt::features
