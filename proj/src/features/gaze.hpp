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
#include <span>
#include <vector>

namespace driveadapt::features {

// Visual angle spanned by the normalized screen. Three 45-inch 16:9 screens
// viewed from 42 inches, 50 degrees each.
struct ScreenGeometry {
  double width_deg = 150.0;
  double height_deg = 29.4;
};

struct FixationParams {
  double velocity_threshold = 10.0;  // deg/s
  double min_duration = 0.1;         // s
};

struct Fixation {
  std::size_t begin = 0;  // first sample
  std::size_t end = 0;    // one past the last sample
  double start = 0.0;     // s from the series start
  double dwell = 0.0;     // s, samples * dt
  double cx = 0.0, cy = 0.0;
};

struct Saccade {
  std::size_t begin = 0;
  std::size_t end = 0;
  double mean_velocity = 0.0;  // deg/s
};

struct GazeSegmentation {
  std::vector<Fixation> fixations;
  std::vector<Saccade> saccades;
  std::vector<double> velocity;  // deg/s per sample
};

// Point-to-point angular speed; sample 0 copies sample 1.
std::vector<double> angular_velocity(std::span<const double> x,
                                     std::span<const double> y, double dt,
                                     const ScreenGeometry& geom = {});

// Velocity-threshold segmentation. Runs of below-threshold samples lasting at
// least min_duration are fixations; maximal runs of samples outside any
// fixation are saccades. Series shorter than one minimum fixation give an
// empty result.
GazeSegmentation detect_fixations(std::span<const double> x,
                                  std::span<const double> y, double dt,
                                  const ScreenGeometry& geom = {},
                                  const FixationParams& params = {});

inline constexpr int kGridCells = 9;

// Row-major 3x3 cell; row 0 is the bottom third.
int grid_cell(double x, double y);

// -sum p log2 p. Throws invalid_argument unless p >= 0 and sums to 1.
double shannon_entropy(std::span<const double> p);

struct RegionShares {
  std::array<double, kGridCells> share{};
  double entropy = 0.0;
  bool defined = false;  // false when there is no fixation time
};

// Fraction of fixation samples falling in each grid cell.
RegionShares region_shares(const GazeSegmentation& seg,
                           std::span<const double> x, std::span<const double> y);

// Durations of area-of-interest visits: consecutive fixations whose centroids
// share a grid cell, from the first fixation's start to the last one's end.
std::vector<double> aoi_visit_durations(const GazeSegmentation& seg, double dt);

}  // namespace driveadapt::features
