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

#include "features/gaze.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace driveadapt::features {

std::vector<double> angular_velocity(std::span<const double> x,
                                     std::span<const double> y, double dt,
                                     const ScreenGeometry& g) {
  if (x.size() != y.size()) throw invalid_argument("gaze x and y lengths differ");
  const std::size_t n = x.size();
  std::vector<double> v(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    v[i] = std::hypot((x[i] - x[i - 1]) * g.width_deg,
                      (y[i] - y[i - 1]) * g.height_deg) / dt;
  if (n >= 2) v[0] = v[1];
  return v;
}

GazeSegmentation detect_fixations(std::span<const double> x,
                                  std::span<const double> y, double dt,
                                  const ScreenGeometry& g,
                                  const FixationParams& p) {
  GazeSegmentation seg;
  const std::size_t n = x.size();
  const auto min_samples =
      static_cast<std::size_t>(std::ceil(p.min_duration / dt - 1e-9));
  if (n < std::max<std::size_t>(min_samples, 2)) return seg;
  seg.velocity = angular_velocity(x, y, dt, g);
  const auto& v = seg.velocity;

  std::vector<bool> in_fixation(n, false);
  std::size_t i = 0;
  while (i < n) {
    if (!(v[i] < p.velocity_threshold)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && v[j] < p.velocity_threshold) ++j;
    if (j - i >= min_samples) {
      Fixation f;
      f.begin = i;
      f.end = j;
      f.start = dt * static_cast<double>(i);
      f.dwell = dt * static_cast<double>(j - i);
      for (std::size_t k = i; k < j; ++k) {
        f.cx += x[k];
        f.cy += y[k];
        in_fixation[k] = true;
      }
      f.cx /= static_cast<double>(j - i);
      f.cy /= static_cast<double>(j - i);
      seg.fixations.push_back(f);
    }
    i = j;
  }
  i = 0;
  while (i < n) {
    if (in_fixation[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    double sum = 0.0;
    while (j < n && !in_fixation[j]) sum += v[j++];
    seg.saccades.push_back({i, j, sum / static_cast<double>(j - i)});
    i = j;
  }
  return seg;
}

int grid_cell(double x, double y) {
  auto third = [](double u) {
    return std::clamp(static_cast<int>(std::floor(u * 3.0)), 0, 2);
  };
  return third(y) * 3 + third(x);
}

double shannon_entropy(std::span<const double> p) {
  double total = 0.0;
  for (double q : p) {
    if (!(q >= 0.0)) throw invalid_argument("probabilities must be non-negative");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-9) throw invalid_argument("probabilities must sum to 1");
  double h = 0.0;
  for (double q : p)
    if (q > 0.0) h -= q * std::log2(q);
  return std::max(0.0, h);
}

RegionShares region_shares(const GazeSegmentation& seg, std::span<const double> x,
                           std::span<const double> y) {
  RegionShares r;
  std::size_t total = 0;
  std::array<std::size_t, kGridCells> counts{};
  for (const auto& f : seg.fixations)
    for (std::size_t k = f.begin; k < f.end; ++k) {
      ++counts[static_cast<std::size_t>(grid_cell(x[k], y[k]))];
      ++total;
    }
  if (total == 0) return r;
  for (int c = 0; c < kGridCells; ++c)
    r.share[c] = static_cast<double>(counts[c]) / static_cast<double>(total);
  r.entropy = shannon_entropy(r.share);
  r.defined = true;
  return r;
}

std::vector<double> aoi_visit_durations(const GazeSegmentation& seg, double dt) {
  std::vector<double> out;
  std::size_t i = 0;
  const auto& f = seg.fixations;
  while (i < f.size()) {
    const int cell = grid_cell(f[i].cx, f[i].cy);
    std::size_t j = i + 1;
    while (j < f.size() && grid_cell(f[j].cx, f[j].cy) == cell) ++j;
    out.push_back(dt * static_cast<double>(f[j - 1].end - f[i].begin));
    i = j;
  }
  return out;
}

}  // namespace driveadapt::features
