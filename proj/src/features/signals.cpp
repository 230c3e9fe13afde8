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

#include "features/signals.hpp"

#include <algorithm>
#include <cmath>

#include "common/error.hpp"

namespace driveadapt::features {

std::vector<ScrResponse> detect_scr(std::span<const double> gsr, double dt,
                                    const ScrParams& p) {
  std::vector<ScrResponse> out;
  const std::size_t n = gsr.size();
  std::size_t i = 0;
  while (i + 1 < n) {
    if (!(gsr[i + 1] >= gsr[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j + 1 < n && gsr[j + 1] >= gsr[j]) ++j;
    const double rise = gsr[j] - gsr[i];
    const double rise_time = dt * static_cast<double>(j - i);
    if (rise >= p.min_rise && rise_time <= p.max_rise_time + 1e-9)
      out.push_back({i, j, rise});
    i = j;
  }
  return out;
}

ScrFeatures scr_features(std::span<const double> gsr, double dt, const ScrParams& p) {
  ScrFeatures f;
  f.gsr = summarize(gsr);
  const auto responses = detect_scr(gsr, dt, p);
  f.count = static_cast<int>(responses.size());
  for (const auto& r : responses) {
    f.mean_amplitude += r.amplitude;
    f.max_amplitude = std::max(f.max_amplitude, r.amplitude);
  }
  if (f.count > 0) f.mean_amplitude /= f.count;
  return f;
}

CardiacFeatures cardiac_features(std::span<const double> ibi) {
  if (ibi.empty()) throw invalid_argument("no inter-beat intervals");
  std::vector<double> hr(ibi.size());
  for (std::size_t i = 0; i < ibi.size(); ++i) {
    if (!(ibi[i] > 0.0)) throw invalid_argument("inter-beat intervals must be positive");
    hr[i] = 60.0 / ibi[i];
  }
  CardiacFeatures c;
  c.hr = summarize(hr);
  c.hrv = population_std(ibi);
  return c;
}

int count_approaches(std::span<const double> d, double threshold) {
  int count = 0;
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d[i] < threshold && d[i - 1] >= threshold) ++count;
  return count;
}

PedalFeatures pedal_features(std::span<const double> d, double threshold) {
  for (double v : d)
    if (!(v >= 0.0)) throw invalid_argument("pedal distances must be non-negative");
  return {summarize(d), count_approaches(d, threshold)};
}

}  // namespace driveadapt::features
