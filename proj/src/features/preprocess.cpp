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

#include "features/preprocess.hpp"

#include <cmath>

#include "common/error.hpp"

namespace driveadapt::features {

namespace {

// Index of the nearest valid sample for every position; ties go left.
template <typename Valid>
std::vector<std::size_t> nearest_valid(std::size_t n, Valid valid) {
  constexpr auto kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> left(n, kNone), right(n, kNone);
  std::size_t last = kNone;
  for (std::size_t i = 0; i < n; ++i) {
    if (valid(i)) last = i;
    left[i] = last;
  }
  last = kNone;
  for (std::size_t i = n; i-- > 0;) {
    if (valid(i)) last = i;
    right[i] = last;
  }
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (left[i] == kNone) out[i] = right[i];
    else if (right[i] == kNone) out[i] = left[i];
    else out[i] = (i - left[i] <= right[i] - i) ? left[i] : right[i];
  }
  return out;
}

}  // namespace

ZStats fit_zstats(std::span<const std::span<const double>> series) {
  double sum = 0.0;
  std::size_t n = 0;
  for (auto s : series)
    for (double v : s)
      if (std::isfinite(v)) {
        sum += v;
        ++n;
      }
  if (n < 2) throw invalid_argument("normalization needs at least two samples");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (auto s : series)
    for (double v : s)
      if (std::isfinite(v)) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n));
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) throw domain_error("zero variance");
  return {mean, sd};
}

ZStats fit_zstats(std::span<const double> series) {
  const std::span<const double> one[] = {series};
  return fit_zstats(std::span<const std::span<const double>>(one));
}

std::vector<double> apply_zstats(std::span<const double> x, const ZStats& z) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - z.mean) / z.sd;
  return out;
}

std::vector<double> znormalize(std::span<const double> x) {
  if (x.size() < 2) throw invalid_argument("normalization needs at least two samples");
  return apply_zstats(x, fit_zstats(x));
}

std::vector<double> interpolate_gaps(std::span<const double> x, GapFill fill) {
  const std::size_t n = x.size();
  auto valid = [&](std::size_t i) { return !std::isnan(x[i]); };
  bool any = false;
  for (std::size_t i = 0; i < n && !any; ++i) any = valid(i);
  if (!any) throw invalid_argument("series has no valid samples");

  std::vector<double> out(x.begin(), x.end());
  if (fill == GapFill::kNearest) {
    const auto idx = nearest_valid(n, valid);
    for (std::size_t i = 0; i < n; ++i) out[i] = x[idx[i]];
    return out;
  }
  std::size_t i = 0;
  std::ptrdiff_t prev = -1;
  while (i < n) {
    if (valid(i)) {
      prev = static_cast<std::ptrdiff_t>(i++);
      continue;
    }
    std::size_t j = i;
    while (j < n && !valid(j)) ++j;
    for (std::size_t k = i; k < j; ++k) {
      if (prev < 0) out[k] = x[j];
      else if (j == n) out[k] = x[static_cast<std::size_t>(prev)];
      else {
        const double u = static_cast<double>(k - static_cast<std::size_t>(prev)) /
                         static_cast<double>(j - static_cast<std::size_t>(prev));
        out[k] = x[static_cast<std::size_t>(prev)] +
                 u * (x[j] - x[static_cast<std::size_t>(prev)]);
      }
    }
    i = j;
  }
  return out;
}

std::vector<int> interpolate_labels(std::span<const int> labels) {
  const std::size_t n = labels.size();
  auto valid = [&](std::size_t i) { return labels[i] >= 0; };
  bool any = false;
  for (std::size_t i = 0; i < n && !any; ++i) any = valid(i);
  if (!any) throw invalid_argument("label series has no valid samples");
  const auto idx = nearest_valid(n, valid);
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = labels[idx[i]];
  return out;
}

}  // namespace driveadapt::features
