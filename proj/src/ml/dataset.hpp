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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adapt/adaptation.hpp"
#include "features/feature_csv.hpp"

namespace driveadapt::ml {

inline constexpr int kNumPreferenceClasses = 3;

// Dense row-major design matrix with the labels needed by the pipelines.
struct Dataset {
  std::vector<std::string> names;
  std::vector<double> x;
  std::vector<int> y;  // preference class, adapt::PreferenceResponse order
  std::vector<int> participant;
  std::vector<adapt::SessionMode> mode;
  std::vector<std::optional<int>> trust;
  std::vector<std::optional<int>> trust_level;

  std::size_t size() const { return y.size(); }
  std::size_t width() const { return names.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(x).subspan(i * width(), width());
  }
  double at(std::size_t i, std::size_t j) const { return x[i * width() + j]; }

  static Dataset from_table(const features::FeatureTable& table);
  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset columns(std::span<const std::size_t> cols) const;
  // Appends a column; `values` holds one entry per row.
  void add_column(const std::string& name, std::span<const double> values);
  std::vector<int> participants() const;  // sorted, distinct
};

// Participant-disjoint folds as row indices. Participants are shuffled with
// the seed and dealt round-robin, so fold sizes differ by at most one
// participant. Throws invalid_argument when there are fewer participants
// than folds.
std::vector<std::vector<std::size_t>> split_by_participant(
    const Dataset& data, int k, std::uint64_t seed,
    std::span<const std::size_t> rows = {});

// Rows of every class followed by with-replacement draws of the minority
// classes up to the majority count. `labels` gives the class of each entry of
// `rows`. Throws invalid_argument when a class in [0, num_classes) is empty.
std::vector<std::size_t> upsample(std::span<const std::size_t> rows,
                                  std::span<const int> labels, int num_classes,
                                  std::uint64_t seed);
Dataset upsample(const Dataset& data, std::uint64_t seed);

// Class shares of the most frequent class.
double majority_share(std::span<const int> labels, int num_classes);

}  // namespace driveadapt::ml
