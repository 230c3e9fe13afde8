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
#include <span>
#include <vector>

namespace driveadapt::ml {

double accuracy(std::span<const int> truth, std::span<const int> predicted);

// counts[t][p]: rows with true class t predicted as p.
std::vector<std::vector<int>> confusion_matrix(std::span<const int> truth,
                                               std::span<const int> predicted,
                                               int num_classes);

struct RocCurve {
  bool defined = false;  // false when the test set lacks positives or negatives
  std::vector<double> fpr, tpr, thresholds;
  double auc = 0.0;  // NaN when undefined
};

// `positive` holds 0/1 flags. Threshold sweep over the distinct scores (positive when score >= threshold)
// plus both endpoints; area by the trapezoid rule.
RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> positive);

// One-versus-rest curve per class from per-row vote shares.
std::vector<RocCurve> roc_ovr(const std::vector<std::vector<double>>& shares,
                              std::span<const int> truth, int num_classes);

}  // namespace driveadapt::ml
