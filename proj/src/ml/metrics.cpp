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

#include "ml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "common/error.hpp"

namespace driveadapt::ml {

double accuracy(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw invalid_argument("label lengths differ");
  if (truth.empty()) throw invalid_argument("no rows to score");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hit += truth[i] == predicted[i];
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

std::vector<std::vector<int>> confusion_matrix(std::span<const int> truth,
                                               std::span<const int> predicted,
                                               int num_classes) {
  if (truth.size() != predicted.size()) throw invalid_argument("label lengths differ");
  std::vector<std::vector<int>> m(static_cast<std::size_t>(num_classes),
                                  std::vector<int>(static_cast<std::size_t>(num_classes), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) ++m.at(truth[i]).at(predicted[i]);
  return m;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> positive) {
  if (scores.size() != positive.size()) throw invalid_argument("score and label lengths differ");
  RocCurve c;
  const auto pos = static_cast<double>(std::count(positive.begin(), positive.end(), std::uint8_t{1}));
  const double neg = static_cast<double>(positive.size()) - pos;
  if (pos == 0.0 || neg == 0.0) {
    c.auc = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  c.defined = true;
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  c.thresholds.push_back(std::numeric_limits<double>::infinity());
  c.fpr.push_back(0.0);
  c.tpr.push_back(0.0);
  double tp = 0.0, fp = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      (positive[order[i]] ? tp : fp) += 1.0;
      ++i;
    }
    c.thresholds.push_back(s);
    c.fpr.push_back(fp / neg);
    c.tpr.push_back(tp / pos);
  }
  c.thresholds.push_back(-std::numeric_limits<double>::infinity());
  c.fpr.push_back(1.0);
  c.tpr.push_back(1.0);
  for (std::size_t k = 1; k < c.fpr.size(); ++k)
    c.auc += (c.fpr[k] - c.fpr[k - 1]) * (c.tpr[k] + c.tpr[k - 1]) / 2.0;
  return c;
}

std::vector<RocCurve> roc_ovr(const std::vector<std::vector<double>>& shares,
                              std::span<const int> truth, int num_classes) {
  if (shares.size() != truth.size()) throw invalid_argument("share and label lengths differ");
  std::vector<RocCurve> out;
  std::vector<double> s(shares.size());
  std::vector<std::uint8_t> pos(shares.size());
  for (int c = 0; c < num_classes; ++c) {
    for (std::size_t i = 0; i < shares.size(); ++i) {
      s[i] = shares[i].at(static_cast<std::size_t>(c));
      pos[i] = truth[i] == c;
    }
    out.push_back(roc_curve(s, pos));
  }
  return out;
}

}  // namespace driveadapt::ml
