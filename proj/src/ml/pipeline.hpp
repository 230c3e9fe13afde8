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
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "features/assemble.hpp"
#include "ml/dataset.hpp"
#include "ml/forest.hpp"
#include "ml/metrics.hpp"

namespace driveadapt::ml {

struct PipelineOptions {
  int folds = 4;
  int inner_folds = 4;  // two-step: participant folds inside each training set
  std::uint64_t seed = 1;
  ForestParams forest;
  bool two_step = false;
  bool upsample = true;
};

inline constexpr int kNumTrustChangeClasses = 5;  // -2..+2
inline constexpr int kNumTrustLevelClasses = 3;   // <0, 0, >0

int trust_level_class(int running_sum);

// Preference classifier, optionally preceded by trust-change and trust-level
// classifiers whose predictions are appended as two extra features.
class PreferenceModel {
 public:
  const std::vector<std::string>& feature_names() const { return names_; }
  bool two_step() const { return two_step_; }
  const RandomForest& preference_forest() const { return preference_; }

  // Per-row class vote shares; `data` must carry the model's feature columns.
  std::vector<std::vector<double>> vote_shares(const Dataset& data) const;
  std::vector<int> predict(const Dataset& data) const;

  nlohmann::json to_json() const;
  static PreferenceModel from_json(const nlohmann::json& j);

 private:
  friend PreferenceModel train_model(const Dataset&, const PipelineOptions&);
  Dataset with_trust_predictions(const Dataset& data) const;

  std::vector<std::string> names_;
  bool two_step_ = false;
  RandomForest preference_, trust_change_, trust_level_;
};

PreferenceModel train_model(const Dataset& train, const PipelineOptions& opts);

struct Evaluation {
  std::size_t rows = 0;
  double accuracy = 0.0;
  std::vector<std::vector<int>> confusion;
  std::vector<RocCurve> roc;  // one-versus-rest, class order
};

Evaluation evaluate(const PreferenceModel& model, const Dataset& test);
Evaluation score(const std::vector<std::vector<double>>& shares, std::span<const int> truth);

struct CvResult {
  double accuracy = 0.0;  // mean over folds
  std::vector<double> fold_accuracy;
  double majority_baseline = 0.0;
  Evaluation pooled;  // out-of-fold predictions of every row
};

// Participant-wise k-fold cross-validation; minority classes are upsampled
// inside each training split only.
CvResult cross_validate(const Dataset& data, const PipelineOptions& opts);

// Feature blocks per modality and candidate window, for every event row.
struct WindowedFeatures {
  std::vector<double> windows;  // candidate lengths, 0 = full event
  // blocks[m][w]: row-major rows x width(m) for windows[w].
  std::array<std::vector<std::vector<double>>, features::kNumModalities> blocks;
  Dataset labels;  // label columns; no features

  Dataset build(const features::WindowSpec& spec) const;
};

struct GridSearchResult {
  std::vector<double> windows;
  // accuracy[m][w]: CV accuracy with modality m at windows[w], the rest full.
  std::array<std::vector<double>, features::kNumModalities> accuracy;
  features::WindowSpec best;
};

// Ties go to the earlier candidate.
GridSearchResult window_grid_search(const WindowedFeatures& data, const PipelineOptions& opts);

struct AblationRow {
  features::Modality modality = features::Modality::kGaze;
  double full = 0.0;
  double without = 0.0;
  double loss = 0.0;  // full - without
};

// Leave-one-modality-out accuracy losses, one row per modality.
std::vector<AblationRow> ablation(const Dataset& data, const PipelineOptions& opts);

struct Selection {
  std::vector<std::string> features;
  std::vector<double> trace;  // CV accuracy after each addition
};

// Greedy forward selection maximizing CV accuracy; ties go to the earlier
// column. Throws invalid_argument if k exceeds the feature count.
Selection sequential_select(const Dataset& data, int k, const PipelineOptions& opts);

nlohmann::json to_json(const Evaluation& e);
nlohmann::json to_json(const CvResult& r);

}  // namespace driveadapt::ml
