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
#include <string>
#include <vector>

#include <json.hpp>

namespace driveadapt::ml {

struct ForestParams {
  int n_trees = 100;
  int max_depth = 0;          // 0: unlimited
  int max_features = 0;       // per split; 0: floor(sqrt(F))
  int min_samples_split = 2;
  int max_bins = 255;         // exact splits up to this many distinct values
  std::uint64_t seed = 1;
};

// Column-major view of training data for the tree builder.
struct TrainingView {
  std::span<const double> x;    // row-major, rows x width
  std::size_t width = 0;
  std::span<const int> y;
  std::span<const std::size_t> rows;  // rows to train on (repeats allowed)
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int left = -1, right = -1;
  int label = 0;     // leaf class
};

class DecisionTree {
 public:
  int predict(std::span<const double> row) const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int depth() const;

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

 private:
  friend class TreeBuilder;
  std::vector<TreeNode> nodes_;
};

// Bagged CART ensemble with Gini splits, random feature subsets and hard
// majority votes; vote ties go to the lowest class index.
class RandomForest {
 public:
  // Throws invalid_argument on empty input or a non-finite feature value.
  void fit(const TrainingView& data, int num_classes, const ForestParams& params);

  std::vector<double> vote_shares(std::span<const double> row) const;
  int predict(std::span<const double> row) const;

  int num_classes() const { return num_classes_; }
  std::size_t num_features() const { return num_features_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }
  const ForestParams& params() const { return params_; }

  nlohmann::json to_json() const;
  static RandomForest from_json(const nlohmann::json& j);

 private:
  std::vector<DecisionTree> trees_;
  int num_classes_ = 0;
  std::size_t num_features_ = 0;
  ForestParams params_;
};

}  // namespace driveadapt::ml
