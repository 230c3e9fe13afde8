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

#include "ml/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace driveadapt::ml {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

// Per-feature quantization of the distinct training rows. With at most
// max_bins distinct values every value gets its own bin, which makes the
// split search exact.
struct BinnedData {
  std::size_t rows = 0;      // distinct training rows
  std::size_t features = 0;
  std::vector<std::uint8_t> code;       // feature-major: code[f * rows + r]
  std::vector<std::vector<double>> lo;  // smallest value in each bin
  std::vector<std::vector<double>> hi;  // largest value in each bin
  std::vector<int> label;

  int bins(std::size_t f) const { return static_cast<int>(lo[f].size()); }
};

BinnedData bin_data(const TrainingView& d, std::span<const std::size_t> distinct,
                    int max_bins) {
  BinnedData b;
  b.rows = distinct.size();
  b.features = d.width;
  b.code.resize(b.rows * b.features);
  b.lo.resize(b.features);
  b.hi.resize(b.features);
  for (auto r : distinct) b.label.push_back(d.y[r]);
  std::vector<double> values(b.rows);
  std::vector<double> uniq;
  for (std::size_t f = 0; f < b.features; ++f) {
    for (std::size_t i = 0; i < b.rows; ++i) values[i] = d.x[distinct[i] * d.width + f];
    uniq = values;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    const std::size_t u = uniq.size();
    const std::size_t nb = std::min<std::size_t>(u, static_cast<std::size_t>(max_bins));
    // Bin g holds unique values [g*u/nb, (g+1)*u/nb).
    std::vector<std::uint8_t> bin_of_unique(u);
    b.lo[f].resize(nb);
    b.hi[f].resize(nb);
    for (std::size_t g = 0; g < nb; ++g) {
      const std::size_t first = g * u / nb, last = (g + 1) * u / nb;
      for (std::size_t k = first; k < last; ++k) bin_of_unique[k] = static_cast<std::uint8_t>(g);
      b.lo[f][g] = uniq[first];
      b.hi[f][g] = uniq[last - 1];
    }
    for (std::size_t i = 0; i < b.rows; ++i) {
      const auto k = std::lower_bound(uniq.begin(), uniq.end(), values[i]) - uniq.begin();
      b.code[f * b.rows + i] = bin_of_unique[static_cast<std::size_t>(k)];
    }
  }
  return b;
}

}  // namespace

class TreeBuilder {
 public:
  TreeBuilder(const BinnedData& data, int num_classes, const ForestParams& p)
      : d_(data), k_(num_classes), p_(p) {
    mtry_ = p.max_features > 0
                ? static_cast<std::size_t>(p.max_features)
                : std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(
                                               std::sqrt(static_cast<double>(d_.features)))));
    mtry_ = std::min(mtry_, d_.features);
    hist_.resize(256 * static_cast<std::size_t>(k_));
  }

  DecisionTree build(std::vector<double> weight, Rng& rng) {
    DecisionTree tree;
    std::vector<std::uint32_t> idx;
    for (std::size_t r = 0; r < weight.size(); ++r)
      if (weight[r] > 0.0) idx.push_back(static_cast<std::uint32_t>(r));
    weight_ = std::move(weight);
    struct Work {
      int node;
      std::size_t begin, end;
      int depth;
    };
    tree.nodes_.push_back({});
    std::vector<Work> stack{{0, 0, idx.size(), 0}};
    std::vector<std::size_t> features(d_.features);
    std::vector<double> total(static_cast<std::size_t>(k_));
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      std::fill(total.begin(), total.end(), 0.0);
      for (std::size_t i = w.begin; i < w.end; ++i)
        total[static_cast<std::size_t>(d_.label[idx[i]])] += weight_[idx[i]];
      double node_weight = 0.0;
      int nonzero = 0;
      for (double t : total) {
        node_weight += t;
        nonzero += t > 0.0;
      }
      tree.nodes_[w.node].label = argmax(total);
      const bool depth_limited = p_.max_depth > 0 && w.depth >= p_.max_depth;
      if (nonzero <= 1 || depth_limited || node_weight < p_.min_samples_split) continue;

      std::iota(features.begin(), features.end(), 0);
      Split best;
      std::size_t evaluated = 0;
      for (std::size_t j = 0; j < features.size() && evaluated < mtry_; ++j) {
        std::swap(features[j], features[j + uniform_index(rng, features.size() - j)]);
        const auto s = best_split(features[j], idx, w.begin, w.end, total, node_weight);
        if (!s.valid) continue;  // constant in this node; does not use up the budget
        ++evaluated;
        if (!best.valid || s.score > best.score + 1e-12 * std::abs(best.score)) best = s;
      }
      if (!best.valid) continue;

      const std::size_t f = best.feature;
      const auto mid = std::partition(
          idx.begin() + static_cast<std::ptrdiff_t>(w.begin),
          idx.begin() + static_cast<std::ptrdiff_t>(w.end),
          [&](std::uint32_t r) { return d_.code[f * d_.rows + r] <= best.bin; });
      const auto split_at = static_cast<std::size_t>(mid - idx.begin());
      const int left = static_cast<int>(tree.nodes_.size());
      tree.nodes_.push_back({});
      tree.nodes_.push_back({});
      auto& node = tree.nodes_[w.node];
      node.feature = static_cast<int>(f);
      node.threshold = 0.5 * (d_.hi[f][best.bin] + d_.lo[f][best.next_bin]);
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, split_at, w.end, w.depth + 1});
      stack.push_back({left, w.begin, split_at, w.depth + 1});
    }
    return tree;
  }

 private:
  struct Split {
    bool valid = false;
    std::size_t feature = 0;
    int bin = 0;       // last bin going left
    int next_bin = 0;  // first non-empty bin going right
    double score = 0.0;
  };

  int argmax(const std::vector<double>& v) const {
    int best = 0;
    for (int c = 1; c < k_; ++c)
      if (v[c] > v[best]) best = c;
    return best;
  }

  // Maximizes sum_c l_c^2 / L + sum_c r_c^2 / R, i.e. minimizes the weighted
  // Gini impurity of the children.
  Split best_split(std::size_t f, const std::vector<std::uint32_t>& idx, std::size_t begin,
                   std::size_t end, const std::vector<double>& total, double node_weight) {
    const int nb = d_.bins(f);
    Split s;
    s.feature = f;
    if (nb < 2) return s;
    const auto k = static_cast<std::size_t>(k_);
    std::fill(hist_.begin(), hist_.begin() + static_cast<std::ptrdiff_t>(nb * k), 0.0);
    const std::uint8_t* codes = d_.code.data() + f * d_.rows;
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = idx[i];
      hist_[codes[r] * k + static_cast<std::size_t>(d_.label[r])] += weight_[r];
    }
    double left[16] = {};
    double lw = 0.0;
    int prev = -1;
    for (int b = 0; b < nb; ++b) {
      double bw = 0.0;
      for (std::size_t c = 0; c < k; ++c) bw += hist_[b * k + c];
      if (bw == 0.0) continue;
      if (prev >= 0) {
        const double rw = node_weight - lw;
        double sl = 0.0, sr = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          const double r = total[c] - left[c];
          sl += left[c] * left[c];
          sr += r * r;
        }
        const double score = sl / lw + sr / rw;
        if (!s.valid || score > s.score + 1e-12 * std::abs(s.score)) {
          s.valid = true;
          s.score = score;
          s.bin = prev;
          s.next_bin = b;
        }
      }
      for (std::size_t c = 0; c < k; ++c) left[c] += hist_[b * k + c];
      lw += bw;
      prev = b;
    }
    return s;
  }

  const BinnedData& d_;
  int k_;
  ForestParams p_;
  std::size_t mtry_ = 1;
  std::vector<double> hist_;
  std::vector<double> weight_;
};

int DecisionTree::predict(std::span<const double> row) const {
  int n = 0;
  while (nodes_[n].feature >= 0) {
    const auto& node = nodes_[n];
    n = row[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right;
  }
  return nodes_[n].label;
}

int DecisionTree::depth() const {
  std::vector<int> d(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].feature < 0) continue;
    d[nodes_[i].left] = d[nodes_[i].right] = d[i] + 1;
    best = std::max(best, d[i] + 1);
  }
  return best;
}

json DecisionTree::to_json() const {
  json f = json::array(), t = json::array(), l = json::array(), r = json::array(),
       c = json::array();
  for (const auto& n : nodes_) {
    f.push_back(n.feature);
    t.push_back(n.threshold);
    l.push_back(n.left);
    r.push_back(n.right);
    c.push_back(n.label);
  }
  return json{{"feature", f}, {"threshold", t}, {"left", l}, {"right", r}, {"label", c}};
}

DecisionTree DecisionTree::from_json(const json& j) {
  DecisionTree tree;
  const auto& f = j.at("feature");
  const std::size_t n = f.size();
  for (const char* key : {"threshold", "left", "right", "label"})
    if (j.at(key).size() != n) throw invalid_argument("inconsistent tree arrays in model");
  for (std::size_t i = 0; i < n; ++i) {
    TreeNode node;
    node.feature = f[i];
    node.threshold = j["threshold"][i];
    node.left = j["left"][i];
    node.right = j["right"][i];
    node.label = j["label"][i];
    if (node.feature >= 0 &&
        (node.left <= static_cast<int>(i) || node.right <= static_cast<int>(i) ||
         node.left >= static_cast<int>(n) || node.right >= static_cast<int>(n)))
      throw invalid_argument("tree node children out of range in model");
    tree.nodes_.push_back(node);
  }
  if (tree.nodes_.empty()) throw invalid_argument("empty tree in model");
  return tree;
}

void RandomForest::fit(const TrainingView& d, int num_classes, const ForestParams& p) {
  if (d.rows.empty()) throw invalid_argument("no training rows");
  if (d.width == 0) throw invalid_argument("no features to train on");
  if (num_classes < 1 || num_classes > 16) throw invalid_argument("unsupported class count");
  if (p.n_trees < 1) throw invalid_argument("n_trees must be positive");
  if (p.max_bins < 2 || p.max_bins > 255) throw invalid_argument("max_bins must be in [2, 255]");
  std::vector<std::size_t> distinct(d.rows.begin(), d.rows.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (auto r : distinct) {
    if (d.y[r] < 0 || d.y[r] >= num_classes) throw invalid_argument("label out of range");
    for (std::size_t f = 0; f < d.width; ++f)
      if (!std::isfinite(d.x[r * d.width + f]))
        throw invalid_argument("non-finite value in feature column " + std::to_string(f));
  }
  // Position of each training entry among the distinct rows.
  std::vector<std::size_t> slot(d.rows.size());
  for (std::size_t i = 0; i < d.rows.size(); ++i)
    slot[i] = static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), d.rows[i]) - distinct.begin());

  const BinnedData binned = bin_data(d, distinct, p.max_bins);
  TreeBuilder builder(binned, num_classes, p);
  trees_.clear();
  trees_.reserve(static_cast<std::size_t>(p.n_trees));
  for (int t = 0; t < p.n_trees; ++t) {
    Rng rng(derive_seed({p.seed, static_cast<std::uint64_t>(t)}));
    std::vector<double> weight(distinct.size(), 0.0);
    for (std::size_t i = 0; i < slot.size(); ++i) weight[slot[uniform_index(rng, slot.size())]] += 1.0;
    trees_.push_back(builder.build(std::move(weight), rng));
  }
  num_classes_ = num_classes;
  num_features_ = d.width;
  params_ = p;
}

std::vector<double> RandomForest::vote_shares(std::span<const double> row) const {
  if (trees_.empty()) throw state_error("forest is not trained");
  if (row.size() != num_features_) throw invalid_argument("row width does not match the model");
  std::vector<double> votes(static_cast<std::size_t>(num_classes_), 0.0);
  for (const auto& t : trees_) votes[static_cast<std::size_t>(t.predict(row))] += 1.0;
  for (auto& v : votes) v /= static_cast<double>(trees_.size());
  return votes;
}

int RandomForest::predict(std::span<const double> row) const {
  const auto v = vote_shares(row);
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

json RandomForest::to_json() const {
  json trees = json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return json{{"format", "driveadapt-forest"},
              {"version", kFormatVersion},
              {"num_classes", num_classes_},
              {"num_features", num_features_},
              {"params",
               {{"n_trees", params_.n_trees},
                {"max_depth", params_.max_depth},
                {"max_features", params_.max_features},
                {"min_samples_split", params_.min_samples_split},
                {"max_bins", params_.max_bins},
                {"seed", params_.seed}}},
              {"trees", trees}};
}

RandomForest RandomForest::from_json(const json& j) {
  try {
    if (j.at("format") != "driveadapt-forest") throw invalid_argument("not a forest model");
    if (j.at("version") != kFormatVersion) throw invalid_argument("unsupported forest version");
    RandomForest f;
    f.num_classes_ = j.at("num_classes");
    f.num_features_ = j.at("num_features");
    const auto& p = j.at("params");
    f.params_.n_trees = p.at("n_trees");
    f.params_.max_depth = p.at("max_depth");
    f.params_.max_features = p.at("max_features");
    f.params_.min_samples_split = p.at("min_samples_split");
    f.params_.max_bins = p.at("max_bins");
    f.params_.seed = p.at("seed");
    for (const auto& t : j.at("trees")) {
      auto tree = DecisionTree::from_json(t);
      for (const auto& n : tree.nodes()) {
        if (n.feature >= static_cast<int>(f.num_features_))
          throw invalid_argument("tree feature index out of range");
        if (n.label < 0 || n.label >= f.num_classes_)
          throw invalid_argument("tree label out of range");
      }
      f.trees_.push_back(std::move(tree));
    }
    if (f.trees_.empty()) throw invalid_argument("model has no trees");
    return f;
  } catch (const json::exception& e) {
    throw invalid_argument(std::string("malformed forest model: ") + e.what());
  }
}

}  // namespace driveadapt::ml
