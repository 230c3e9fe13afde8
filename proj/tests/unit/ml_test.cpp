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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "ml/dataset.hpp"
#include "ml/forest.hpp"
#include "ml/metrics.hpp"
#include "ml/pipeline.hpp"

namespace driveadapt::ml {
namespace {

using adapt::PreferenceResponse;

// Class depends on column `signal`; the other named columns are noise.
features::FeatureTable labelled_table(const std::vector<std::string>& names,
                                      std::size_t signal, int participants,
                                      std::uint64_t seed, double strength = 2.5) {
  features::FeatureTable t;
  t.names = names;
  Rng rng(seed);
  for (int p = 0; p < participants; ++p)
    for (int e = 0; e < 24; ++e) {
      features::FeatureRow r;
      r.participant = p;
      r.event = e;
      r.mode = e % 2 ? adapt::SessionMode::kTrustLD : adapt::SessionMode::kPrefLA;
      const int cls = uniform01(rng) < 0.5 ? 1 : static_cast<int>(uniform_index(rng, 2)) * 2;
      r.preference = static_cast<PreferenceResponse>(cls);
      if (r.mode == adapt::SessionMode::kTrustLD) {
        r.trust = cls - 1;
        r.trust_level = cls - 1;
      }
      for (std::size_t c = 0; c < names.size(); ++c)
        r.values.push_back(c == signal ? strength * (cls - 1) + gaussian(rng, 0, 1)
                                       : gaussian(rng, 0, 1));
      t.rows.push_back(r);
    }
  return t;
}

TEST(Split, ParticipantDisjointAndBalanced) {
  const auto data = Dataset::from_table(labelled_table({"a"}, 0, 10, 1));
  const auto folds = split_by_participant(data, 4, 7);
  ASSERT_EQ(folds.size(), 4u);
  std::set<std::size_t> all;
  std::vector<std::set<int>> who(4);
  for (std::size_t f = 0; f < 4; ++f)
    for (auto r : folds[f]) {
      EXPECT_TRUE(all.insert(r).second);
      who[f].insert(data.participant[r]);
    }
  EXPECT_EQ(all.size(), data.size());
  for (std::size_t f = 0; f < 4; ++f) {
    EXPECT_GE(who[f].size(), 2u);
    EXPECT_LE(who[f].size(), 3u);
    for (std::size_t g = f + 1; g < 4; ++g)
      for (int p : who[f]) EXPECT_EQ(who[g].count(p), 0u);
  }
  EXPECT_EQ(split_by_participant(data, 4, 7), folds);
  EXPECT_THROW(split_by_participant(data, 11, 7), Error);
}

TEST(Upsample, BalancesClasses) {
  const std::vector<std::size_t> rows = {0, 1, 2, 3, 4, 5, 6};
  const std::vector<int> labels = {0, 1, 1, 1, 1, 2, 2};
  const auto out = upsample(rows, labels, 3, 9);
  std::map<int, int> counts;
  for (auto r : out) ++counts[labels[r]];
  EXPECT_EQ(counts[0], 4);
  EXPECT_EQ(counts[1], 4);
  EXPECT_EQ(counts[2], 4);
  for (auto r : rows) EXPECT_NE(std::find(out.begin(), out.end(), r), out.end());
  const std::vector<int> missing = {0, 0, 1, 1, 1, 1, 1};
  EXPECT_THROW(upsample(rows, missing, 3, 9), Error);
  EXPECT_DOUBLE_EQ(majority_share(labels, 3), 4.0 / 7.0);
}

TEST(Forest, LearnsXor) {
  Rng rng(3);
  std::vector<double> x;
  std::vector<int> y;
  for (int i = 0; i < 400; ++i) {
    const double a = uniform01(rng), b = uniform01(rng);
    x.insert(x.end(), {a, b});
    y.push_back((a > 0.5) != (b > 0.5));
  }
  std::vector<std::size_t> rows(400);
  std::iota(rows.begin(), rows.end(), 0);
  RandomForest f;
  ForestParams params;
  params.n_trees = 30;
  params.max_features = 2;
  f.fit({x, 2, y, rows}, 2, params);
  int correct = 0;
  for (double a : {0.1, 0.3, 0.7, 0.9})
    for (double b : {0.15, 0.35, 0.65, 0.85}) {
      const std::vector<double> row = {a, b};
      correct += f.predict(row) == static_cast<int>((a > 0.5) != (b > 0.5));
    }
  EXPECT_GE(correct, 15);
  const auto shares = f.vote_shares(std::vector<double>{0.1, 0.9});
  EXPECT_NEAR(shares[0] + shares[1], 1.0, 1e-12);
}

TEST(Forest, DeterministicAndSerializable) {
  const auto data = Dataset::from_table(labelled_table({"a", "b", "c"}, 1, 6, 2));
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  ForestParams params;
  params.n_trees = 15;
  params.max_depth = 6;
  RandomForest f1, f2;
  f1.fit({data.x, data.width(), data.y, rows}, 3, params);
  f2.fit({data.x, data.width(), data.y, rows}, 3, params);
  EXPECT_EQ(f1.to_json(), f2.to_json());
  for (const auto& t : f1.trees()) EXPECT_LE(t.depth(), 6);
  const auto back = RandomForest::from_json(nlohmann::json::parse(f1.to_json().dump()));
  for (std::size_t i = 0; i < data.size(); ++i)
    EXPECT_EQ(back.vote_shares(data.row(i)), f1.vote_shares(data.row(i)));
  std::vector<double> bad = data.x;
  bad[0] = std::nan("");
  RandomForest f3;
  EXPECT_THROW(f3.fit({bad, data.width(), data.y, rows}, 3, params), Error);
}

TEST(Forest, ConstantLabelGivesLeaf) {
  const std::vector<double> x = {1, 2, 3, 4};
  const std::vector<int> y = {1, 1, 1, 1};
  const std::vector<std::size_t> rows = {0, 1, 2, 3};
  RandomForest f;
  ForestParams params;
  params.n_trees = 3;
  f.fit({x, 1, y, rows}, 3, params);
  for (const auto& t : f.trees()) EXPECT_EQ(t.nodes().size(), 1u);
  EXPECT_EQ(f.predict(std::vector<double>{9}), 1);
}

TEST(Metrics, AccuracyConfusionRoc) {
  const std::vector<int> truth = {0, 1, 2, 1, 1}, pred = {0, 1, 1, 1, 2};
  EXPECT_DOUBLE_EQ(accuracy(truth, pred), 0.6);
  const auto cm = confusion_matrix(truth, pred, 3);
  EXPECT_EQ(cm[1][1], 2);
  EXPECT_EQ(cm[1][2], 1);
  EXPECT_EQ(cm[2][1], 1);
  EXPECT_EQ(cm[0][0], 1);

  const std::vector<double> scores = {0.9, 0.8, 0.7, 0.6};
  const std::vector<std::uint8_t> pos = {1, 0, 1, 0};
  const auto roc = roc_curve(scores, pos);
  ASSERT_TRUE(roc.defined);
  EXPECT_DOUBLE_EQ(roc.auc, 0.75);
  EXPECT_EQ(roc.fpr.front(), 0.0);
  EXPECT_EQ(roc.tpr.back(), 1.0);
  const std::vector<double> tied = {0.5, 0.5};
  const std::vector<std::uint8_t> mixed = {1, 0};
  EXPECT_DOUBLE_EQ(roc_curve(tied, mixed).auc, 0.5);
  const std::vector<std::uint8_t> none = {0, 0};
  const auto undef = roc_curve(tied, none);
  EXPECT_FALSE(undef.defined);
  EXPECT_TRUE(std::isnan(undef.auc));
}

TEST(Metrics, AucMatchesPairCountProperty) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(30);
    std::vector<std::uint8_t> p(30);
    for (int i = 0; i < 30; ++i) {
      s[i] = std::round(uniform01(rng) * 10) / 10;
      p[i] = i % 3 == 0;
    }
    double wins = 0;
    int pairs = 0;
    for (int i = 0; i < 30; ++i)
      for (int j = 0; j < 30; ++j)
        if (p[i] && !p[j]) {
          ++pairs;
          wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
        }
    EXPECT_NEAR(roc_curve(s, p).auc, wins / pairs, 1e-12);
  }
}

PipelineOptions fast_options() {
  PipelineOptions o;
  o.forest.n_trees = 25;
  o.folds = 4;
  o.inner_folds = 3;
  return o;
}

TEST(Pipeline, CrossValidationBeatsBaseline) {
  const auto data = Dataset::from_table(labelled_table({"a", "b", "c", "d"}, 2, 12, 4));
  const auto cv = cross_validate(data, fast_options());
  EXPECT_EQ(cv.fold_accuracy.size(), 4u);
  EXPECT_EQ(cv.pooled.rows, data.size());
  EXPECT_GT(cv.accuracy, cv.majority_baseline + 0.2);
  int total = 0;
  for (const auto& r : cv.pooled.confusion)
    for (int v : r) total += v;
  EXPECT_EQ(total, static_cast<int>(data.size()));
  const auto again = cross_validate(data, fast_options());
  EXPECT_EQ(again.fold_accuracy, cv.fold_accuracy);
}

TEST(Pipeline, NoSignalStaysNearChance) {
  const auto data = Dataset::from_table(labelled_table({"a", "b"}, 9, 12, 5));
  const auto cv = cross_validate(data, fast_options());
  EXPECT_LT(cv.accuracy, cv.majority_baseline + 0.1);
}

TEST(Pipeline, TwoStepModelRoundTrip) {
  const auto data = Dataset::from_table(labelled_table({"a", "b", "c"}, 0, 8, 6));
  auto opts = fast_options();
  opts.two_step = true;
  const auto model = train_model(data, opts);
  EXPECT_TRUE(model.two_step());
  const auto back = PreferenceModel::from_json(nlohmann::json::parse(model.to_json().dump()));
  EXPECT_EQ(back.predict(data), model.predict(data));
  EXPECT_EQ(model.preference_forest().num_features(), data.width() + 2);
  const auto e = evaluate(model, data);
  EXPECT_GT(e.accuracy, 0.8);
  EXPECT_EQ(e.roc.size(), 3u);
  EXPECT_EQ(trust_level_class(-3), 0);
  EXPECT_EQ(trust_level_class(0), 1);
  EXPECT_EQ(trust_level_class(2), 2);
}

TEST(Pipeline, AblationFindsInformativeModality) {
  const std::vector<std::string> names = {"object_share_sky", "grip_std", "scr_count"};
  const auto data = Dataset::from_table(labelled_table(names, 0, 12, 7));
  const auto rows = ablation(data, fast_options());
  ASSERT_EQ(rows.size(), static_cast<std::size_t>(features::kNumModalities));
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.loss, r.full - r.without);
    if (r.modality == features::Modality::kSemantics) EXPECT_GT(r.loss, 0.2);
    else EXPECT_LT(r.loss, 0.1);
  }
  const auto only = Dataset::from_table(labelled_table({"grip_std"}, 0, 6, 7));
  EXPECT_THROW(ablation(only, fast_options()), Error);
}

TEST(Pipeline, SelectionPicksSignalFirst) {
  const auto data = Dataset::from_table(labelled_table({"a", "b", "c", "d"}, 3, 10, 8));
  const auto sel = sequential_select(data, 2, fast_options());
  ASSERT_EQ(sel.features.size(), 2u);
  EXPECT_EQ(sel.features[0], "d");
  EXPECT_EQ(sel.trace.size(), 2u);
  EXPECT_THROW(sequential_select(data, 5, fast_options()), Error);
}

// Gaze features only carry the label in the 1 s window.
TEST(Pipeline, GridSearchOracle) {
  const auto base = labelled_table({"x"}, 0, 12, 9);
  WindowedFeatures w;
  w.windows = {1.0, 3.0, 0.0};
  w.labels = Dataset::from_table(base);
  w.labels.names.clear();
  w.labels.x.clear();
  Rng rng(10);
  for (auto m : features::kAllModalities) {
    const std::size_t width = features::modality_feature_names(m).size();
    auto& blocks = w.blocks[static_cast<std::size_t>(m)];
    for (std::size_t k = 0; k < w.windows.size(); ++k) {
      std::vector<double> block;
      for (const auto& r : base.rows)
        for (std::size_t c = 0; c < width; ++c)
          block.push_back(m == features::Modality::kGaze && k == 0 && c == 0 ? r.values[0]
                                                                             : gaussian(rng, 0, 1));
      blocks.push_back(std::move(block));
    }
  }
  auto opts = fast_options();
  opts.forest.n_trees = 15;
  const auto g = window_grid_search(w, opts);
  EXPECT_EQ(g.best[features::Modality::kGaze], 1.0);
  const auto& gaze = g.accuracy[static_cast<std::size_t>(features::Modality::kGaze)];
  EXPECT_GT(gaze[0], gaze[2] + 0.15);
  auto bad = features::WindowSpec::full();
  bad[features::Modality::kGrip] = 5.0;
  EXPECT_THROW(w.build(bad), Error);
}

}  // namespace
}  // namespace driveadapt::ml
