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

#include "ml/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace driveadapt::ml {

using nlohmann::json;

namespace {

constexpr int kModelVersion = 1;
constexpr const char* kTrustChangeColumn = "trust_change_pred";
constexpr const char* kTrustLevelColumn = "trust_level_pred";

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), 0);
  return r;
}

void check_disjoint(const Dataset& data, std::span<const std::size_t> train,
                    std::span<const std::size_t> test) {
  std::set<int> a;
  for (auto r : train) a.insert(data.participant[r]);
  for (auto r : test)
    if (a.count(data.participant[r]))
      throw state_error("participant " + std::to_string(data.participant[r]) +
                        " appears in both training and test rows");
}

RandomForest fit_forest(const Dataset& d, std::span<const std::size_t> rows,
                        std::span<const int> labels, int num_classes,
                        const ForestParams& params) {
  RandomForest f;
  f.fit({d.x, d.width(), labels, rows}, num_classes, params);
  return f;
}

ForestParams with_seed(ForestParams p, std::uint64_t seed) {
  p.seed = seed;
  return p;
}

struct TrustLabels {
  std::vector<int> change;  // per row; -1 when absent
  std::vector<int> level;
};

TrustLabels trust_labels(const Dataset& d) {
  TrustLabels t;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const bool have = d.trust[i].has_value() &&
                      adapt::adaptation_mode(d.mode[i]) == adapt::AdaptationMode::kTrustBased;
    t.change.push_back(have ? *d.trust[i] + 2 : -1);
    t.level.push_back(have && d.trust_level[i] ? trust_level_class(*d.trust_level[i]) : -1);
  }
  return t;
}

std::vector<std::size_t> labelled(std::span<const std::size_t> rows, std::span<const int> labels) {
  std::vector<std::size_t> out;
  for (auto r : rows)
    if (labels[r] >= 0) out.push_back(r);
  return out;
}

std::vector<std::size_t> training_rows(const Dataset& d, std::span<const std::size_t> rows,
                                       const PipelineOptions& opts, std::uint64_t seed) {
  if (!opts.upsample) return {rows.begin(), rows.end()};
  std::vector<int> labels;
  for (auto r : rows) labels.push_back(d.y[r]);
  return upsample(rows, labels, kNumPreferenceClasses, seed);
}

const std::map<std::string, features::Modality>& modality_by_name() {
  static const auto m = [] {
    std::map<std::string, features::Modality> out;
    for (auto mod : features::kAllModalities)
      for (const auto& n : features::modality_feature_names(mod)) out[n] = mod;
    return out;
  }();
  return m;
}

}  // namespace

int trust_level_class(int running_sum) { return running_sum < 0 ? 0 : (running_sum == 0 ? 1 : 2); }

Dataset PreferenceModel::with_trust_predictions(const Dataset& data) const {
  Dataset d = data;
  if (!two_step_) return d;
  std::vector<double> change(d.size()), level(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    change[i] = trust_change_.predict(d.row(i)) - 2;
    level[i] = trust_level_.predict(d.row(i)) - 1;
  }
  d.add_column(kTrustChangeColumn, change);
  d.add_column(kTrustLevelColumn, level);
  return d;
}

std::vector<std::vector<double>> PreferenceModel::vote_shares(const Dataset& data) const {
  if (data.names != names_)
    throw invalid_argument("dataset columns do not match the model's features");
  const Dataset d = with_trust_predictions(data);
  std::vector<std::vector<double>> out;
  out.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out.push_back(preference_.vote_shares(d.row(i)));
  return out;
}

std::vector<int> PreferenceModel::predict(const Dataset& data) const {
  std::vector<int> out;
  for (const auto& s : vote_shares(data))
    out.push_back(static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin()));
  return out;
}

json PreferenceModel::to_json() const {
  json j{{"format", "driveadapt-preference-model"},
         {"version", kModelVersion},
         {"classes", {"more_defensive", "same", "more_aggressive"}},
         {"features", names_},
         {"two_step", two_step_},
         {"preference", preference_.to_json()}};
  if (two_step_) {
    j["trust_change"] = trust_change_.to_json();
    j["trust_level"] = trust_level_.to_json();
  }
  return j;
}

PreferenceModel PreferenceModel::from_json(const json& j) {
  try {
    if (j.at("format") != "driveadapt-preference-model")
      throw invalid_argument("not a preference model file");
    if (j.at("version") != kModelVersion) throw invalid_argument("unsupported model version");
    PreferenceModel m;
    m.names_ = j.at("features").get<std::vector<std::string>>();
    m.two_step_ = j.at("two_step");
    m.preference_ = RandomForest::from_json(j.at("preference"));
    const std::size_t expected = m.names_.size() + (m.two_step_ ? 2 : 0);
    if (m.preference_.num_features() != expected || m.preference_.num_classes() != 3)
      throw invalid_argument("preference forest does not match the feature list");
    if (m.two_step_) {
      m.trust_change_ = RandomForest::from_json(j.at("trust_change"));
      m.trust_level_ = RandomForest::from_json(j.at("trust_level"));
      if (m.trust_change_.num_features() != m.names_.size() ||
          m.trust_level_.num_features() != m.names_.size())
        throw invalid_argument("trust forests do not match the feature list");
    }
    return m;
  } catch (const json::exception& e) {
    throw invalid_argument(std::string("malformed model file: ") + e.what());
  }
}

PreferenceModel train_model(const Dataset& train, const PipelineOptions& opts) {
  if (train.size() == 0) throw invalid_argument("no training rows");
  PreferenceModel m;
  m.names_ = train.names;
  m.two_step_ = opts.two_step;
  const auto rows = all_rows(train.size());
  Dataset pref_data = train;

  if (opts.two_step) {
    const auto labels = trust_labels(train);
    const auto trust_rows = labelled(rows, labels.change);
    if (trust_rows.empty())
      throw invalid_argument("two-step training needs trust answers; none of the rows has one");
    // Out-of-fold trust predictions for the training rows themselves.
    std::vector<double> change(train.size()), level(train.size());
    const auto inner = split_by_participant(train, opts.inner_folds,
                                            derive_seed({opts.seed, 0x696e6e6572ULL}));
    for (std::size_t f = 0; f < inner.size(); ++f) {
      std::vector<std::size_t> fit_rows;
      for (std::size_t g = 0; g < inner.size(); ++g)
        if (g != f) fit_rows.insert(fit_rows.end(), inner[g].begin(), inner[g].end());
      check_disjoint(train, fit_rows, inner[f]);
      const auto tc_rows = labelled(fit_rows, labels.change);
      const auto tl_rows = labelled(fit_rows, labels.level);
      if (tc_rows.empty() || tl_rows.empty())
        throw invalid_argument("an inner fold has no trust answers to train on");
      const auto tc = fit_forest(train, tc_rows, labels.change, kNumTrustChangeClasses,
                                 with_seed(opts.forest, derive_seed({opts.seed, 0x7463ULL, f})));
      const auto tl = fit_forest(train, tl_rows, labels.level, kNumTrustLevelClasses,
                                 with_seed(opts.forest, derive_seed({opts.seed, 0x746cULL, f})));
      for (auto r : inner[f]) {
        change[r] = tc.predict(train.row(r)) - 2;
        level[r] = tl.predict(train.row(r)) - 1;
      }
    }
    m.trust_change_ = fit_forest(train, trust_rows, labels.change, kNumTrustChangeClasses,
                                 with_seed(opts.forest, derive_seed({opts.seed, 0x7463ULL})));
    m.trust_level_ = fit_forest(train, labelled(rows, labels.level), labels.level,
                                kNumTrustLevelClasses,
                                with_seed(opts.forest, derive_seed({opts.seed, 0x746cULL})));
    pref_data.add_column(kTrustChangeColumn, change);
    pref_data.add_column(kTrustLevelColumn, level);
  }
  const auto fit_rows = training_rows(pref_data, rows, opts, derive_seed({opts.seed, 0x7570ULL}));
  m.preference_ = fit_forest(pref_data, fit_rows, pref_data.y, kNumPreferenceClasses,
                             with_seed(opts.forest, derive_seed({opts.seed, 0x7072ULL})));
  return m;
}

Evaluation score(const std::vector<std::vector<double>>& shares, std::span<const int> truth) {
  Evaluation e;
  e.rows = truth.size();
  std::vector<int> pred;
  for (const auto& s : shares)
    pred.push_back(static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin()));
  e.accuracy = accuracy(truth, pred);
  e.confusion = confusion_matrix(truth, pred, kNumPreferenceClasses);
  e.roc = roc_ovr(shares, truth, kNumPreferenceClasses);
  return e;
}

Evaluation evaluate(const PreferenceModel& model, const Dataset& test) {
  return score(model.vote_shares(test), test.y);
}

CvResult cross_validate(const Dataset& data, const PipelineOptions& opts) {
  CvResult r;
  const auto folds = split_by_participant(data, opts.folds, opts.seed);
  std::vector<std::vector<double>> shares(data.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train_rows;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) train_rows.insert(train_rows.end(), folds[g].begin(), folds[g].end());
    check_disjoint(data, train_rows, folds[f]);
    PipelineOptions fold_opts = opts;
    fold_opts.seed = derive_seed({opts.seed, 0x6376ULL, f});
    const auto model = train_model(data.subset(train_rows), fold_opts);
    const Dataset test = data.subset(folds[f]);
    const auto s = model.vote_shares(test);
    std::vector<int> pred;
    for (std::size_t i = 0; i < s.size(); ++i) {
      shares[folds[f][i]] = s[i];
      pred.push_back(static_cast<int>(std::max_element(s[i].begin(), s[i].end()) - s[i].begin()));
    }
    r.fold_accuracy.push_back(accuracy(test.y, pred));
  }
  r.accuracy = std::accumulate(r.fold_accuracy.begin(), r.fold_accuracy.end(), 0.0) /
               static_cast<double>(r.fold_accuracy.size());
  r.majority_baseline = majority_share(data.y, kNumPreferenceClasses);
  r.pooled = score(shares, data.y);
  return r;
}

Dataset WindowedFeatures::build(const features::WindowSpec& spec) const {
  Dataset d = labels;
  d.names.clear();
  d.x.clear();
  std::array<std::size_t, features::kNumModalities> column{};
  for (auto m : features::kAllModalities) {
    const auto mi = static_cast<std::size_t>(m);
    const auto it = std::find(windows.begin(), windows.end(), spec[m]);
    if (it == windows.end())
      throw invalid_argument("window " + std::to_string(spec[m]) + " s for " +
                             std::string(features::to_string(m)) + " was not extracted");
    column[mi] = static_cast<std::size_t>(it - windows.begin());
    for (const auto& n : features::modality_feature_names(m)) d.names.push_back(n);
  }
  d.x.reserve(d.size() * d.names.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (auto m : features::kAllModalities) {
      const auto mi = static_cast<std::size_t>(m);
      const std::size_t w = features::modality_feature_names(m).size();
      const auto& block = blocks[mi].at(column[mi]);
      d.x.insert(d.x.end(), block.begin() + static_cast<std::ptrdiff_t>(i * w),
                 block.begin() + static_cast<std::ptrdiff_t>((i + 1) * w));
    }
  return d;
}

GridSearchResult window_grid_search(const WindowedFeatures& data, const PipelineOptions& opts) {
  if (data.windows.empty()) throw invalid_argument("no candidate windows");
  GridSearchResult g;
  g.windows = data.windows;
  const bool has_full =
      std::find(data.windows.begin(), data.windows.end(), 0.0) != data.windows.end();
  double full_accuracy = std::nan("");
  for (auto m : features::kAllModalities) {
    auto& row = g.accuracy[static_cast<std::size_t>(m)];
    std::size_t best = 0;
    for (std::size_t w = 0; w < data.windows.size(); ++w) {
      features::WindowSpec spec;
      if (!has_full) spec.seconds.fill(data.windows.front());
      spec[m] = data.windows[w];
      double acc;
      if (has_full && data.windows[w] == 0.0 && !std::isnan(full_accuracy)) {
        acc = full_accuracy;
      } else {
        acc = cross_validate(data.build(spec), opts).accuracy;
        if (has_full && data.windows[w] == 0.0) full_accuracy = acc;
      }
      row.push_back(acc);
      if (acc > row[best]) best = w;
    }
    g.best[m] = data.windows[best];
  }
  return g;
}

std::vector<AblationRow> ablation(const Dataset& data, const PipelineOptions& opts) {
  const auto& lookup = modality_by_name();
  std::array<std::vector<std::size_t>, features::kNumModalities> cols;
  std::vector<std::size_t> unassigned;
  for (std::size_t c = 0; c < data.width(); ++c) {
    const auto it = lookup.find(data.names[c]);
    if (it == lookup.end()) unassigned.push_back(c);
    else cols[static_cast<std::size_t>(it->second)].push_back(c);
  }
  int present = 0;
  for (const auto& c : cols) present += !c.empty();
  if (present < 2) throw invalid_argument("ablation needs at least two modalities");

  const double full = cross_validate(data, opts).accuracy;
  std::vector<AblationRow> out;
  for (auto m : features::kAllModalities) {
    AblationRow row;
    row.modality = m;
    row.full = full;
    std::vector<std::size_t> keep = unassigned;
    for (auto other : features::kAllModalities)
      if (other != m) keep.insert(keep.end(), cols[static_cast<std::size_t>(other)].begin(),
                                  cols[static_cast<std::size_t>(other)].end());
    std::sort(keep.begin(), keep.end());
    row.without = cols[static_cast<std::size_t>(m)].empty()
                      ? full
                      : cross_validate(data.columns(keep), opts).accuracy;
    row.loss = row.full - row.without;
    out.push_back(row);
  }
  return out;
}

Selection sequential_select(const Dataset& data, int k, const PipelineOptions& opts) {
  if (k < 1 || static_cast<std::size_t>(k) > data.width())
    throw invalid_argument("k must be between 1 and the feature count (" +
                           std::to_string(data.width()) + ")");
  Selection s;
  std::vector<std::size_t> chosen;
  std::vector<bool> used(data.width(), false);
  for (int step = 0; step < k; ++step) {
    double best_acc = -1.0;
    std::size_t best_col = 0;
    for (std::size_t c = 0; c < data.width(); ++c) {
      if (used[c]) continue;
      auto cols = chosen;
      cols.push_back(c);
      const double acc = cross_validate(data.columns(cols), opts).accuracy;
      if (acc > best_acc) {
        best_acc = acc;
        best_col = c;
      }
    }
    used[best_col] = true;
    chosen.push_back(best_col);
    s.features.push_back(data.names[best_col]);
    s.trace.push_back(best_acc);
  }
  return s;
}

json to_json(const Evaluation& e) {
  json roc = json::array();
  const char* names[] = {"more_defensive", "same", "more_aggressive"};
  json auc = json::object();
  for (std::size_t c = 0; c < e.roc.size(); ++c) {
    const auto& r = e.roc[c];
    roc.push_back({{"class", names[c]}, {"defined", r.defined}, {"fpr", r.fpr}, {"tpr", r.tpr}});
    auc[names[c]] = r.defined ? json(r.auc) : json(nullptr);
  }
  return json{{"rows", e.rows},
              {"accuracy", e.accuracy},
              {"confusion", e.confusion},
              {"auc", auc},
              {"roc", roc}};
}

json to_json(const CvResult& r) {
  return json{{"accuracy", r.accuracy},
              {"fold_accuracy", r.fold_accuracy},
              {"majority_baseline", r.majority_baseline},
              {"pooled", to_json(r.pooled)}};
}

}  // namespace driveadapt::ml
