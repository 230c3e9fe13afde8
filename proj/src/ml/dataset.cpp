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

#include "ml/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/error.hpp"
#include "common/rng.hpp"

namespace driveadapt::ml {

Dataset Dataset::from_table(const features::FeatureTable& t) {
  Dataset d;
  d.names = t.names;
  d.x.reserve(t.rows.size() * t.names.size());
  for (const auto& r : t.rows) {
    d.x.insert(d.x.end(), r.values.begin(), r.values.end());
    d.y.push_back(static_cast<int>(r.preference));
    d.participant.push_back(r.participant);
    d.mode.push_back(r.mode);
    d.trust.push_back(r.trust);
    d.trust_level.push_back(r.trust_level);
  }
  return d;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset d;
  d.names = names;
  d.x.reserve(rows.size() * width());
  for (auto i : rows) {
    const auto r = row(i);
    d.x.insert(d.x.end(), r.begin(), r.end());
    d.y.push_back(y[i]);
    d.participant.push_back(participant[i]);
    d.mode.push_back(mode[i]);
    d.trust.push_back(trust[i]);
    d.trust_level.push_back(trust_level[i]);
  }
  return d;
}

Dataset Dataset::columns(std::span<const std::size_t> cols) const {
  Dataset d = *this;
  d.names.clear();
  for (auto c : cols) d.names.push_back(names.at(c));
  d.x.clear();
  d.x.reserve(size() * cols.size());
  for (std::size_t i = 0; i < size(); ++i)
    for (auto c : cols) d.x.push_back(at(i, c));
  return d;
}

void Dataset::add_column(const std::string& name, std::span<const double> values) {
  if (values.size() != size()) throw invalid_argument("column length does not match rows");
  const std::size_t w = width();
  std::vector<double> nx;
  nx.reserve(size() * (w + 1));
  for (std::size_t i = 0; i < size(); ++i) {
    const auto r = row(i);
    nx.insert(nx.end(), r.begin(), r.end());
    nx.push_back(values[i]);
  }
  x = std::move(nx);
  names.push_back(name);
}

std::vector<int> Dataset::participants() const {
  std::vector<int> p = participant;
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  return p;
}

std::vector<std::vector<std::size_t>> split_by_participant(
    const Dataset& data, int k, std::uint64_t seed, std::span<const std::size_t> rows) {
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(data.size());
    std::iota(all.begin(), all.end(), 0);
    rows = all;
  }
  std::vector<int> ids;
  for (auto r : rows) ids.push_back(data.participant[r]);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (k < 2) throw invalid_argument("need at least two folds");
  if (static_cast<int>(ids.size()) < k)
    throw invalid_argument("fewer participants (" + std::to_string(ids.size()) +
                           ") than folds (" + std::to_string(k) + ")");
  Rng rng(derive_seed({seed, 0x666f6c64ULL}));
  for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[uniform_index(rng, i)]);
  std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
  for (auto r : rows) {
    const auto pos = std::find(ids.begin(), ids.end(), data.participant[r]) - ids.begin();
    folds[static_cast<std::size_t>(pos % k)].push_back(r);
  }
  return folds;
}

std::vector<std::size_t> upsample(std::span<const std::size_t> rows,
                                  std::span<const int> labels, int num_classes,
                                  std::uint64_t seed) {
  if (rows.size() != labels.size()) throw invalid_argument("rows and labels differ in length");
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) throw invalid_argument("label out of range");
    by_class[static_cast<std::size_t>(labels[i])].push_back(rows[i]);
  }
  std::size_t majority = 0;
  for (int c = 0; c < num_classes; ++c) {
    if (by_class[c].empty())
      throw invalid_argument("class " + std::to_string(c) + " has no training rows");
    majority = std::max(majority, by_class[c].size());
  }
  std::vector<std::size_t> out(rows.begin(), rows.end());
  Rng rng(derive_seed({seed, 0x7570ULL}));
  for (int c = 0; c < num_classes; ++c) {
    const auto& members = by_class[c];
    for (std::size_t k = members.size(); k < majority; ++k)
      out.push_back(members[uniform_index(rng, members.size())]);
  }
  return out;
}

Dataset upsample(const Dataset& data, std::uint64_t seed) {
  std::vector<std::size_t> rows(data.size());
  std::iota(rows.begin(), rows.end(), 0);
  return data.subset(upsample(rows, data.y, kNumPreferenceClasses, seed));
}

double majority_share(std::span<const int> labels, int num_classes) {
  if (labels.empty()) return 0.0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (int l : labels) ++counts.at(static_cast<std::size_t>(l));
  return static_cast<double>(*std::max_element(counts.begin(), counts.end())) /
         static_cast<double>(labels.size());
}

}  // namespace driveadapt::ml
