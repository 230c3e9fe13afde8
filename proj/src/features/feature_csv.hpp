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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adapt/adaptation.hpp"
#include "sim/route.hpp"

namespace driveadapt::features {

// One event sample.
struct FeatureRow {
  int participant = 0;
  int session = 0;  // position in the participant's session order
  int event = 0;
  adapt::SessionMode mode = adapt::SessionMode::kFixedLD;
  sim::EventKind event_kind = sim::EventKind::kPedSidewalk;
  adapt::PreferenceResponse preference = adapt::PreferenceResponse::kSame;
  std::optional<int> trust;        // trust-change answer, trust sessions only
  std::optional<int> trust_level;  // running sum of answers in the session
  bool takeover_brake = false;
  bool takeover_throttle = false;
  std::vector<double> values;
};

struct FeatureTable {
  std::vector<std::string> names;
  std::vector<FeatureRow> rows;
};

inline const std::vector<std::string>& label_columns() {
  static const std::vector<std::string> cols = {
      "participant", "session",    "event",          "mode",           "event_kind",
      "preference",  "trust",      "trust_level",    "takeover_brake", "takeover_throttle"};
  return cols;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table);
void write_feature_csv(const std::string& path, const FeatureTable& table);
FeatureTable read_feature_csv(std::istream& in);
FeatureTable read_feature_csv(const std::string& path);

}  // namespace driveadapt::features
