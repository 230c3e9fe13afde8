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
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "driver/driver_model.hpp"
#include "features/assemble.hpp"
#include "features/feature_csv.hpp"
#include "ml/pipeline.hpp"
#include "service/session_engine.hpp"

namespace driveadapt::service {

struct CohortOptions {
  int participants = 28;
  std::uint64_t seed = 1;
  sim::SessionConfig sim;
  driver::GeneratorConfig generator;
  driver::CohortConfig cohort;
  bool write_ticks = true;

  static CohortOptions from_config(const KeyValueConfig& kv);
};

// One completed event: label columns, drive context and the raw channels.
struct EventSample {
  features::FeatureRow meta;  // values empty
  features::DriveInfo drive;
  driver::RawStreams streams;
};

struct SyntheticSession {
  SessionSpec spec;
  nlohmann::json record;  // session.json
  sim::SessionLog log;
  std::vector<EventSample> events;
};

std::uint64_t route_seed(std::uint64_t cohort_seed, int participant, int session_index);

// Closed-loop session driven by the synthetic participant: preference state
// drawn at each event activation, planned pedal presses, survey answers.
SyntheticSession run_synthetic_session(const driver::DriverProfile& profile,
                                       const SessionSpec& spec,
                                       const driver::GeneratorConfig& gen,
                                       std::uint64_t seed);

// Six sessions in the participant's Latin-square order.
std::vector<SyntheticSession> simulate_participant(const driver::DriverProfile& profile,
                                                   const CohortOptions& opts);

struct CohortSummary {
  int participants = 0;
  int sessions = 0;
  int events = 0;
};

// Writes out/sessions/p<id>_s<k>_<mode>/{session.json,ticks.jsonl,events/e<k>/}.
CohortSummary simulate_cohort(const CohortOptions& opts, const std::filesystem::path& out);

// Feature rows of one participant; the normalization is fitted over all of
// the participant's events.
std::vector<features::FeatureRow> featurize_participant(std::span<const EventSample> events,
                                                        const features::WindowSpec& windows);

// Accepts the simulate output directory or its sessions/ subdirectory.
features::FeatureTable extract_directory(const std::filesystem::path& dir,
                                         const features::WindowSpec& windows);
ml::WindowedFeatures extract_windowed_directory(const std::filesystem::path& dir,
                                                std::span<const double> windows);

// In-memory equivalents of simulate followed by extract.
features::FeatureTable simulate_features(const CohortOptions& opts,
                                         const features::WindowSpec& windows);
ml::WindowedFeatures simulate_windowed(const CohortOptions& opts,
                                       std::span<const double> windows);

}  // namespace driveadapt::service
