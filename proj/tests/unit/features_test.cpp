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

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "common/error.hpp"
#include "common/rng.hpp"
#include "features/assemble.hpp"
#include "features/feature_csv.hpp"
#include "features/gaze.hpp"
#include "features/preprocess.hpp"
#include "features/signals.hpp"

namespace driveadapt::features {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// 20 still samples at (0.2, 0.2), five fast steps, 19 still samples at (0.8, 0.8).
struct Trace {
  std::vector<double> x, y;
};
Trace two_fixations() {
  Trace t;
  for (int i = 0; i < 20; ++i) t.x.push_back(0.2), t.y.push_back(0.2);
  for (int k = 0; k < 5; ++k) t.x.push_back(0.3 + 0.1 * k), t.y.push_back(0.2);
  for (int i = 0; i < 20; ++i) t.x.push_back(0.8), t.y.push_back(0.8);
  return t;
}

TEST(Gaze, AngularVelocityOracle) {
  const std::vector<double> x = {0.0, 0.001, 0.003}, y = {0.0, 0.0, 0.01};
  const auto v = angular_velocity(x, y, 0.02);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_DOUBLE_EQ(v[1], 0.15 / 0.02);
  EXPECT_DOUBLE_EQ(v[0], v[1]);
  EXPECT_DOUBLE_EQ(v[2], std::hypot(0.3, 0.294) / 0.02);
}

TEST(Gaze, FixationSegmentationOracle) {
  const auto t = two_fixations();
  const auto seg = detect_fixations(t.x, t.y, 0.02);
  ASSERT_EQ(seg.fixations.size(), 2u);
  EXPECT_EQ(seg.fixations[0].begin, 0u);
  EXPECT_EQ(seg.fixations[0].end, 20u);
  EXPECT_NEAR(seg.fixations[0].dwell, 0.4, 1e-12);
  EXPECT_EQ(seg.fixations[1].begin, 26u);
  EXPECT_EQ(seg.fixations[1].end, 45u);
  EXPECT_NEAR(seg.fixations[1].start, 0.52, 1e-12);
  EXPECT_DOUBLE_EQ(seg.fixations[1].cx, 0.8);
  ASSERT_EQ(seg.saccades.size(), 1u);
  EXPECT_EQ(seg.saccades[0].begin, 20u);
  EXPECT_EQ(seg.saccades[0].end, 26u);

  const auto regions = region_shares(seg, t.x, t.y);
  ASSERT_TRUE(regions.defined);
  EXPECT_DOUBLE_EQ(regions.share[0], 20.0 / 39.0);
  EXPECT_DOUBLE_EQ(regions.share[8], 19.0 / 39.0);
  const double p = 20.0 / 39.0, q = 19.0 / 39.0;
  EXPECT_NEAR(regions.entropy, -(p * std::log2(p) + q * std::log2(q)), 1e-12);

  const auto visits = aoi_visit_durations(seg, 0.02);
  ASSERT_EQ(visits.size(), 2u);
  EXPECT_NEAR(visits[0], 0.4, 1e-12);
  EXPECT_NEAR(visits[1], 0.38, 1e-12);
}

TEST(Gaze, ShortFixationsDropped) {
  std::vector<double> x(4, 0.5), y(4, 0.5);
  EXPECT_TRUE(detect_fixations(x, y, 0.02).fixations.empty());
  x.assign(5, 0.5);
  y.assign(5, 0.5);
  EXPECT_EQ(detect_fixations(x, y, 0.02).fixations.size(), 1u);
}

TEST(Gaze, ConsecutiveSameCellFixationsFormOneVisit) {
  std::vector<double> x, y;
  for (int i = 0; i < 10; ++i) x.push_back(0.1), y.push_back(0.5);
  x.push_back(0.2), y.push_back(0.5);  // fast hop within the cell
  for (int i = 0; i < 10; ++i) x.push_back(0.25), y.push_back(0.5);
  const auto seg = detect_fixations(x, y, 0.02);
  ASSERT_EQ(seg.fixations.size(), 2u);
  const auto visits = aoi_visit_durations(seg, 0.02);
  ASSERT_EQ(visits.size(), 1u);
  EXPECT_NEAR(visits[0], 0.42, 1e-12);
}

TEST(Gaze, GridAndEntropy) {
  EXPECT_EQ(grid_cell(0.1, 0.1), 0);
  EXPECT_EQ(grid_cell(0.9, 0.1), 2);
  EXPECT_EQ(grid_cell(0.1, 0.9), 6);
  EXPECT_EQ(grid_cell(0.5, 0.5), 4);
  EXPECT_EQ(grid_cell(1.0, 1.0), 8);
  EXPECT_EQ(grid_cell(-0.2, 0.4), 3);
  const std::vector<double> uniform(8, 0.125);
  EXPECT_NEAR(shannon_entropy(uniform), 3.0, 1e-12);
  EXPECT_EQ(shannon_entropy(std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_THROW(shannon_entropy(std::vector<double>{0.5, 0.6}), Error);
  EXPECT_THROW(shannon_entropy(std::vector<double>{1.5, -0.5}), Error);
}

TEST(Gaze, EntropyBoundedProperty) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 14);
    std::vector<double> p(n);
    double total = 0.0;
    for (auto& v : p) total += v = uniform01(rng);
    for (auto& v : p) v /= total;
    const double h = shannon_entropy(p);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, std::log2(static_cast<double>(n)) + 1e-9);
  }
}

TEST(Signals, ScrOracle) {
  const std::vector<double> gsr = {0.0, 0.02, 0.06, 0.1, 0.08, 0.08, 0.09, 0.1, 0.05, 0.2};
  const auto r = detect_scr(gsr, 1.0);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].trough, 0u);
  EXPECT_EQ(r[0].peak, 3u);
  EXPECT_NEAR(r[0].amplitude, 0.1, 1e-12);
  EXPECT_EQ(r[1].trough, 8u);
  EXPECT_EQ(r[1].peak, 9u);
  const auto f = scr_features(gsr, 1.0);
  EXPECT_EQ(f.count, 2);
  EXPECT_NEAR(f.mean_amplitude, 0.125, 1e-12);
  EXPECT_NEAR(f.max_amplitude, 0.15, 1e-12);
  EXPECT_NEAR(f.gsr.max, 0.2, 1e-12);
}

TEST(Signals, SlowRiseIsNotAResponse) {
  std::vector<double> gsr;
  for (int i = 0; i < 10; ++i) gsr.push_back(0.008 * i);
  EXPECT_TRUE(detect_scr(gsr, 1.0).empty());
  EXPECT_EQ(detect_scr(gsr, 0.1).size(), 1u);
}

TEST(Signals, CardiacOracle) {
  const auto c = cardiac_features(std::vector<double>{0.8, 1.0});
  EXPECT_DOUBLE_EQ(c.hr.mean, 67.5);
  EXPECT_DOUBLE_EQ(c.hr.min, 60.0);
  EXPECT_DOUBLE_EQ(c.hr.max, 75.0);
  EXPECT_NEAR(c.hrv, 0.1, 1e-12);
  EXPECT_THROW(cardiac_features(std::vector<double>{}), Error);
  EXPECT_THROW(cardiac_features(std::vector<double>{0.8, 0.0}), Error);
}

TEST(Signals, ApproachOracle) {
  EXPECT_EQ(count_approaches(std::vector<double>{3, 1, 1, 3, 2, 1.9, 2, 0}), 3);
  EXPECT_EQ(count_approaches(std::vector<double>{1, 3, 1}), 1);
  EXPECT_EQ(count_approaches(std::vector<double>{5, 5}), 0);
  const auto p = pedal_features(std::vector<double>{4, 1, 4});
  EXPECT_EQ(p.approaches, 1);
  EXPECT_DOUBLE_EQ(p.distance.mean, 3.0);
}

TEST(Preprocess, GapFilling) {
  const std::vector<double> x = {kNaN, 1, kNaN, kNaN, 4, kNaN};
  EXPECT_EQ(interpolate_gaps(x, GapFill::kNearest), (std::vector<double>{1, 1, 1, 4, 4, 4}));
  EXPECT_EQ(interpolate_gaps(x, GapFill::kLinear), (std::vector<double>{1, 1, 2, 3, 4, 4}));
  EXPECT_EQ(interpolate_gaps(std::vector<double>{kNaN, 2, kNaN, 6}, GapFill::kNearest),
            (std::vector<double>{2, 2, 2, 6}));
  EXPECT_EQ(interpolate_labels(std::vector<int>{-1, 2, -1, 5}), (std::vector<int>{2, 2, 2, 5}));
  EXPECT_THROW(interpolate_gaps(std::vector<double>{kNaN, kNaN}, GapFill::kLinear), Error);
}

TEST(Preprocess, ZStats) {
  const std::vector<double> v = {1, 2, 3, kNaN};
  const auto z = fit_zstats(v);
  EXPECT_DOUBLE_EQ(z.mean, 2.0);
  EXPECT_DOUBLE_EQ(z.sd, std::sqrt(2.0 / 3.0));
  const auto n = apply_zstats(v, z);
  EXPECT_DOUBLE_EQ(n[0], -1.0 / std::sqrt(2.0 / 3.0));
  EXPECT_TRUE(std::isnan(n[3]));
  try {
    fit_zstats(std::vector<double>{2, 2, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
  EXPECT_THROW(fit_zstats(std::vector<double>{1, kNaN}), Error);
  const std::vector<double> a = {0, 2}, b = {4};
  const std::span<const double> parts[] = {a, b};
  EXPECT_DOUBLE_EQ(fit_zstats(parts).mean, 2.0);
}

TEST(Names, CanonicalLayout) {
  const auto& names = feature_names();
  EXPECT_EQ(names.size(), 90u);
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
  std::size_t total = 0;
  for (auto m : kAllModalities) {
    EXPECT_EQ(modality_offset(m), total);
    const auto& sub = modality_feature_names(m);
    for (std::size_t i = 0; i < sub.size(); ++i) {
      EXPECT_EQ(names[total + i], sub[i]);
      EXPECT_EQ(modality_of(total + i), m);
    }
    total += sub.size();
    EXPECT_EQ(parse_modality(to_string(m)), m);
  }
  EXPECT_EQ(total, names.size());
  for (const char* f : {"object_share_sky", "object_entropy", "gaze_y_mean", "scr_count",
                        "brake_distance_max", "grip_std", "pupil_left_std"})
    EXPECT_NE(std::find(names.begin(), names.end(), f), names.end()) << f;
}

TEST(Windows, ParseAndPrint) {
  auto w = WindowSpec::parse("gaze=1,grip=3,peripheral=full");
  EXPECT_EQ(w[Modality::kGaze], 1.0);
  EXPECT_EQ(w[Modality::kGrip], 3.0);
  EXPECT_EQ(w[Modality::kPeripheral], 0.0);
  EXPECT_EQ(w[Modality::kPupil], 0.0);
  EXPECT_EQ(WindowSpec::parse(w.to_string()), w);
  EXPECT_EQ(WindowSpec::full().to_string().find("gaze=full"), 0u);
  EXPECT_THROW(WindowSpec::parse("gaze"), Error);
  EXPECT_THROW(WindowSpec::parse("heart=3"), Error);
  EXPECT_THROW(WindowSpec::parse("gaze=-1"), Error);
  EXPECT_THROW(WindowSpec::parse("gaze=3s"), Error);
}

driver::RawStreams synthetic_streams(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  driver::RawStreams s;
  s.t0 = 10.0;
  double bt = 10.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool drop = uniform01(rng) < 0.05;
    s.gaze_x.push_back(drop ? kNaN : 0.5 + 0.1 * std::sin(i * 0.05));
    s.gaze_y.push_back(drop ? kNaN : 0.5 + 0.05 * std::cos(i * 0.03));
    s.gaze_object.push_back(drop ? -1 : static_cast<int>(uniform_index(rng, 14)));
    s.pupil_left.push_back(3.5 + gaussian(rng, 0, 0.1));
    s.pupil_right.push_back(3.4 + gaussian(rng, 0, 0.1));
    s.gsr.push_back(5.0 + 0.5 * std::sin(i * 0.01) + gaussian(rng, 0, 0.01));
    s.grip.push_back(0.4 + gaussian(rng, 0, 0.05));
    s.throttle_distance.push_back(3.0 + gaussian(rng, 0, 0.3));
    s.brake_distance.push_back(i % 200 < 20 ? 1.0 : 6.0);
    s.can_throttle.push_back(0.2);
    s.can_brake.push_back(i % 200 < 20 ? 0.5 : 0.0);
    s.can_steering.push_back(0.01 * std::sin(i * 0.02));
    s.human_throttle.push_back(0);
    s.human_brake.push_back(i % 200 < 20);
  }
  while (bt < s.t_end()) {
    s.ibi.push_back(0.8 + gaussian(rng, 0, 0.03));
    bt += s.ibi.back();
    s.beat_times.push_back(bt);
  }
  return s;
}

TEST(Assemble, FiniteVectorAndWindowing) {
  const auto raw = synthetic_streams(3, 1000);
  const driver::RawStreams* all[] = {&raw};
  const auto norms = fit_participant_norms(all);
  const auto prepared = prepare_streams(raw, norms);
  for (double v : prepared.gaze_x) EXPECT_FALSE(std::isnan(v));
  const DriveInfo drive{control::DrivingStyle::kLA, sim::EventKind::kYieldLeftTurn};
  const auto full = assemble(prepared, WindowSpec::full(), drive);
  ASSERT_EQ(full.size(), feature_names().size());
  for (std::size_t i = 0; i < full.size(); ++i)
    EXPECT_TRUE(std::isfinite(full[i])) << feature_names()[i];

  // A window longer than the event is the full event.
  auto huge = WindowSpec::full();
  huge[Modality::kPedal] = 1000.0;
  EXPECT_EQ(assemble(prepared, huge, drive), full);

  const auto pedal_full = extract_modality(Modality::kPedal, prepared, 0.0, drive);
  const auto pedal_1s = extract_modality(Modality::kPedal, prepared, 1.0, drive);
  EXPECT_EQ(pedal_full.size(), pedal_1s.size());
  EXPECT_NE(pedal_full, pedal_1s);
}

TEST(Assemble, MissingChannelNamed) {
  auto raw = synthetic_streams(4, 300);
  raw.grip.clear();
  try {
    check_channels(raw);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("grip"), std::string::npos);
  }
  raw = synthetic_streams(4, 300);
  raw.pupil_left.pop_back();
  EXPECT_THROW(check_channels(raw), Error);
}

TEST(FeatureCsv, RoundTrip) {
  FeatureTable t;
  t.names = {"a", "b"};
  FeatureRow r;
  r.participant = 3;
  r.session = 2;
  r.event = 5;
  r.mode = adapt::SessionMode::kTrustLA;
  r.event_kind = sim::EventKind::kTwoWayStop;
  r.preference = adapt::PreferenceResponse::kMoreDefensive;
  r.trust = -1;
  r.trust_level = -3;
  r.takeover_brake = true;
  r.values = {0.1, 1.0 / 3.0};
  t.rows.push_back(r);
  r.trust.reset();
  r.trust_level.reset();
  r.mode = adapt::SessionMode::kFixedLD;
  r.values = {-2.5e-9, 7.0};
  t.rows.push_back(r);

  std::stringstream ss;
  write_feature_csv(ss, t);
  const auto header = ss.str().substr(0, ss.str().find('\n'));
  EXPECT_EQ(header.rfind("participant,session,event,mode", 0), 0u);
  const auto back = read_feature_csv(ss);
  EXPECT_EQ(back.names, t.names);
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[0].trust, -1);
  EXPECT_EQ(back.rows[0].trust_level, -3);
  EXPECT_FALSE(back.rows[1].trust.has_value());
  EXPECT_EQ(back.rows[0].mode, adapt::SessionMode::kTrustLA);
  EXPECT_EQ(back.rows[1].event_kind, sim::EventKind::kTwoWayStop);
  EXPECT_TRUE(back.rows[0].takeover_brake);
  EXPECT_FALSE(back.rows[0].takeover_throttle);
  EXPECT_EQ(back.rows[0].values, t.rows[0].values);
  EXPECT_EQ(back.rows[1].values, t.rows[1].values);

  std::stringstream bad("participant,session\n1,2\n");
  EXPECT_THROW(read_feature_csv(bad), Error);
}

}  // namespace
}  // namespace driveadapt::features
