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

#include "driver/driver_model.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <utility>
#include <vector>

#include "common/error.hpp"

namespace driveadapt::driver {

namespace {

constexpr std::array<std::string_view, kNumSemanticClasses> kClassNames = {
    "road",     "sidewalk",  "building",      "tree",
    "sky",      "car",       "pedestrian",    "traffic_light",
    "road_sign", "crosswalk", "car_interior", "pole",
    "fence",    "other"};

// Native-unit shift per pooled standard deviation of the targeted feature.
// Measured on the default cohort (see tests/unit/driver_model_test.cpp,
// EffectCalibration).
struct NativeScale {
  double sky_logit = 0.75;
  double interior_logit = 0.63;
  double road_logit = 0.39;
  double car_logit = 0.56;
  double entropy_temper = 0.62;
  double pupil_log_sd = 0.177;
  double scr_log_rate = 0.77;
  double brake_mean_cm = 1.39;
  double brake_log_sd = 1.3;
  double grip_log_sd = 0.24;
};
constexpr NativeScale kScale{};

constexpr std::array<double, kNumSemanticClasses> kBaseShares = {
    0.28, 0.04, 0.07, 0.05, 0.07, 0.08, 0.03,
    0.03, 0.03, 0.02, 0.20, 0.02, 0.02, 0.06};

struct Box {
  double x0, x1, y0, y1;
  bool mirrored;  // also drawn on the opposite side of the screen
};

constexpr std::array<Box, kNumSemanticClasses> kBoxes = {{
    {0.40, 0.60, 0.36, 0.50, false},  // road
    {0.20, 0.36, 0.36, 0.48, true},   // sidewalk
    {0.03, 0.30, 0.50, 0.78, true},   // building
    {0.05, 0.33, 0.52, 0.75, true},   // tree
    {0.10, 0.90, 0.78, 0.97, false},  // sky
    {0.35, 0.65, 0.42, 0.56, false},  // car
    {0.25, 0.75, 0.42, 0.58, false},  // pedestrian
    {0.42, 0.58, 0.62, 0.76, false},  // traffic_light
    {0.62, 0.78, 0.52, 0.70, false},  // road_sign
    {0.36, 0.64, 0.34, 0.40, false},  // crosswalk
    {0.30, 0.70, 0.03, 0.30, false},  // car_interior
    {0.30, 0.40, 0.45, 0.72, true},   // pole
    {0.05, 0.25, 0.36, 0.46, true},   // fence
    {0.05, 0.95, 0.35, 0.80, false},  // other
}};

double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

double lognormal(Rng& rng, double median, double sigma) {
  return median * std::exp(sigma * gaussian(rng));
}

// Gaussian AR(1) with stationary mean/sd.
std::vector<double> ar1(Rng& rng, std::size_t n, double mean, double sd,
                        double phi) {
  std::vector<double> x(n);
  double dev = sd * gaussian(rng);
  const double innov = sd * std::sqrt(1.0 - phi * phi);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = mean + dev;
    dev = phi * dev + innov * gaussian(rng);
  }
  return x;
}

int poisson(Rng& rng, double mean) {
  return std::poisson_distribution<int>(std::max(mean, 0.0))(rng);
}

std::array<double, kNumSemanticClasses> class_weights(
    sim::EventKind kind, const std::array<double, kNumSemanticClasses>& eta) {
  std::array<double, kNumSemanticClasses> w;
  for (int c = 0; c < kNumSemanticClasses; ++c) w[c] = std::log(kBaseShares[c]) + eta[c];
  auto bump = [&](SemanticClass c, double f) { w[static_cast<int>(c)] += std::log(f); };
  switch (kind) {
    case sim::EventKind::kPedSidewalk:
    case sim::EventKind::kPedCrosswalk:
    case sim::EventKind::kPedAtIntersection:
    case sim::EventKind::kPedWalkingAtIntersection:
      bump(SemanticClass::kPedestrian, 2.5);
      bump(SemanticClass::kCrosswalk, 1.5);
      break;
    case sim::EventKind::kRightTurnRed:
      bump(SemanticClass::kTrafficLight, 2.5);
      break;
    case sim::EventKind::kFollowLeadVehicle:
    case sim::EventKind::kYieldLeftTurn:
      bump(SemanticClass::kCar, 1.5);
      break;
    case sim::EventKind::kTwoWayStop:
      bump(SemanticClass::kRoadSign, 2.0);
      break;
  }
  return w;
}

std::array<double, kNumSemanticClasses> to_probabilities(
    std::array<double, kNumSemanticClasses> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double z = 0.0;
  for (auto& l : logits) {
    l = std::exp(l - m);
    z += l;
  }
  for (auto& l : logits) l /= z;
  return logits;
}

// Multiplies the listed classes by exp(logit shift), renormalizing within the
// classes that are not frozen so frozen shares stay put.
void reweight(std::array<double, kNumSemanticClasses>& p,
              std::initializer_list<std::pair<SemanticClass, double>> shifts,
              std::initializer_list<SemanticClass> frozen) {
  std::array<bool, kNumSemanticClasses> fixed{};
  for (auto c : frozen) fixed[static_cast<int>(c)] = true;
  double before = 0.0, after = 0.0;
  for (int c = 0; c < kNumSemanticClasses; ++c)
    if (!fixed[c]) before += p[c];
  for (const auto& [c, d] : shifts) p[static_cast<int>(c)] *= std::exp(d);
  for (int c = 0; c < kNumSemanticClasses; ++c)
    if (!fixed[c]) after += p[c];
  for (int c = 0; c < kNumSemanticClasses; ++c)
    if (!fixed[c]) p[c] *= before / after;
}

// p^(1 - tau) over the classes that are not frozen, keeping their total mass.
void temper(std::array<double, kNumSemanticClasses>& p, double tau,
            std::initializer_list<SemanticClass> frozen) {
  std::array<bool, kNumSemanticClasses> fixed{};
  for (auto c : frozen) fixed[static_cast<int>(c)] = true;
  double before = 0.0, after = 0.0;
  for (int c = 0; c < kNumSemanticClasses; ++c) {
    if (fixed[c]) continue;
    before += p[c];
    p[c] = std::pow(p[c], 1.0 - tau);
    after += p[c];
  }
  for (int c = 0; c < kNumSemanticClasses; ++c)
    if (!fixed[c]) p[c] *= before / after;
}

int draw_class(Rng& rng, const std::array<double, kNumSemanticClasses>& p) {
  double u = uniform01(rng);
  for (int c = 0; c < kNumSemanticClasses; ++c) {
    u -= p[c];
    if (u <= 0.0) return c;
  }
  return kNumSemanticClasses - 1;
}

void generate_gaze(RawStreams& out, Rng& rng, sim::EventKind kind,
                   PreferenceResponse state, const GeneratorConfig& cfg) {
  const std::size_t n = out.size();
  const double dt = out.dt;
  const double duration = dt * static_cast<double>(n);
  const bool agg = state == PreferenceResponse::kMoreAggressive;
  const bool def = state == PreferenceResponse::kMoreDefensive;
  const auto& e = cfg.effects;

  std::array<double, kNumSemanticClasses> eta;
  for (auto& v : eta) v = gaussian(rng, 0.0, 0.3);
  const auto base_logits = class_weights(kind, eta);
  const auto p_base = to_probabilities(base_logits);
  auto p_effect = p_base;
  using C = SemanticClass;
  if (agg) {
    reweight(p_effect, {{C::kSky, kScale.sky_logit * e.sky_share}}, {});
    reweight(p_effect, {{C::kCarInterior, kScale.interior_logit * e.gaze_y}}, {C::kSky});
  }
  if (def) {
    reweight(p_effect,
             {{C::kRoad, kScale.road_logit * e.road_share},
              {C::kCar, kScale.car_logit * e.car_share}},
             {});
    temper(p_effect, std::clamp(kScale.entropy_temper * e.object_entropy, 0.0, 0.95),
           {C::kRoad, C::kCar});
  }
  const double signal_from =
      cfg.gaze_signal_window > 0.0 ? duration - cfg.gaze_signal_window : -1.0;

  std::size_t i = 0;
  double cx = 0.5, cy = 0.45;
  while (i < n) {
    const double t_rel = dt * static_cast<double>(i);
    const auto& p = t_rel >= signal_from ? p_effect : p_base;
    const int cls = draw_class(rng, p);
    const Box& b = kBoxes[cls];
    double nx = uniform(rng, b.x0, b.x1);
    if (b.mirrored && uniform01(rng) < 0.5) nx = 1.0 - nx;
    const double ny = uniform(rng, b.y0, b.y1);
    // Saccade toward the new centroid.
    if (i > 0) {
      const int steps = 2 + static_cast<int>(uniform_index(rng, 3));
      for (int k = 1; k <= steps && i < n; ++k, ++i) {
        const double u = static_cast<double>(k) / (steps + 1);
        out.gaze_x[i] = cx + u * (nx - cx);
        out.gaze_y[i] = cy + u * (ny - cy);
        out.gaze_object[i] = cls;
      }
    }
    cx = nx;
    cy = ny;
    const double dur = std::clamp(lognormal(rng, 0.32, 0.45), 0.14, 1.5);
    const auto len = static_cast<std::size_t>(std::lround(dur / dt));
    for (std::size_t k = 0; k < len && i < n; ++k, ++i) {
      out.gaze_x[i] = std::clamp(cx + gaussian(rng, 0.0, 0.00015), 0.0, 1.0);
      out.gaze_y[i] = std::clamp(cy + gaussian(rng, 0.0, 0.0008), 0.0, 1.0);
      out.gaze_object[i] = cls;
    }
  }
}

// Blinks: Poisson onsets, lognormal durations (median 0.13 s).
std::vector<bool> blink_mask(Rng& rng, std::size_t n, double dt, double fraction) {
  std::vector<bool> missing(n, false);
  if (fraction <= 0.0) return missing;
  const double median = 0.13, sigma = 0.45;
  const double mean_dur = median * std::exp(sigma * sigma / 2.0);
  const double rate = fraction / ((1.0 - fraction) * mean_dur);
  double t = std::exponential_distribution<double>(rate)(rng);
  const double duration = dt * static_cast<double>(n);
  while (t < duration) {
    const double d = std::clamp(lognormal(rng, median, sigma), 0.04, 0.8);
    const auto a = static_cast<std::size_t>(t / dt);
    const auto b = std::min(n, static_cast<std::size_t>((t + d) / dt) + 1);
    for (std::size_t k = a; k < b; ++k) missing[k] = true;
    t += d + std::exponential_distribution<double>(rate)(rng);
  }
  return missing;
}

double scr_shape(double t) {
  constexpr double tau_r = 0.75, tau_d = 2.5;
  if (t <= 0.0) return 0.0;
  static const double t_peak =
      tau_r * tau_d / (tau_d - tau_r) * std::log(tau_d / tau_r);
  static const double peak = std::exp(-t_peak / tau_d) - std::exp(-t_peak / tau_r);
  return (std::exp(-t / tau_d) - std::exp(-t / tau_r)) / peak;
}

std::vector<double> pedal_distance(Rng& rng, std::size_t n, double dt,
                                   double mean, double sd,
                                   std::span<const std::uint8_t> pressed) {
  auto x = ar1(rng, n, mean, sd, 0.97);
  // Approaches: the foot dips toward the pedal for about a second.
  const double duration = dt * static_cast<double>(n);
  double t = std::exponential_distribution<double>(1.0 / 12.0)(rng);
  while (t < duration) {
    const double len = uniform(rng, 0.6, 1.5);
    const double depth = uniform(rng, 0.4, 1.6);
    for (std::size_t k = static_cast<std::size_t>(t / dt);
         k < n && dt * static_cast<double>(k) < t + len; ++k) {
      const double u = (dt * static_cast<double>(k) - t) / len;
      const double bell = std::pow(std::sin(std::numbers::pi * u), 2);
      x[k] -= bell * (x[k] - depth);
    }
    t += len + std::exponential_distribution<double>(1.0 / 12.0)(rng);
  }
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = std::max(0.2, x[k]);
    if (pressed[k]) x[k] = 0.0;
  }
  return x;
}

void drop_samples(Rng& rng, std::vector<double>& x, double fraction) {
  if (fraction <= 0.0) return;
  const double mean_run = 3.0;
  const double p_start = fraction / mean_run;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (uniform01(rng) < p_start) {
      const std::size_t len = 1 + uniform_index(rng, 5);
      for (std::size_t j = k; j < std::min(x.size(), k + len); ++j)
        x[j] = std::nan("");
      k += len;
    }
  }
}

}  // namespace

std::string_view to_string(SemanticClass c) {
  return kClassNames[static_cast<std::size_t>(c)];
}

void DriverProfile::validate() const {
  if (!(response_noise >= 0.0 && response_noise <= 0.3))
    throw invalid_argument("response_noise must be in [0, 0.3]");
  const auto& s = signal;
  if (!(s.pupil_mm > 0.0) || !(s.pupil_sd > 0.0))
    throw invalid_argument("pupil baselines must be positive");
  const double hr = 60.0 / s.ibi_base;
  if (!(hr >= 40.0 && hr <= 140.0))
    throw invalid_argument("heart rate baseline must be in [40, 140] bpm");
  if (!(s.gsr_level > 0.0) || !(s.scr_rate > 0.0) || !(s.grip_sd > 0.0) ||
      !(s.brake_rest_cm > 0.0) || !(s.throttle_rest_cm > 0.0))
    throw invalid_argument("signal baselines must be positive");
}

EffectSizes EffectSizes::scaled(double k) const {
  EffectSizes e = *this;
  for (double* v : {&e.sky_share, &e.gaze_y, &e.pupil_std, &e.brake_max,
                    &e.brake_std, &e.grip_std, &e.road_share, &e.car_share,
                    &e.object_entropy, &e.scr_count})
    *v *= k;
  return e;
}

GeneratorConfig GeneratorConfig::from_config(const KeyValueConfig& kv) {
  GeneratorConfig g;
  auto& e = g.effects;
  const double all = kv.get_double("effects.scale", 1.0);
  e.sky_share = kv.get_double("effects.sky_share", e.sky_share);
  e.gaze_y = kv.get_double("effects.gaze_y", e.gaze_y);
  e.pupil_std = kv.get_double("effects.pupil_std", e.pupil_std);
  e.brake_max = kv.get_double("effects.brake_max", e.brake_max);
  e.brake_std = kv.get_double("effects.brake_std", e.brake_std);
  e.grip_std = kv.get_double("effects.grip_std", e.grip_std);
  e.road_share = kv.get_double("effects.road_share", e.road_share);
  e.car_share = kv.get_double("effects.car_share", e.car_share);
  e.object_entropy = kv.get_double("effects.object_entropy", e.object_entropy);
  e.scr_count = kv.get_double("effects.scr_count", e.scr_count);
  e = e.scaled(all);
  g.missing_gaze_fraction =
      kv.get_double("driver.missing_gaze_fraction", g.missing_gaze_fraction);
  g.missing_pedal_fraction =
      kv.get_double("driver.missing_pedal_fraction", g.missing_pedal_fraction);
  g.gaze_signal_window =
      kv.get_double("driver.gaze_signal_window", g.gaze_signal_window);
  g.takeover_floor = kv.get_double("driver.takeover_floor", g.takeover_floor);
  g.takeover_max = kv.get_double("driver.takeover_max", g.takeover_max);
  if (!(g.missing_gaze_fraction >= 0.0 && g.missing_gaze_fraction < 0.5))
    throw invalid_argument("driver.missing_gaze_fraction must be in [0, 0.5)");
  if (!(g.takeover_floor >= 0.0 && g.takeover_floor <= g.takeover_max &&
        g.takeover_max <= 1.0))
    throw invalid_argument("takeover probabilities must satisfy 0 <= floor <= max <= 1");
  return g;
}

CohortConfig CohortConfig::from_config(const KeyValueConfig& kv) {
  CohortConfig c;
  c.comfort_mix[0] = kv.get_double("cohort.comfort_HD", c.comfort_mix[0]);
  c.comfort_mix[1] = kv.get_double("cohort.comfort_LD", c.comfort_mix[1]);
  c.comfort_mix[2] = kv.get_double("cohort.comfort_LA", c.comfort_mix[2]);
  c.comfort_mix[3] = kv.get_double("cohort.comfort_HA", c.comfort_mix[3]);
  c.min_noise = kv.get_double("cohort.min_noise", c.min_noise);
  c.max_noise = kv.get_double("cohort.max_noise", c.max_noise);
  double total = 0.0;
  for (double w : c.comfort_mix) {
    if (w < 0.0) throw invalid_argument("comfort mix weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw invalid_argument("comfort mix must not be all zero");
  if (!(c.min_noise >= 0.0 && c.min_noise <= c.max_noise && c.max_noise <= 0.3))
    throw invalid_argument("cohort noise range must lie in [0, 0.3]");
  return c;
}

DriverProfile make_profile(int id, std::uint64_t cohort_seed,
                           const CohortConfig& cfg) {
  Rng rng(derive_seed({cohort_seed, 0x70726f66ULL, static_cast<std::uint64_t>(id)}));
  DriverProfile p;
  p.id = id;
  p.seed = derive_seed({cohort_seed, static_cast<std::uint64_t>(id)});
  std::discrete_distribution<int> mix(cfg.comfort_mix.begin(), cfg.comfort_mix.end());
  p.comfort_style = static_cast<DrivingStyle>(mix(rng));
  p.response_noise = uniform(rng, cfg.min_noise, cfg.max_noise);
  auto& s = p.signal;
  s.pupil_mm = uniform(rng, 2.8, 4.5);
  s.pupil_sd = uniform(rng, 0.15, 0.25);
  s.gsr_level = uniform(rng, 2.0, 10.0);
  s.scr_rate = uniform(rng, 1.0 / 16.0, 1.0 / 9.0);
  s.ibi_base = uniform(rng, 0.65, 1.0);
  s.grip_level = uniform(rng, 0.3, 0.6);
  s.grip_sd = uniform(rng, 0.04, 0.07);
  s.brake_rest_cm = uniform(rng, 4.0, 8.0);
  s.throttle_rest_cm = uniform(rng, 2.5, 4.5);
  p.validate();
  return p;
}

std::vector<DriverProfile> make_cohort(int n, std::uint64_t seed,
                                       const CohortConfig& cfg) {
  if (n <= 0) throw invalid_argument("cohort size must be positive");
  std::vector<DriverProfile> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(make_profile(i, seed, cfg));
  return out;
}

PreferenceResponse latent_preference(const DriverProfile& profile,
                                     DrivingStyle current, Rng& rng) {
  const int diff = control::level(profile.comfort_style) - control::level(current);
  auto r = diff > 0   ? PreferenceResponse::kMoreAggressive
           : diff < 0 ? PreferenceResponse::kMoreDefensive
                      : PreferenceResponse::kSame;
  if (uniform01(rng) < profile.response_noise) {
    const int other = (static_cast<int>(r) + 1 + static_cast<int>(uniform_index(rng, 2))) % 3;
    r = static_cast<PreferenceResponse>(other);
  }
  return r;
}

int trust_response(PreferenceResponse state, Rng& rng) {
  const double u = uniform01(rng);
  switch (state) {
    case PreferenceResponse::kMoreAggressive:
      return u < 0.6 ? 1 : (u < 0.9 ? 2 : 0);
    case PreferenceResponse::kMoreDefensive:
      return u < 0.6 ? -1 : (u < 0.9 ? -2 : 0);
    case PreferenceResponse::kSame:
      return u < 0.7 ? 0 : (u < 0.85 ? 1 : -1);
  }
  return 0;
}

namespace {
double mismatch_curve(int levels, const GeneratorConfig& cfg) {
  return cfg.takeover_floor +
         (cfg.takeover_max - cfg.takeover_floor) * static_cast<double>(levels) / 3.0;
}
}  // namespace

double brake_takeover_probability(DrivingStyle comfort, DrivingStyle current,
                                  const GeneratorConfig& cfg) {
  const int over = control::level(current) - control::level(comfort);
  if (over == 0) return cfg.takeover_floor / 2.0;
  return over > 0 ? mismatch_curve(over, cfg) : 0.0;
}

double throttle_takeover_probability(DrivingStyle comfort, DrivingStyle current,
                                     const GeneratorConfig& cfg) {
  const int under = control::level(comfort) - control::level(current);
  if (under == 0) return cfg.takeover_floor / 2.0;
  return under > 0 ? mismatch_curve(under, cfg) : 0.0;
}

std::vector<PedalInterval> emit_takeover(const DriverProfile& profile,
                                         double event_start,
                                         double expected_duration,
                                         DrivingStyle current,
                                         const GeneratorConfig& cfg, Rng& rng) {
  const double pb = brake_takeover_probability(profile.comfort_style, current, cfg);
  const double pt = throttle_takeover_probability(profile.comfort_style, current, cfg);
  const double u = uniform01(rng);
  std::vector<PedalInterval> out;
  Pedal pedal;
  if (u < pb) pedal = Pedal::kBrake;
  else if (u < pb + pt) pedal = Pedal::kThrottle;
  else return out;
  const double latest = std::max(1.5, 0.6 * expected_duration);
  const double start = event_start + uniform(rng, 1.0, latest);
  out.push_back({pedal, start, start + uniform(rng, 0.6, 2.5)});
  return out;
}

RawStreams emit_streams(const DriverProfile& profile,
                        std::span<const sim::TickRecord> trace,
                        PreferenceResponse state, sim::EventKind kind,
                        std::uint64_t seed, const GeneratorConfig& cfg) {
  if (trace.size() < 2) throw invalid_argument("event trace needs at least two ticks");
  RawStreams out;
  const std::size_t n = trace.size();
  out.t0 = trace.front().t;
  out.dt = trace[1].t - trace[0].t;
  const double dt = out.dt;
  const double duration = dt * static_cast<double>(n);
  const bool agg = state == PreferenceResponse::kMoreAggressive;
  const bool def = state == PreferenceResponse::kMoreDefensive;
  const auto& e = cfg.effects;
  const auto& b = profile.signal;

  // One engine per channel so enabling or tuning one channel leaves the
  // others' draws untouched.
  auto channel_rng = [&](std::uint64_t tag) { return Rng(derive_seed({seed, tag})); };

  out.gaze_x.assign(n, 0.0);
  out.gaze_y.assign(n, 0.0);
  out.gaze_object.assign(n, 0);
  {
    Rng rng = channel_rng(1);
    generate_gaze(out, rng, kind, state, cfg);
  }

  {
    Rng rng = channel_rng(2);
    const double mean = b.pupil_mm + 0.25 * gaussian(rng);
    const double sd = b.pupil_sd * std::exp(0.15 * gaussian(rng) +
                                            (agg ? kScale.pupil_log_sd * e.pupil_std : 0.0));
    out.pupil_left = ar1(rng, n, mean, sd, 0.9);
    const auto offset = ar1(rng, n, 0.08, 0.15 * sd, 0.9);
    out.pupil_right.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.pupil_right[i] = out.pupil_left[i] + offset[i];
  }

  {
    Rng rng = channel_rng(3);
    const auto missing = blink_mask(rng, n, dt, cfg.missing_gaze_fraction);
    for (std::size_t i = 0; i < n; ++i) {
      if (!missing[i]) continue;
      out.gaze_x[i] = out.gaze_y[i] = std::nan("");
      out.gaze_object[i] = -1;
      out.pupil_left[i] = out.pupil_right[i] = std::nan("");
    }
  }

  {
    Rng rng = channel_rng(4);
    const double level = std::max(0.5, b.gsr_level + 0.6 * gaussian(rng));
    const double rate = b.scr_rate * std::exp(0.25 * gaussian(rng) +
                                              (def ? kScale.scr_log_rate * e.scr_count : 0.0));
    constexpr double kLead = 4.0;  // responses starting before the window
    const int count = poisson(rng, rate * (duration + kLead));
    std::vector<std::pair<double, double>> bumps;
    for (int k = 0; k < count; ++k)
      bumps.emplace_back(uniform(rng, -kLead, duration),
                         0.05 + std::exponential_distribution<double>(4.0)(rng));
    out.gsr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = dt * static_cast<double>(i);
      double g = level - 0.004 * t;
      for (const auto& [onset, amp] : bumps) g += amp * scr_shape(t - onset);
      out.gsr[i] = g;
    }
  }

  {
    Rng rng = channel_rng(5);
    const double base = std::clamp(b.ibi_base + 0.04 * gaussian(rng), 0.45, 1.4);
    double t = -uniform(rng, 0.0, base);
    const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double end = dt * static_cast<double>(n - 1);
    while (true) {
      const double ibi = std::clamp(
          base + gaussian(rng, 0.0, 0.03) +
              0.02 * std::sin(2.0 * std::numbers::pi * 0.25 * t + phase),
          0.43, 1.5);
      t += ibi;
      if (t > end) break;
      if (t >= 0.0) {
        out.beat_times.push_back(out.t0 + t);
        out.ibi.push_back(ibi);
      }
    }
  }

  {
    Rng rng = channel_rng(6);
    const double mean = b.grip_level + 0.05 * gaussian(rng);
    const double sd = b.grip_sd * std::exp(0.15 * gaussian(rng) -
                                           (agg ? kScale.grip_log_sd * e.grip_std : 0.0));
    out.grip = ar1(rng, n, mean, sd, 0.95);
    for (auto& g : out.grip) g = std::max(0.0, g);
  }

  out.human_throttle.resize(n);
  out.human_brake.resize(n);
  out.can_throttle.resize(n);
  out.can_brake.resize(n);
  out.can_steering.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = trace[i];
    out.human_throttle[i] = r.human_throttle;
    out.human_brake[i] = r.human_brake;
    out.can_throttle[i] = std::clamp(r.accel / 5.0, 0.0, 1.0);
    out.can_brake[i] = std::clamp(-r.accel / 6.0, 0.0, 1.0);
    out.can_steering[i] = std::clamp(r.steer / 0.61, -1.0, 1.0);
  }

  {
    Rng rng = channel_rng(7);
    const double mean = b.brake_rest_cm + 0.8 * gaussian(rng) -
                        (agg ? kScale.brake_mean_cm * e.brake_max : 0.0);
    const double sd = 0.6 * std::exp(0.15 * gaussian(rng) -
                                     (agg ? kScale.brake_log_sd * e.brake_std : 0.0));
    out.brake_distance = pedal_distance(rng, n, dt, mean, sd, out.human_brake);
    drop_samples(rng, out.brake_distance, cfg.missing_pedal_fraction);
  }
  {
    Rng rng = channel_rng(8);
    const double mean = b.throttle_rest_cm + 0.6 * gaussian(rng);
    const double sd = 0.5 * std::exp(0.15 * gaussian(rng));
    out.throttle_distance = pedal_distance(rng, n, dt, mean, sd, out.human_throttle);
    drop_samples(rng, out.throttle_distance, cfg.missing_pedal_fraction);
  }
  return out;
}

}  // namespace driveadapt::driver
