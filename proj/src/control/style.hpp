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
#include <optional>
#include <string_view>

namespace driveadapt::control {

// Ordered from defensive to aggressive; arithmetic on the underlying value
// follows that order.
enum class DrivingStyle : int { kHD = 0, kLD = 1, kLA = 2, kHA = 3 };

inline constexpr std::array<DrivingStyle, 4> kAllStyles = {
    DrivingStyle::kHD, DrivingStyle::kLD, DrivingStyle::kLA, DrivingStyle::kHA};

constexpr int level(DrivingStyle s) { return static_cast<int>(s); }

// Moves `steps` levels along HD-LD-LA-HA, saturating at both ends.
DrivingStyle shift_style(DrivingStyle s, int steps);

std::string_view to_string(DrivingStyle s);
std::optional<DrivingStyle> parse_style(std::string_view name);

struct StyleParams {
  double set_speed;           // m/s
  double max_accel;           // m/s^2
  double max_decel;           // m/s^2, positive magnitude
  double mdd_intersection;    // m
  double mdd_pedestrian;      // m
  double mdd_car;             // m
  double stop_sign_duration;  // s
};

// IDM parameters of one driving style.
StyleParams style_params(DrivingStyle s);

}  // namespace driveadapt::control
