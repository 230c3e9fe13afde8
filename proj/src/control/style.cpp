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

#include "control/style.hpp"

#include <algorithm>

namespace driveadapt::control {

DrivingStyle shift_style(DrivingStyle s, int steps) {
  const int l = std::clamp(level(s) + steps, 0, 3);
  return static_cast<DrivingStyle>(l);
}

std::string_view to_string(DrivingStyle s) {
  switch (s) {
    case DrivingStyle::kHD: return "HD";
    case DrivingStyle::kLD: return "LD";
    case DrivingStyle::kLA: return "LA";
    case DrivingStyle::kHA: return "HA";
  }
  return "?";
}

std::optional<DrivingStyle> parse_style(std::string_view name) {
  for (auto s : kAllStyles)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

StyleParams style_params(DrivingStyle s) {
  //                 speed accel decel  MDD int  ped   car  stop
  switch (s) {
    case DrivingStyle::kLA: return {13.0, 4.0, 5.0, 15.0, 22.0, 9.0, 2.0};
    case DrivingStyle::kHA: return {14.0, 5.0, 6.0, 20.0, 28.0, 8.0, 1.8};
    case DrivingStyle::kLD: return {12.0, 3.0, 2.0, 8.0, 15.0, 11.0, 2.0};
    case DrivingStyle::kHD: return {11.0, 1.0, 1.5, 5.0, 12.5, 12.0, 3.0};
  }
  return {};
}

}  // namespace driveadapt::control
