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

#include <filesystem>

#include "driver/driver_model.hpp"

namespace driveadapt::driver {

// One directory per event:
//   manifest.json  time base, sample counts, channel files
//   gaze.csv       t,x,y,object
//   pupil.csv      t,left,right
//   gsr.csv        t,gsr
//   grip.csv       t,grip
//   pedal.csv      t,throttle_distance,brake_distance,human_throttle,human_brake
//   can.csv        t,throttle,brake,steering
//   ibi.csv        beat_time,ibi
// Missing samples are empty cells (an empty object cell for gaze labels).
void write_streams(const std::filesystem::path& dir, const RawStreams& s);
RawStreams read_streams(const std::filesystem::path& dir);

// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace driveadapt::driver
