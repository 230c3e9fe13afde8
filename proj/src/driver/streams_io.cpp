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

#include "driver/streams_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "common/error.hpp"

namespace driveadapt::driver {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw io_error("cannot write " + p.string());
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p,
                                               std::size_t columns) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw io_error("missing stream file " + p.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != columns)
      throw invalid_argument(p.string() + ": expected " + std::to_string(columns) +
                             " columns, got " + std::to_string(f.size()));
    rows.push_back(std::move(f));
  }
  return rows;
}

double parse_cell(const std::string& s, const fs::path& file) {
  if (s.empty()) return std::nan("");
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw invalid_argument(file.string() + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw invalid_argument("cannot format number");
  return std::string(buf, ptr);
}

void write_streams(const fs::path& dir, const RawStreams& s) {
  fs::create_directories(dir);
  const std::size_t n = s.size();
  auto t_at = [&](std::size_t i) { return format_double(s.t0 + s.dt * static_cast<double>(i)); };

  {
    json m{{"v", kFormatVersion},
           {"t0", s.t0},
           {"dt", s.dt},
           {"samples", n},
           {"beats", s.beat_times.size()},
           {"files", {"gaze.csv", "pupil.csv", "gsr.csv", "grip.csv", "pedal.csv",
                      "can.csv", "ibi.csv"}}};
    open_out(dir / "manifest.json") << m.dump(2) << '\n';
  }
  {
    auto out = open_out(dir / "gaze.csv");
    out << "t,x,y,object\n";
    for (std::size_t i = 0; i < n; ++i) {
      out << t_at(i) << ',' << cell(s.gaze_x[i]) << ',' << cell(s.gaze_y[i]) << ',';
      if (s.gaze_object[i] >= 0)
        out << to_string(static_cast<SemanticClass>(s.gaze_object[i]));
      out << '\n';
    }
  }
  {
    auto out = open_out(dir / "pupil.csv");
    out << "t,left,right\n";
    for (std::size_t i = 0; i < n; ++i)
      out << t_at(i) << ',' << cell(s.pupil_left[i]) << ',' << cell(s.pupil_right[i]) << '\n';
  }
  {
    auto out = open_out(dir / "gsr.csv");
    out << "t,gsr\n";
    for (std::size_t i = 0; i < n; ++i) out << t_at(i) << ',' << cell(s.gsr[i]) << '\n';
  }
  {
    auto out = open_out(dir / "grip.csv");
    out << "t,grip\n";
    for (std::size_t i = 0; i < n; ++i) out << t_at(i) << ',' << cell(s.grip[i]) << '\n';
  }
  {
    auto out = open_out(dir / "pedal.csv");
    out << "t,throttle_distance,brake_distance,human_throttle,human_brake\n";
    for (std::size_t i = 0; i < n; ++i)
      out << t_at(i) << ',' << cell(s.throttle_distance[i]) << ','
          << cell(s.brake_distance[i]) << ',' << int{s.human_throttle[i]} << ','
          << int{s.human_brake[i]} << '\n';
  }
  {
    auto out = open_out(dir / "can.csv");
    out << "t,throttle,brake,steering\n";
    for (std::size_t i = 0; i < n; ++i)
      out << t_at(i) << ',' << cell(s.can_throttle[i]) << ',' << cell(s.can_brake[i])
          << ',' << cell(s.can_steering[i]) << '\n';
  }
  {
    auto out = open_out(dir / "ibi.csv");
    out << "beat_time,ibi\n";
    for (std::size_t i = 0; i < s.ibi.size(); ++i)
      out << cell(s.beat_times[i]) << ',' << cell(s.ibi[i]) << '\n';
  }
}

RawStreams read_streams(const fs::path& dir) {
  RawStreams s;
  std::size_t n = 0;
  {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw io_error("missing stream manifest " + (dir / "manifest.json").string());
    json m;
    try {
      m = json::parse(in);
      if (m.at("v").get<int>() != kFormatVersion)
        throw invalid_argument("unsupported stream format version in " + dir.string());
      s.t0 = m.at("t0");
      s.dt = m.at("dt");
      n = m.at("samples");
    } catch (const json::exception& e) {
      throw invalid_argument("bad stream manifest in " + dir.string() + ": " + e.what());
    }
  }
  auto check = [&](const auto& rows, const fs::path& p) {
    if (rows.size() != n)
      throw invalid_argument(p.string() + ": expected " + std::to_string(n) + " rows");
  };
  {
    const auto p = dir / "gaze.csv";
    const auto rows = read_csv(p, 4);
    check(rows, p);
    for (const auto& r : rows) {
      s.gaze_x.push_back(parse_cell(r[1], p));
      s.gaze_y.push_back(parse_cell(r[2], p));
      int cls = -1;
      if (!r[3].empty()) {
        for (int c = 0; c < kNumSemanticClasses; ++c)
          if (to_string(static_cast<SemanticClass>(c)) == r[3]) cls = c;
        if (cls < 0) throw invalid_argument(p.string() + ": unknown object '" + r[3] + "'");
      }
      s.gaze_object.push_back(cls);
    }
  }
  {
    const auto p = dir / "pupil.csv";
    const auto rows = read_csv(p, 3);
    check(rows, p);
    for (const auto& r : rows) {
      s.pupil_left.push_back(parse_cell(r[1], p));
      s.pupil_right.push_back(parse_cell(r[2], p));
    }
  }
  for (auto [name, vec] : {std::pair{"gsr.csv", &s.gsr}, std::pair{"grip.csv", &s.grip}}) {
    const auto p = dir / name;
    const auto rows = read_csv(p, 2);
    check(rows, p);
    for (const auto& r : rows) vec->push_back(parse_cell(r[1], p));
  }
  {
    const auto p = dir / "pedal.csv";
    const auto rows = read_csv(p, 5);
    check(rows, p);
    for (const auto& r : rows) {
      s.throttle_distance.push_back(parse_cell(r[1], p));
      s.brake_distance.push_back(parse_cell(r[2], p));
      s.human_throttle.push_back(r[3] == "1");
      s.human_brake.push_back(r[4] == "1");
    }
  }
  {
    const auto p = dir / "can.csv";
    const auto rows = read_csv(p, 4);
    check(rows, p);
    for (const auto& r : rows) {
      s.can_throttle.push_back(parse_cell(r[1], p));
      s.can_brake.push_back(parse_cell(r[2], p));
      s.can_steering.push_back(parse_cell(r[3], p));
    }
  }
  {
    const auto p = dir / "ibi.csv";
    for (const auto& r : read_csv(p, 2)) {
      s.beat_times.push_back(parse_cell(r[0], p));
      s.ibi.push_back(parse_cell(r[1], p));
    }
  }
  return s;
}

}  // namespace driveadapt::driver
