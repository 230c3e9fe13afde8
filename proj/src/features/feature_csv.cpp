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

#include "features/feature_csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "common/error.hpp"
#include "driver/streams_io.hpp"

namespace driveadapt::features {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> f;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    f.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return f;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line, const std::string& column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw invalid_argument("feature csv line " + std::to_string(line) + ": bad " + column +
                           " '" + s + "'");
  return v;
}

std::optional<int> parse_optional_int(const std::string& s, std::size_t line,
                                      const std::string& column) {
  if (s.empty()) return std::nullopt;
  return parse_number<int>(s, line, column);
}

}  // namespace

void write_feature_csv(std::ostream& out, const FeatureTable& t) {
  bool first = true;
  for (const auto& c : label_columns()) {
    out << (first ? "" : ",") << c;
    first = false;
  }
  for (const auto& n : t.names) out << ',' << n;
  out << '\n';
  for (const auto& r : t.rows) {
    if (r.values.size() != t.names.size())
      throw invalid_argument("feature row width does not match the header");
    out << r.participant << ',' << r.session << ',' << r.event << ','
        << adapt::to_string(r.mode) << ',' << sim::to_string(r.event_kind) << ','
        << adapt::to_string(r.preference) << ',';
    if (r.trust) out << *r.trust;
    out << ',';
    if (r.trust_level) out << *r.trust_level;
    out << ',' << int{r.takeover_brake} << ',' << int{r.takeover_throttle};
    for (double v : r.values) out << ',' << driver::format_double(v);
    out << '\n';
  }
}

void write_feature_csv(const std::string& path, const FeatureTable& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  write_feature_csv(out, t);
  if (!out) throw io_error("write failed: " + path);
}

FeatureTable read_feature_csv(std::istream& in) {
  FeatureTable t;
  std::string line;
  if (!std::getline(in, line)) throw invalid_argument("feature csv is empty");
  const auto header = split(line);
  const auto& labels = label_columns();
  if (header.size() < labels.size() ||
      !std::equal(labels.begin(), labels.end(), header.begin()))
    throw invalid_argument("feature csv header must start with the label columns");
  t.names.assign(header.begin() + static_cast<std::ptrdiff_t>(labels.size()), header.end());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size())
      throw invalid_argument("feature csv line " + std::to_string(lineno) + ": expected " +
                             std::to_string(header.size()) + " fields");
    FeatureRow r;
    r.participant = parse_number<int>(f[0], lineno, "participant");
    r.session = parse_number<int>(f[1], lineno, "session");
    r.event = parse_number<int>(f[2], lineno, "event");
    const auto mode = adapt::parse_session_mode(f[3]);
    if (!mode) throw invalid_argument("feature csv line " + std::to_string(lineno) +
                                      ": unknown mode '" + f[3] + "'");
    r.mode = *mode;
    const auto kind = sim::parse_event_kind(f[4]);
    if (!kind) throw invalid_argument("feature csv line " + std::to_string(lineno) +
                                      ": unknown event kind '" + f[4] + "'");
    r.event_kind = *kind;
    const auto pref = adapt::parse_preference(f[5]);
    if (!pref) throw invalid_argument("feature csv line " + std::to_string(lineno) +
                                      ": unknown preference '" + f[5] + "'");
    r.preference = *pref;
    r.trust = parse_optional_int(f[6], lineno, "trust");
    r.trust_level = parse_optional_int(f[7], lineno, "trust_level");
    r.takeover_brake = f[8] == "1";
    r.takeover_throttle = f[9] == "1";
    for (std::size_t i = labels.size(); i < f.size(); ++i)
      r.values.push_back(parse_number<double>(f[i], lineno, header[i]));
    t.rows.push_back(std::move(r));
  }
  return t;
}

FeatureTable read_feature_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read feature csv " + path);
  return read_feature_csv(in);
}

}  // namespace driveadapt::features
