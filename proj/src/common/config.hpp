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

#include <optional>
#include <set>
#include <string>

#include <boost/property_tree/ptree.hpp>

namespace driveadapt {

// Human-readable key/value configuration ("key = value" lines, optional
// [section] headers, '#' or ';' comments). Keys are addressed as
// "section.key". Every key read is remembered so that typos can be reported
// by `reject_unknown()`.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig load(const std::string& path);
  static KeyValueConfig parse(const std::string& text);

  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  bool contains(const std::string& key) const;

  // Throws if the file holds keys no module asked for.
  void reject_unknown() const;

 private:
  std::optional<std::string> raw(const std::string& key) const;

  boost::property_tree::ptree tree_;
  mutable std::set<std::string> seen_;
};

}  // namespace driveadapt
