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

#include "common/config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>

#include "common/error.hpp"

namespace driveadapt {

namespace pt = boost::property_tree;

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  try {
    pt::read_ini(in, cfg.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw invalid_argument(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

std::optional<std::string> KeyValueConfig::raw(const std::string& key) const {
  seen_.insert(key);
  auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
  return v ? std::optional<std::string>(*v) : std::nullopt;
}

bool KeyValueConfig::contains(const std::string& key) const {
  return raw(key).has_value();
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
  auto v = raw(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument(*v);
    return d;
  } catch (const std::exception&) {
    throw invalid_argument("config key '" + key + "': expected a number, got '" +
                           *v + "'");
  }
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
  auto v = raw(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    int i = std::stoi(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument(*v);
    return i;
  } catch (const std::exception&) {
    throw invalid_argument("config key '" + key +
                           "': expected an integer, got '" + *v + "'");
  }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  auto v = raw(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw invalid_argument("config key '" + key + "': expected a boolean, got '" +
                         *v + "'");
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  auto v = raw(key);
  return v ? *v : fallback;
}

void KeyValueConfig::reject_unknown() const {
  std::vector<std::string> unknown;
  for (const auto& [section, children] : tree_) {
    if (children.empty()) {
      if (!seen_.count(section)) unknown.push_back(section);
      continue;
    }
    for (const auto& [key, value] : children) {
      std::string full = section + "." + key;
      if (!seen_.count(full)) unknown.push_back(full);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown config key(s):";
    for (const auto& k : unknown) msg += " " + k;
    throw invalid_argument(msg);
  }
}

}  // namespace driveadapt
