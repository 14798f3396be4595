// Copyright 2026 The dspt Authors
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

#include "config.hpp"

#include <algorithm>
#include <cmath>

namespace dspt::cli {

Section::Section(YAML::Node node, nlohmann::json* resolved, std::string path)
    : node_(std::move(node)), resolved_(resolved), path_(std::move(path)) {
  if (node_ && !node_.IsNull() && !node_.IsMap()) {
    throw ConfigError("section '" + path_ + "' (line " + std::to_string(node_.Mark().line + 1) +
                      ") must be a mapping");
  }
  if (!resolved_->is_object()) *resolved_ = nlohmann::json::object();
}

YAML::Node Section::lookup(const std::string& key) const {
  if (!node_ || node_.IsNull()) return YAML::Node();
  return node_[key];
}

std::string Section::where(const std::string& key) const {
  std::string field = path_.empty() ? key : path_ + "." + key;
  YAML::Node n = lookup(key);
  if (n && n.Mark().line >= 0) return "field '" + field + "' (line " + std::to_string(n.Mark().line + 1) + ")";
  return "field '" + field + "'";
}

bool Section::has(const std::string& key) const {
  YAML::Node n = lookup(key);
  return n && !n.IsNull();
}

Section Section::child(const std::string& key) const {
  return Section(lookup(key), &(*resolved_)[key], path_.empty() ? key : path_ + "." + key);
}

namespace {

template <class T>
T convert(const YAML::Node& n, const std::string& where, const char* what) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + ": expected " + what);
  }
}

}  // namespace

double Section::get_double(const std::string& key, double def) const {
  double v = has(key) ? convert<double>(lookup(key), where(key), "a number") : def;
  if (!std::isfinite(v)) throw ConfigError(where(key) + ": value must be finite");
  (*resolved_)[key] = v;
  return v;
}

double Section::require_double(const std::string& key) const {
  if (!has(key)) throw ConfigError(where(key) + ": required number is missing");
  return get_double(key, 0.0);
}

long long Section::get_int(const std::string& key, long long def) const {
  long long v = has(key) ? convert<long long>(lookup(key), where(key), "an integer") : def;
  (*resolved_)[key] = v;
  return v;
}

bool Section::get_bool(const std::string& key, bool def) const {
  bool v = has(key) ? convert<bool>(lookup(key), where(key), "true or false") : def;
  (*resolved_)[key] = v;
  return v;
}

std::string Section::get_string(const std::string& key, const std::string& def) const {
  std::string v = has(key) ? convert<std::string>(lookup(key), where(key), "a string") : def;
  (*resolved_)[key] = v;
  return v;
}

std::vector<std::string> Section::get_strings(const std::string& key, const std::vector<std::string>& def) const {
  std::vector<std::string> v = def;
  if (has(key)) {
    YAML::Node n = lookup(key);
    if (!n.IsSequence()) throw ConfigError(where(key) + ": expected a list of strings");
    v.clear();
    for (const auto& e : n) v.push_back(convert<std::string>(e, where(key), "a list of strings"));
  }
  (*resolved_)[key] = v;
  return v;
}

std::vector<int> Section::get_ints(const std::string& key, const std::vector<int>& def) const {
  std::vector<int> v = def;
  if (has(key)) {
    YAML::Node n = lookup(key);
    if (!n.IsSequence()) throw ConfigError(where(key) + ": expected a list of integers");
    v.clear();
    for (const auto& e : n) v.push_back(convert<int>(e, where(key), "a list of integers"));
  }
  (*resolved_)[key] = v;
  return v;
}

std::vector<double> Section::get_grid(const std::string& key, const std::vector<double>& def) const {
  std::vector<double> v = def;
  if (has(key)) {
    YAML::Node n = lookup(key);
    v.clear();
    if (n.IsSequence()) {
      for (const auto& e : n) v.push_back(convert<double>(e, where(key), "a list of numbers"));
    } else if (n.IsMap()) {
      if (!n["start"] || !n["stop"] || !n["count"]) {
        throw ConfigError(where(key) + ": a grid needs start, stop and count");
      }
      double a = convert<double>(n["start"], where(key), "a number for start");
      double b = convert<double>(n["stop"], where(key), "a number for stop");
      int c = convert<int>(n["count"], where(key), "an integer count");
      bool lg = n["log"] ? convert<bool>(n["log"], where(key), "true or false for log") : false;
      if (c < 1) throw ConfigError(where(key) + ": count must be positive");
      if (lg && (a <= 0 || b <= 0)) throw ConfigError(where(key) + ": a log grid needs positive ends");
      for (int k = 0; k < c; ++k) {
        double f = c == 1 ? 0.0 : static_cast<double>(k) / (c - 1);
        v.push_back(lg ? a * std::pow(b / a, f) : a + f * (b - a));
      }
    } else {
      throw ConfigError(where(key) + ": expected a list or {start, stop, count}");
    }
  }
  (*resolved_)[key] = v;
  return v;
}

void Section::record(const std::string& key, const nlohmann::json& value) const { (*resolved_)[key] = value; }

void Section::check_keys(const std::vector<std::string>& allowed) const {
  if (!node_ || node_.IsNull()) return;
  for (const auto& kv : node_) {
    auto k = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError("unknown " + where(k));
    }
  }
}

}  // namespace dspt::cli
