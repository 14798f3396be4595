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

#ifndef DSPT_TOOLS_CONFIG_HPP_
#define DSPT_TOOLS_CONFIG_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

namespace dspt::cli {

/// Invalid or missing configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Read-only view of one YAML mapping that records every value it hands
/// out, defaults included, into a JSON object (the resolved config).
class Section {
 public:
  Section(YAML::Node node, nlohmann::json* resolved, std::string path);

  bool has(const std::string& key) const;
  Section child(const std::string& key) const;

  double get_double(const std::string& key, double def) const;
  double require_double(const std::string& key) const;
  long long get_int(const std::string& key, long long def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::string get_string(const std::string& key, const std::string& def) const;
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& def) const;
  std::vector<int> get_ints(const std::string& key, const std::vector<int>& def) const;
  /// A list of numbers, or {start, stop, count[, log]}.
  std::vector<double> get_grid(const std::string& key, const std::vector<double>& def) const;

  /// Records a value that was derived rather than read.
  void record(const std::string& key, const nlohmann::json& value) const;
  /// Throws on keys other than the allowed ones.
  void check_keys(const std::vector<std::string>& allowed) const;
  std::string where(const std::string& key) const;

 private:
  YAML::Node lookup(const std::string& key) const;
  YAML::Node node_;
  nlohmann::json* resolved_;
  std::string path_;
};

}  // namespace dspt::cli

#endif  // DSPT_TOOLS_CONFIG_HPP_
