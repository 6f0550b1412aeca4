// Copyright 2026 The syndeepc Authors
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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace syndeepc {

// Flat `section.key = value` configuration. Every key has a default; unknown
// keys are rejected so that typos surface as ConfigError.
class Config {
 public:
  // All recognised keys with their default values.
  static Config defaults();

  // Reads `key = value` lines on top of the defaults; `#` starts a comment.
  static Config parse(std::istream& is);
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  // "key=value", with or without a leading "--".
  void apply_override(const std::string& assignment);

  bool known(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  // Comma-separated numbers; empty value gives an empty list.
  std::vector<double> get_list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  // Sorted `key = value` lines.
  void write(std::ostream& os) const;
  // FNV-1a 64 of the canonical text, as 16 hex digits.
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace syndeepc
