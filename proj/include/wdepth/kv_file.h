// Copyright 2026 The wdepth Authors
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

#ifndef WDEPTH_KV_FILE_H_
#define WDEPTH_KV_FILE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wdepth {

// Round-trip decimal form of a double, identical on every run.
std::string format_number(double value);
std::string format_list(const std::vector<double>& values);

// `key = value` lines; `#` starts a comment; blank lines are ignored. Keys
// must be unique. Parse errors throw std::invalid_argument naming the line.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in, const std::string& source = "input");
  static KeyValueFile load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key) const;
  // Comma-separated doubles.
  std::vector<double> get_list(const std::string& key) const;
  std::vector<double> get_list_or(const std::string& key, std::vector<double> fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }
  // Keys that were never read through a getter.
  std::vector<std::string> unread_keys() const;

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, bool> read_;
};

// Writes entries in the given order as `key = value` lines.
void write_key_values(std::ostream& out,
                      const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace wdepth

#endif  // WDEPTH_KV_FILE_H_
