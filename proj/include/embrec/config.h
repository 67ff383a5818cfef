/*
 * Copyright 2026 The embrec Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef EMBREC_CONFIG_H_
#define EMBREC_CONFIG_H_

// Layered key/value configuration: built-in defaults, then an INI-style file
// (`[section]` headers, `key = value` lines), then EMBREC_<KEY> environment
// variables, then command-line flags. Keys are unique across sections, so a
// flag `--epochs` and the variable EMBREC_EPOCHS both address [train] epochs.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace embrec {

struct ConfigKey {
  std::string_view name;
  std::string_view section;
  std::string_view default_value;
  std::string_view help;
};

// Every recognized key, in documentation order.
const std::vector<ConfigKey>& ConfigKeys();

class ConfigValues {
 public:
  ConfigValues();

  // Throws ConfigError for unreadable files, unknown keys or keys placed in
  // the wrong section.
  void LoadFile(const std::filesystem::path& path);
  // Reads EMBREC_<UPPERCASE KEY> for every known key.
  void LoadEnvironment();
  // Throws ConfigError for unknown keys.
  void Set(std::string_view key, std::string value);

  const std::string& Get(std::string_view key) const;
  std::size_t GetCount(std::string_view key) const;
  std::uint64_t GetU64(std::string_view key) const;
  double GetDouble(std::string_view key) const;
  // Comma separated counts, e.g. "3,6".
  std::vector<std::size_t> GetCountList(std::string_view key) const;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

// Stable 64-bit child seed for a named stage.
std::uint64_t DeriveSeed(std::uint64_t root, std::string_view stage);

}  // namespace embrec

#endif  // EMBREC_CONFIG_H_
