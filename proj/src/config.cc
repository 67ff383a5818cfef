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

#include "embrec/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include "embrec/error.h"

namespace embrec {
namespace {

const ConfigKey* FindKey(std::string_view name) {
  for (const auto& key : ConfigKeys()) {
    if (key.name == name) return &key;
  }
  return nullptr;
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view text) {
  const auto s = Trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(
        fmt::format("'{}': cannot parse '{}' as a number", key, text));
  }
  return value;
}

}  // namespace

const std::vector<ConfigKey>& ConfigKeys() {
  static const std::vector<ConfigKey> keys = {
      {"jobs", "paths", "jobs.jsonl", "job postings (JSON Lines)"},
      {"interactions", "paths", "interactions.csv", "interaction log (CSV)"},
      {"model", "paths", "model", "model path prefix; files are <model>-d<dim>.emb"},
      {"output", "paths", "report.csv", "evaluation report CSV"},

      {"ks", "experiment", "3,6", "list lengths to evaluate"},
      {"dims", "experiment", "100,200,300", "embedding dimensions"},
      {"k_nn", "experiment", "50", "CF neighborhood size"},
      {"seed", "experiment", "42", "root random seed"},
      {"min_history", "experiment", "11", "distinct views needed to be a test user"},
      {"holdout", "experiment", "10", "held-out distinct jobs per test user"},
      {"hybrid_order", "experiment", "bll_first", "bll_first or cf_first"},
      {"novelty_target", "experiment", "auto",
       "N_A; 'auto' derives it from apply events (0.58 without any)"},

      {"window", "train", "20", "context window (inert for DBOW)"},
      {"negatives", "train", "10", "negative samples per word"},
      {"epochs", "train", "1", "training epochs"},
      {"learning_rate", "train", "0.025", "initial learning rate"},
      {"min_learning_rate", "train", "0.0001", "final learning rate"},
      {"min_count", "train", "2", "minimum word count"},

      {"decay", "bll", "0.5", "BLL decay exponent"},
      {"min_age", "bll", "1", "smallest age in seconds"},

      {"num_topics", "synth", "2", "topics"},
      {"jobs_per_topic", "synth", "100", "jobs per topic"},
      {"users", "synth", "100", "users"},
      {"views_per_user", "synth", "30", "view events per user"},
      {"apply_rate", "synth", "0.05", "probability a view is followed by an apply"},
      {"vocab_per_topic", "synth", "200", "words in each topic's vocabulary"},
      {"shared_vocab", "synth", "40", "words shared across topics"},
      {"words_per_job", "synth", "80", "tokens per job description"},
      {"jobs_per_company", "synth", "5", "consecutive jobs sharing a description template"},
      {"popularity_skew", "synth", "1.0", "Zipf exponent of job popularity"},
      {"cross_topic_rate", "synth", "0.1", "probability a view leaves the home topic"},
  };
  return keys;
}

ConfigValues::ConfigValues() {
  for (const auto& key : ConfigKeys()) {
    values_.emplace(std::string(key.name), std::string(key.default_value));
  }
}

void ConfigValues::LoadFile(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty()) {
      throw ConfigError(fmt::format("'{}': key '{}' outside a section",
                                    path.string(), section));
    }
    for (const auto& [name, node] : entries) {
      const auto* key = FindKey(name);
      if (key == nullptr) {
        throw ConfigError(
            fmt::format("'{}': unknown key '{}'", path.string(), name));
      }
      if (key->section != section) {
        throw ConfigError(fmt::format("'{}': key '{}' belongs in [{}], not [{}]",
                                      path.string(), name, key->section,
                                      section));
      }
      values_[name] = std::string(Trim(node.data()));
    }
  }
}

void ConfigValues::LoadEnvironment() {
  for (const auto& key : ConfigKeys()) {
    std::string var = "EMBREC_";
    for (char c : key.name) {
      var.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    if (const char* value = std::getenv(var.c_str())) {
      values_[std::string(key.name)] = value;
    }
  }
}

void ConfigValues::Set(std::string_view key, std::string value) {
  if (FindKey(key) == nullptr) {
    throw ConfigError(fmt::format("unknown key '{}'", key));
  }
  values_[std::string(key)] = std::move(value);
}

const std::string& ConfigValues::Get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError(fmt::format("unknown key '{}'", key));
  }
  return it->second;
}

std::size_t ConfigValues::GetCount(std::string_view key) const {
  return ParseNumber<std::size_t>(key, Get(key));
}

std::uint64_t ConfigValues::GetU64(std::string_view key) const {
  return ParseNumber<std::uint64_t>(key, Get(key));
}

double ConfigValues::GetDouble(std::string_view key) const {
  return ParseNumber<double>(key, Get(key));
}

std::vector<std::size_t> ConfigValues::GetCountList(
    std::string_view key) const {
  std::vector<std::size_t> out;
  std::string_view rest = Get(key);
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(ParseNumber<std::size_t>(key, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::uint64_t DeriveSeed(std::uint64_t root, std::string_view stage) {
  // FNV-1a over the stage name, then a splitmix64 finalizer.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : stage) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = root ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace embrec
