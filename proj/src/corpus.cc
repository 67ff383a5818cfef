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

#include "embrec/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <fmt/core.h>

#include "embrec/error.h"
#include "output.h"
#include "json.hpp"

namespace embrec {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitCsvRow(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = row.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(row.substr(start));
      return fields;
    }
    fields.push_back(row.substr(start, comma - start));
    start = comma + 1;
  }
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  return in;
}

}  // namespace

std::string_view ActionName(Action action) {
  return action == Action::kView ? "view" : "apply";
}

bool InteractionOrder(const Interaction& a, const Interaction& b) {
  return std::tie(a.timestamp, a.user_id, a.job_id, a.action) <
         std::tie(b.timestamp, b.user_id, b.job_id, b.action);
}

Dataset MakeDataset(std::vector<JobPosting> jobs,
                    std::vector<Interaction> interactions) {
  std::stable_sort(interactions.begin(), interactions.end(), InteractionOrder);
  return Dataset{std::move(jobs), std::move(interactions)};
}

std::vector<JobPosting> LoadJobs(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  std::vector<JobPosting> jobs;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto fail = [&](std::string_view what) {
      return InputError(
          fmt::format("{}:{}: {}", path.string(), line_no, what));
    };
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw fail(fmt::format("invalid JSON ({})", e.what()));
    }
    if (!record.is_object()) throw fail("expected a JSON object");
    const auto id = record.find("id");
    const auto description = record.find("description");
    const auto created_at = record.find("created_at");
    if (id == record.end() || !id->is_string()) {
      throw fail("missing string field 'id'");
    }
    if (description == record.end() || !description->is_string()) {
      throw fail("missing string field 'description'");
    }
    if (created_at == record.end() || !created_at->is_number_integer()) {
      throw fail("missing integer field 'created_at'");
    }
    JobPosting job{id->get<std::string>(), description->get<std::string>(),
                   created_at->get<Timestamp>()};
    if (job.job_id.empty()) throw fail("empty job id");
    if (Trim(job.description).empty()) {
      throw fail(fmt::format("empty description for job '{}'", job.job_id));
    }
    if (!seen.insert(job.job_id).second) {
      throw fail(fmt::format("duplicate job id '{}'", job.job_id));
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

LoadResult LoadInteractions(const std::filesystem::path& path,
                            std::vector<JobPosting> jobs) {
  auto in = OpenOrThrow(path);
  std::unordered_set<std::string_view> known;
  for (const auto& job : jobs) known.insert(job.job_id);

  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](std::string_view what) {
    return InputError(fmt::format("{}:{}: {}", path.string(), line_no, what));
  };

  if (!std::getline(in, line)) throw fail("missing CSV header");
  ++line_no;
  if (Trim(line) != "user_id,job_id,timestamp,action") {
    throw fail("expected header 'user_id,job_id,timestamp,action'");
  }

  std::vector<Interaction> interactions;
  std::vector<Rejection> rejections;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = Trim(line);
    if (row.empty()) continue;
    const auto fields = SplitCsvRow(row);
    if (fields.size() != 4) {
      throw fail(fmt::format("expected 4 fields, found {}", fields.size()));
    }
    Interaction event;
    event.user_id = std::string(fields[0]);
    event.job_id = std::string(fields[1]);
    if (event.user_id.empty()) throw fail("empty user_id");
    if (event.job_id.empty()) throw fail("empty job_id");
    const auto ts = fields[2];
    const auto [ptr, ec] =
        std::from_chars(ts.data(), ts.data() + ts.size(), event.timestamp);
    if (ec != std::errc() || ptr != ts.data() + ts.size()) {
      throw fail(fmt::format("malformed timestamp '{}'", ts));
    }
    if (event.timestamp <= 0) {
      throw fail(fmt::format("timestamp must be positive, got {}", ts));
    }
    if (fields[3] == "view") {
      event.action = Action::kView;
    } else if (fields[3] == "apply") {
      event.action = Action::kApply;
    } else {
      throw fail(fmt::format("unknown action '{}'", fields[3]));
    }
    if (!known.contains(event.job_id)) {
      rejections.push_back(
          {line_no, fmt::format("unknown job_id '{}'", event.job_id)});
      continue;
    }
    interactions.push_back(std::move(event));
  }
  return {MakeDataset(std::move(jobs), std::move(interactions)),
          std::move(rejections)};
}

std::filesystem::path WriteRejectionReport(
    const std::filesystem::path& input_path,
    const std::vector<Rejection>& rejections) {
  std::filesystem::path out_path = input_path;
  out_path += ".rejected.csv";
  auto out = internal::OpenOutput(out_path);
  if (!out) {
    throw InputError(fmt::format("cannot write '{}'", out_path.string()));
  }
  out << "line,reason\n";
  for (const auto& r : rejections) {
    out << r.line << ',' << r.reason << '\n';
  }
  return out_path;
}

SplitDataset Split(const Dataset& data, std::size_t min_history,
                   std::size_t holdout) {
  if (min_history <= holdout) {
    throw ConfigError(fmt::format(
        "min_history ({}) must exceed holdout ({})", min_history, holdout));
  }
  // First-view timestamp per (user, job); interactions are time ordered so
  // the first occurrence wins.
  std::map<std::string, std::map<std::string, Timestamp>> first_view;
  for (const auto& event : data.interactions) {
    if (event.action != Action::kView) continue;
    first_view[event.user_id].try_emplace(event.job_id, event.timestamp);
  }

  SplitDataset split;
  for (const auto& [user, jobs] : first_view) {
    if (jobs.size() < min_history) continue;
    std::vector<std::pair<Timestamp, std::string>> order;
    order.reserve(jobs.size());
    for (const auto& [job, ts] : jobs) order.emplace_back(ts, job);
    // Latest first-view first; equal times resolved by ascending job id.
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    auto& held = split.test[user];
    for (std::size_t i = 0; i < holdout; ++i) held.insert(order[i].second);
  }

  split.train.jobs = data.jobs;
  for (const auto& event : data.interactions) {
    bool moved = false;
    if (event.action == Action::kView) {
      const auto it = split.test.find(event.user_id);
      moved = it != split.test.end() && it->second.contains(event.job_id);
    }
    if (moved) {
      split.held_out.push_back(event);
    } else {
      split.split_time = std::max(split.split_time, event.timestamp);
      split.train.interactions.push_back(event);
    }
  }
  return split;
}

double Sparsity(std::size_t users, std::size_t jobs,
                std::size_t interactions) {
  if (users == 0 || jobs == 0) return 1.0;
  const double cells = static_cast<double>(users) * static_cast<double>(jobs);
  return std::clamp(1.0 - static_cast<double>(interactions) / cells, 0.0, 1.0);
}

DatasetStats ComputeStats(const Dataset& data) {
  DatasetStats stats;
  std::unordered_set<std::string_view> users;
  for (const auto& event : data.interactions) {
    users.insert(event.user_id);
    if (event.action == Action::kView) {
      ++stats.interactions;
    } else {
      ++stats.applies;
    }
  }
  stats.users = users.size();
  stats.jobs = data.jobs.size();
  stats.sparsity = Sparsity(stats.users, stats.jobs, stats.interactions);
  return stats;
}

std::string FormatSparsity(double sparsity) {
  return fmt::format("{:.2f}%", sparsity * 100.0);
}

}  // namespace embrec
