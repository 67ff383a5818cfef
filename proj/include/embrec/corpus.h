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

#ifndef EMBREC_CORPUS_H_
#define EMBREC_CORPUS_H_

// Job postings, interaction logs, dataset statistics and the per-user
// temporal holdout split.

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace embrec {

using Timestamp = std::int64_t;  // seconds since epoch

struct JobPosting {
  std::string job_id;
  std::string description;
  Timestamp created_at = 0;
};

enum class Action { kView, kApply };

std::string_view ActionName(Action action);

struct Interaction {
  std::string user_id;
  std::string job_id;
  Timestamp timestamp = 0;
  Action action = Action::kView;

  friend bool operator==(const Interaction&, const Interaction&) = default;
};

// Ascending timestamp, ties by (user_id, job_id), then views before applies.
bool InteractionOrder(const Interaction& a, const Interaction& b);

struct Dataset {
  std::vector<JobPosting> jobs;
  // Sorted by InteractionOrder.
  std::vector<Interaction> interactions;
};

// Sorts interactions into canonical order and returns the dataset.
Dataset MakeDataset(std::vector<JobPosting> jobs,
                    std::vector<Interaction> interactions);

struct SplitDataset {
  Dataset train;
  // user_id -> held-out distinct job ids.
  std::map<std::string, std::set<std::string>> test;
  // The view events moved out of train, in canonical order.
  std::vector<Interaction> held_out;
  // Largest timestamp remaining in train (0 when train is empty).
  Timestamp split_time = 0;
};

struct Rejection {
  std::size_t line = 0;
  std::string reason;
};

struct LoadResult {
  Dataset dataset;
  std::vector<Rejection> rejections;
};

struct DatasetStats {
  std::size_t users = 0;
  std::size_t jobs = 0;
  std::size_t interactions = 0;  // view events
  std::size_t applies = 0;
  double sparsity = 1.0;  // fraction in [0, 1]
};

// Reads a JSON Lines file with fields {id, description, created_at}.
// Blank lines are skipped. Throws InputError naming the offending line.
std::vector<JobPosting> LoadJobs(const std::filesystem::path& path);

// Parses a `user_id,job_id,timestamp,action` CSV. Rows whose job_id is not in
// `jobs` are rejected (not an error) and reported in the result; malformed
// rows and unknown actions throw InputError.
LoadResult LoadInteractions(const std::filesystem::path& path,
                            std::vector<JobPosting> jobs);

// Writes `line,reason` rows to `<path>.rejected.csv` and returns that path.
std::filesystem::path WriteRejectionReport(
    const std::filesystem::path& input_path,
    const std::vector<Rejection>& rejections);

// Users with at least `min_history` distinct viewed jobs have the `holdout`
// distinct jobs with the latest first-view timestamps (all of their view
// events) moved to the test set. Apply events always stay in train.
SplitDataset Split(const Dataset& data, std::size_t min_history = 11,
                   std::size_t holdout = 10);

// 1 - interactions / (users * jobs), clamped to [0, 1]; 1 when the matrix is
// empty.
double Sparsity(std::size_t users, std::size_t jobs, std::size_t interactions);

DatasetStats ComputeStats(const Dataset& data);

// Sparsity as a percentage with two decimals, e.g. "98.01%".
std::string FormatSparsity(double sparsity);

}  // namespace embrec

#endif  // EMBREC_CORPUS_H_
