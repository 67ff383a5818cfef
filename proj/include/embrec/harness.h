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

#ifndef EMBREC_HARNESS_H_
#define EMBREC_HARNESS_H_

// End-to-end experiment: load -> split -> fit every recommender -> evaluate
// at each k -> CSV report and rendered table.

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "embrec/config.h"
#include "embrec/corpus.h"
#include "embrec/embedding.h"
#include "embrec/metrics.h"
#include "embrec/profile.h"
#include "embrec/recommend.h"

namespace embrec {

struct ExperimentConfig {
  std::filesystem::path jobs = "jobs.jsonl";
  std::filesystem::path interactions = "interactions.csv";
  std::filesystem::path model = "model";
  std::filesystem::path output = "report.csv";
  std::vector<std::size_t> ks = {3, 6};
  std::vector<std::size_t> dims = {100, 200, 300};
  TrainConfig train;
  BllConfig bll;  // reference_time is filled in from the split
  std::size_t k_nn = 50;
  std::uint64_t seed = 42;
  std::size_t min_history = 11;
  std::size_t holdout = 10;
  bool bll_first = true;
  std::optional<double> novelty_target;  // empty: derive from applies

  // Throws ConfigError.
  void Validate() const;
  static ExperimentConfig FromValues(const ConfigValues& values);
};

// "<model>-d<dim>.emb"
std::filesystem::path ModelPath(const std::filesystem::path& prefix,
                                std::size_t dim);

std::vector<Document> MakeDocuments(const std::vector<JobPosting>& jobs);

// Trains one model per configured dimension on the job descriptions, with
// seeds derived from the root seed.
std::vector<TrainResult> TrainModels(const std::vector<JobPosting>& jobs,
                                     const ExperimentConfig& config);

struct ExperimentResult {
  EvaluationReport report;
  std::string table;
  DatasetStats stats;
  std::vector<Rejection> rejections;
  std::shared_ptr<const SplitDataset> split;
  std::shared_ptr<const TrainingIndex> index;
  std::shared_ptr<const ContentIndex> content;
  // Every evaluated approach in report order, hybrid last.
  std::vector<std::shared_ptr<const Recommender>> recommenders;
  std::size_t hybrid_dim = 0;
};

// Runs on an in-memory dataset. Models found at ModelPath() are loaded,
// missing ones are trained. Errors are rethrown prefixed with the stage name.
ExperimentResult RunExperimentOn(Dataset data, const ExperimentConfig& config,
                                 std::ostream* log = nullptr);

// Loads the configured files, runs, and writes the CSV to config.output.
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               std::ostream* log = nullptr);

}  // namespace embrec

#endif  // EMBREC_HARNESS_H_
