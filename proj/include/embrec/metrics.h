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

#ifndef EMBREC_METRICS_H_
#define EMBREC_METRICS_H_

// Offline accuracy and beyond-accuracy metrics: nDCG@k, intra-list
// diversity, popularity-based novelty and the target-novelty score
// Novelty* = 1 - |N_A - Novelty|.

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "embrec/corpus.h"
#include "embrec/recommend.h"
#include "embrec/textproc.h"

namespace embrec {

// Binary relevance; 0 when `relevant` is empty. Throws std::invalid_argument
// for k == 0.
double NdcgAtK(std::span<const std::string> recommended,
               const std::set<std::string>& relevant, std::size_t k);

// Mean of 1 - cosine over unordered pairs; 0 for fewer than two items.
double DiversityAtK(std::span<const std::string> recommended,
                    const ContentVectors& content);

class PopularityTable {
 public:
  PopularityTable() = default;
  explicit PopularityTable(std::map<std::string, std::size_t> counts);
  // Raw view events per job in `train`.
  static PopularityTable FromDataset(const Dataset& train);

  std::size_t count(const std::string& job_id) const;
  std::size_t max() const { return max_; }

  // 1 - log2(pop + 1) / log2(pop_max + 1); 1 when pop_max is 0.
  double ItemNovelty(const std::string& job_id) const;

 private:
  std::map<std::string, std::size_t> counts_;
  std::size_t max_ = 0;
};

struct NoveltyTarget {
  static constexpr double kDefault = 0.58;
  double value = kDefault;

  // Mean item novelty over the apply events in `data`, or the default when
  // there are none.
  static NoveltyTarget FromApplies(const Dataset& data,
                                   const PopularityTable& pops);
};

// 1 - mean over users of (1/k) sum of log2(pop + 1) / log2(pop_max + 1).
// Lists are truncated to k; shorter lists still divide by k.
double NoveltyAtK(const std::vector<std::vector<std::string>>& lists,
                  const PopularityTable& pops, std::size_t k);

double NoveltyStar(double novelty, NoveltyTarget target);

struct ReportRow {
  std::string approach;
  std::size_t k = 0;
  double ndcg = 0.0;
  double novelty = 0.0;
  double diversity = 0.0;
  double novelty_star = 0.0;
};

struct EvaluationReport {
  std::vector<ReportRow> rows;
  NoveltyTarget target;

  // Header `approach,k,ndcg,novelty,diversity,novelty_star`, 4 decimals.
  std::string ToCsv() const;
  // Fixed-width table grouped into baselines, embedding strategies and the
  // hybrid.
  std::string RenderTable() const;
  const ReportRow* find(std::string_view approach, std::size_t k) const;
};

struct EvaluationContext {
  const ContentVectors* content = nullptr;
  PopularityTable popularity;
  NoveltyTarget target;
};

// Asks every recommender for each test user's top-k (users in ascending id
// order) and aggregates: mean nDCG, corpus novelty, mean diversity,
// and Novelty* of the aggregate novelty. Throws InputError without test
// users.
EvaluationReport Evaluate(const SplitDataset& split,
                          const std::vector<const Recommender*>& recommenders,
                          std::span<const std::size_t> ks,
                          const EvaluationContext& context);

}  // namespace embrec

#endif  // EMBREC_METRICS_H_
