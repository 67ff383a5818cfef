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

#ifndef EMBREC_PROFILE_H_
#define EMBREC_PROFILE_H_

// Per-user reference vectors built from a training history: the most recent
// job (LAST), the mean over all views (AVG), or a softmax-weighted sum whose
// weights come from the ACT-R base-level learning activation (BLL).

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "embrec/corpus.h"
#include "embrec/embedding.h"

namespace embrec {

struct ViewEvent {
  std::string job_id;
  Timestamp timestamp = 0;
};

struct UserHistory {
  std::string user_id;
  // Ascending timestamp, ties by job id.
  std::vector<ViewEvent> events;

  bool empty() const { return events.empty(); }
  std::set<std::string> distinct_jobs() const;
  // Job of the latest event; equal timestamps resolved by ascending job id.
  // Throws std::invalid_argument on an empty history.
  const std::string& last_job() const;
};

// View events of every user in `data`, keyed by user id.
std::map<std::string, UserHistory> BuildHistories(const Dataset& data);

struct BllConfig {
  double decay = 0.5;
  Timestamp reference_time = 0;
  Timestamp min_age = 1;

  // Throws ConfigError.
  void Validate() const;
};

enum class Strategy { kLast, kAvg, kBll };

std::string_view StrategyName(Strategy strategy);

struct ReferenceVector {
  std::vector<double> values;
  Strategy strategy = Strategy::kLast;
};

ReferenceVector LastVector(const UserHistory& history,
                           const EmbeddingModel& model);

// Mean over view events, so a job viewed m times counts m times.
ReferenceVector AvgVector(const UserHistory& history,
                          const EmbeddingModel& model);

// ln(sum_i max(reference_time - t_i, min_age)^-decay) over the views of `job`.
// Throws std::invalid_argument when the job is not in the history or a view
// lies after the reference time.
double BllActivation(const UserHistory& history, std::string_view job,
                     const BllConfig& config);

// Max-shifted softmax. Throws std::invalid_argument on empty or non-finite
// input.
std::vector<double> SoftmaxWeights(std::span<const double> activations);

// Softmax over the activations of the distinct jobs in the history, then the
// weighted sum of their vectors.
ReferenceVector BllVector(const UserHistory& history,
                          const EmbeddingModel& model,
                          const BllConfig& config);

ReferenceVector BuildReference(Strategy strategy, const UserHistory& history,
                               const EmbeddingModel& model,
                               const BllConfig& config);

}  // namespace embrec

#endif  // EMBREC_PROFILE_H_
