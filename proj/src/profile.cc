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

#include "embrec/profile.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "embrec/error.h"

namespace embrec {
namespace {

void RequireHistory(const UserHistory& history) {
  if (history.empty()) {
    throw std::invalid_argument(
        fmt::format("user '{}' has an empty history", history.user_id));
  }
}

void AddScaled(std::span<const float> vec, double scale,
               std::vector<double>& out) {
  for (std::size_t i = 0; i < vec.size(); ++i) out[i] += scale * vec[i];
}

}  // namespace

std::set<std::string> UserHistory::distinct_jobs() const {
  std::set<std::string> jobs;
  for (const auto& e : events) jobs.insert(e.job_id);
  return jobs;
}

const std::string& UserHistory::last_job() const {
  RequireHistory(*this);
  const ViewEvent* best = &events.front();
  for (const auto& e : events) {
    if (e.timestamp > best->timestamp ||
        (e.timestamp == best->timestamp && e.job_id < best->job_id)) {
      best = &e;
    }
  }
  return best->job_id;
}

std::map<std::string, UserHistory> BuildHistories(const Dataset& data) {
  std::map<std::string, UserHistory> histories;
  for (const auto& event : data.interactions) {
    if (event.action != Action::kView) continue;
    auto& h = histories[event.user_id];
    h.user_id = event.user_id;
    h.events.push_back({event.job_id, event.timestamp});
  }
  // Dataset order is (timestamp, user, job), so each user's events are
  // already ascending by (timestamp, job).
  return histories;
}

void BllConfig::Validate() const {
  if (!(decay >= 0.0) || !std::isfinite(decay)) {
    throw ConfigError(fmt::format("decay must be >= 0, got {}", decay));
  }
  if (min_age < 1) {
    throw ConfigError(fmt::format("min_age must be >= 1, got {}", min_age));
  }
}

std::string_view StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kLast:
      return "LAST";
    case Strategy::kAvg:
      return "AVG";
    case Strategy::kBll:
      return "BLL";
  }
  return "?";
}

ReferenceVector LastVector(const UserHistory& history,
                           const EmbeddingModel& model) {
  const auto vec = model.doc_vector(history.last_job());
  return {std::vector<double>(vec.begin(), vec.end()), Strategy::kLast};
}

ReferenceVector AvgVector(const UserHistory& history,
                          const EmbeddingModel& model) {
  RequireHistory(history);
  // Grouped by job: sum_j (n_j / n) v_j, which is the per-event mean.
  std::map<std::string, std::size_t> views;
  for (const auto& e : history.events) ++views[e.job_id];
  const double n = static_cast<double>(history.events.size());
  std::vector<double> mean(model.dim(), 0.0);
  for (const auto& [job, count] : views) {
    AddScaled(model.doc_vector(job), static_cast<double>(count) / n, mean);
  }
  return {std::move(mean), Strategy::kAvg};
}

double BllActivation(const UserHistory& history, std::string_view job,
                     const BllConfig& config) {
  double total = 0.0;
  bool found = false;
  for (const auto& e : history.events) {
    if (e.job_id != job) continue;
    if (e.timestamp > config.reference_time) {
      throw std::invalid_argument(fmt::format(
          "view of '{}' at {} is after the reference time {}", job,
          e.timestamp, config.reference_time));
    }
    found = true;
    const auto age = std::max(config.reference_time - e.timestamp,
                              config.min_age);
    total += std::pow(static_cast<double>(age), -config.decay);
  }
  if (!found) {
    throw std::invalid_argument(fmt::format(
        "job '{}' is not in the history of '{}'", job, history.user_id));
  }
  return std::log(total);
}

std::vector<double> SoftmaxWeights(std::span<const double> activations) {
  if (activations.empty()) {
    throw std::invalid_argument("softmax of an empty list");
  }
  for (double a : activations) {
    if (!std::isfinite(a)) throw std::invalid_argument("non-finite activation");
  }
  const double peak = *std::max_element(activations.begin(), activations.end());
  std::vector<double> weights(activations.size());
  double total = 0.0;
  for (std::size_t i = 0; i < activations.size(); ++i) {
    weights[i] = std::exp(activations[i] - peak);
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return weights;
}

ReferenceVector BllVector(const UserHistory& history,
                          const EmbeddingModel& model,
                          const BllConfig& config) {
  RequireHistory(history);
  const auto jobs = history.distinct_jobs();
  std::vector<double> activations;
  activations.reserve(jobs.size());
  for (const auto& job : jobs) {
    activations.push_back(BllActivation(history, job, config));
  }
  const auto weights = SoftmaxWeights(activations);
  std::vector<double> out(model.dim(), 0.0);
  std::size_t i = 0;
  for (const auto& job : jobs) AddScaled(model.doc_vector(job), weights[i++], out);
  for (double x : out) {
    if (!std::isfinite(x)) throw InvariantError("non-finite BLL reference vector");
  }
  return {std::move(out), Strategy::kBll};
}

ReferenceVector BuildReference(Strategy strategy, const UserHistory& history,
                               const EmbeddingModel& model,
                               const BllConfig& config) {
  switch (strategy) {
    case Strategy::kLast:
      return LastVector(history, model);
    case Strategy::kAvg:
      return AvgVector(history, model);
    case Strategy::kBll:
      return BllVector(history, model, config);
  }
  throw InvariantError("unknown strategy");
}

}  // namespace embrec
