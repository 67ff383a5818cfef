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

#include "embrec/recommend.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/core.h>

#include "embrec/error.h"

namespace embrec {
namespace {

bool Better(const ScoredJob& a, const ScoredJob& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.job_id < b.job_id;
}

std::vector<ScoredJob> TopK(std::vector<ScoredJob> scored, std::size_t k) {
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + n, scored.end(), Better);
  scored.resize(n);
  return scored;
}

const std::vector<std::string> kNoViewers;

}  // namespace

std::vector<std::string> RecommendationList::job_ids() const {
  std::vector<std::string> ids;
  ids.reserve(items.size());
  for (const auto& item : items) ids.push_back(item.job_id);
  return ids;
}

// ---- TrainingIndex ----

TrainingIndex::TrainingIndex(const Dataset& train)
    : histories_(BuildHistories(train)) {
  std::map<std::string, std::size_t> views;
  for (const auto& job : train.jobs) views.emplace(job.job_id, 0);
  for (const auto& event : train.interactions) {
    if (event.action == Action::kView) ++views[event.job_id];
  }
  popularity_.reserve(views.size());
  for (const auto& [job, count] : views) {
    popularity_.push_back({job, static_cast<double>(count)});
  }
  std::stable_sort(popularity_.begin(), popularity_.end(), Better);

  for (const auto& [user, history] : histories_) {
    user_jobs_[user] = history.distinct_jobs();
    for (const auto& job : user_jobs_[user]) viewers_[job].push_back(user);
  }
}

const UserHistory* TrainingIndex::history(std::string_view user_id) const {
  const auto it = histories_.find(std::string(user_id));
  return it == histories_.end() ? nullptr : &it->second;
}

const std::vector<std::string>& TrainingIndex::viewers(
    const std::string& job_id) const {
  const auto it = viewers_.find(job_id);
  return it == viewers_.end() ? kNoViewers : it->second;
}

ContentIndex ContentIndex::Build(const std::vector<JobPosting>& jobs) {
  std::vector<TokenStream> docs;
  docs.reserve(jobs.size());
  for (const auto& job : jobs) docs.push_back(Tokenize(job.description));
  ContentIndex index{TfIdfModel::Fit(docs), {}};
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    index.vectors.emplace(jobs[i].job_id, index.model.Vectorize(docs[i]));
  }
  return index;
}

// ---- operations ----

RecommendationList RecommendMostPopular(const TrainingIndex& index,
                                        std::size_t k) {
  const auto& ranking = index.popularity();
  const auto n = std::min(k, ranking.size());
  return {"", {ranking.begin(), ranking.begin() + n}, k};
}

RecommendationList PopularityFallback(const TrainingIndex& index,
                                      const UserHistory& history,
                                      std::size_t k) {
  const auto seen = history.distinct_jobs();
  RecommendationList list{history.user_id, {}, k};
  for (const auto& item : index.popularity()) {
    if (list.items.size() >= k) break;
    if (!seen.contains(item.job_id)) list.items.push_back(item);
  }
  return list;
}

RecommendationList RecommendContentBased(const UserHistory& history,
                                         const ContentIndex& content,
                                         std::size_t k) {
  RecommendationList list{history.user_id, {}, k};
  if (history.empty()) return list;
  const auto seen = history.distinct_jobs();
  const auto& query = content.vectors.at(history.last_job());
  std::vector<ScoredJob> scored;
  scored.reserve(content.vectors.size());
  for (const auto& [job, vec] : content.vectors) {
    if (seen.contains(job)) continue;
    scored.push_back({job, Cosine(query, vec)});
  }
  list.items = TopK(std::move(scored), k);
  return list;
}

RecommendationList RecommendCollaborative(const UserHistory& history,
                                          const TrainingIndex& index,
                                          std::size_t k, std::size_t k_nn) {
  const auto mine = history.distinct_jobs();
  if (mine.empty()) return PopularityFallback(index, history, k);

  std::map<std::string, std::size_t> overlap;
  for (const auto& job : mine) {
    for (const auto& other : index.viewers(job)) {
      if (other != history.user_id) ++overlap[other];
    }
  }
  std::vector<ScoredJob> neighbors;  // user id + similarity
  neighbors.reserve(overlap.size());
  for (const auto& [user, shared] : overlap) {
    const double size = static_cast<double>(index.user_jobs().at(user).size());
    const double sim = static_cast<double>(shared) /
                       std::sqrt(static_cast<double>(mine.size()) * size);
    neighbors.push_back({user, sim});
  }
  neighbors = TopK(std::move(neighbors), k_nn);
  if (neighbors.empty()) return PopularityFallback(index, history, k);

  // Votes are accumulated in neighbor rank order.
  std::map<std::string, double> votes;
  for (const auto& neighbor : neighbors) {
    for (const auto& job : index.user_jobs().at(neighbor.job_id)) {
      if (!mine.contains(job)) votes[job] += neighbor.score;
    }
  }
  std::vector<ScoredJob> scored;
  scored.reserve(votes.size());
  for (const auto& [job, score] : votes) scored.push_back({job, score});
  return {history.user_id, TopK(std::move(scored), k), k};
}

RecommendationList RecommendEmbedding(const UserHistory& history,
                                      const EmbeddingModel& model,
                                      Strategy strategy, const BllConfig& bll,
                                      std::size_t k) {
  RecommendationList list{history.user_id, {}, k};
  if (history.empty() || k == 0) return list;
  const auto reference = BuildReference(strategy, history, model, bll);
  for (auto& n : Nearest(model, reference.values, k, history.distinct_jobs())) {
    list.items.push_back({std::move(n.job_id), n.similarity});
  }
  return list;
}

RecommendationList InterleaveRoundRobin(const RecommendationList& first,
                                        const RecommendationList& second,
                                        std::size_t k) {
  RecommendationList out{first.user_id, {}, k};
  std::unordered_set<std::string> emitted;
  const std::vector<ScoredJob>* sources[2] = {&first.items, &second.items};
  std::size_t next[2] = {0, 0};
  std::size_t turn = 0;
  while (out.items.size() < k && (next[0] < sources[0]->size() ||
                                  next[1] < sources[1]->size())) {
    const auto& items = *sources[turn];
    auto& i = next[turn];
    while (i < items.size() && emitted.contains(items[i].job_id)) ++i;
    if (i < items.size()) {
      emitted.insert(items[i].job_id);
      out.items.push_back(items[i]);
      ++i;
    }
    turn ^= 1;
  }
  return out;
}

// ---- Recommender implementations ----

RecommendationList MostPopularRecommender::Recommend(const std::string& user_id,
                                                     std::size_t k) const {
  auto list = RecommendMostPopular(*index_, k);
  list.user_id = user_id;
  return list;
}

RecommendationList ContentBasedRecommender::Recommend(
    const std::string& user_id, std::size_t k) const {
  const auto* history = index_->history(user_id);
  if (history == nullptr) {
    auto list = RecommendMostPopular(*index_, k);
    list.user_id = user_id;
    return list;
  }
  return RecommendContentBased(*history, *content_, k);
}

RecommendationList CollaborativeRecommender::Recommend(
    const std::string& user_id, std::size_t k) const {
  const auto* history = index_->history(user_id);
  if (history == nullptr) {
    auto list = RecommendMostPopular(*index_, k);
    list.user_id = user_id;
    return list;
  }
  return RecommendCollaborative(*history, *index_, k, k_nn_);
}

std::string EmbeddingRecommender::name() const {
  return fmt::format("Doc2Vec-{}-d{}", StrategyName(strategy_), model_->dim());
}

RecommendationList EmbeddingRecommender::Recommend(const std::string& user_id,
                                                   std::size_t k) const {
  const auto* history = index_->history(user_id);
  if (history == nullptr) {
    auto list = RecommendMostPopular(*index_, k);
    list.user_id = user_id;
    return list;
  }
  return RecommendEmbedding(*history, *model_, strategy_, bll_, k);
}

RecommendationList HybridRecommender::Recommend(const std::string& user_id,
                                                std::size_t k) const {
  return InterleaveRoundRobin(first_->Recommend(user_id, k),
                              second_->Recommend(user_id, k), k);
}

}  // namespace embrec
