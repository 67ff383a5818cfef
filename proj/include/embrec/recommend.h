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

#ifndef EMBREC_RECOMMEND_H_
#define EMBREC_RECOMMEND_H_

// Top-k recommenders: most popular (MP), TF-IDF content-based filtering
// (CBF), user-based collaborative filtering (CF), embedding retrieval with a
// LAST/AVG/BLL reference vector, and a round-robin hybrid of two sources.
//
// Every recommender is fitted on training data only. Personalized
// recommenders never return a job from the user's training history; users
// without training history get the MP list.

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "embrec/corpus.h"
#include "embrec/embedding.h"
#include "embrec/profile.h"
#include "embrec/textproc.h"

namespace embrec {

struct ScoredJob {
  std::string job_id;
  double score = 0.0;

  friend bool operator==(const ScoredJob&, const ScoredJob&) = default;
};

struct RecommendationList {
  std::string user_id;
  std::vector<ScoredJob> items;
  std::size_t k = 0;

  std::vector<std::string> job_ids() const;
};

// Read-only view of the training split shared by all recommenders.
class TrainingIndex {
 public:
  explicit TrainingIndex(const Dataset& train);

  // nullptr for users with no training views.
  const UserHistory* history(std::string_view user_id) const;
  const std::map<std::string, UserHistory>& histories() const {
    return histories_;
  }
  // Every job, by descending training view count then ascending id.
  const std::vector<ScoredJob>& popularity() const { return popularity_; }
  // Distinct viewed jobs per user.
  const std::map<std::string, std::set<std::string>>& user_jobs() const {
    return user_jobs_;
  }
  // Users who viewed each job, ascending.
  const std::vector<std::string>& viewers(const std::string& job_id) const;

 private:
  std::map<std::string, UserHistory> histories_;
  std::vector<ScoredJob> popularity_;
  std::map<std::string, std::set<std::string>> user_jobs_;
  std::unordered_map<std::string, std::vector<std::string>> viewers_;
};

// TF-IDF model fitted on all job descriptions, plus each job's vector.
struct ContentIndex {
  TfIdfModel model;
  ContentVectors vectors;

  static ContentIndex Build(const std::vector<JobPosting>& jobs);
};

RecommendationList RecommendMostPopular(const TrainingIndex& index,
                                        std::size_t k);

// The MP ranking with the user's training jobs removed.
RecommendationList PopularityFallback(const TrainingIndex& index,
                                      const UserHistory& history,
                                      std::size_t k);

// Cosine between TF-IDF vectors of the most recently viewed job and every job
// outside the history. Empty history yields an empty list.
RecommendationList RecommendContentBased(const UserHistory& history,
                                         const ContentIndex& content,
                                         std::size_t k);

// Binary user vectors over distinct jobs; the k_nn most cosine-similar users
// with non-zero similarity vote for their jobs with their similarity. Falls
// back to PopularityFallback when no neighbor exists.
RecommendationList RecommendCollaborative(const UserHistory& history,
                                          const TrainingIndex& index,
                                          std::size_t k, std::size_t k_nn);

RecommendationList RecommendEmbedding(const UserHistory& history,
                                      const EmbeddingModel& model,
                                      Strategy strategy,
                                      const BllConfig& bll, std::size_t k);

// Alternates between the lists starting with `first`, skipping jobs already
// emitted; when one list runs out the other fills the rest.
RecommendationList InterleaveRoundRobin(const RecommendationList& first,
                                        const RecommendationList& second,
                                        std::size_t k);

class Recommender {
 public:
  virtual ~Recommender() = default;
  virtual std::string name() const = 0;
  virtual RecommendationList Recommend(const std::string& user_id,
                                       std::size_t k) const = 0;
};

class MostPopularRecommender : public Recommender {
 public:
  explicit MostPopularRecommender(std::shared_ptr<const TrainingIndex> index)
      : index_(std::move(index)) {}
  std::string name() const override { return "MP"; }
  RecommendationList Recommend(const std::string& user_id,
                               std::size_t k) const override;

 private:
  std::shared_ptr<const TrainingIndex> index_;
};

class ContentBasedRecommender : public Recommender {
 public:
  ContentBasedRecommender(std::shared_ptr<const TrainingIndex> index,
                          std::shared_ptr<const ContentIndex> content)
      : index_(std::move(index)), content_(std::move(content)) {}
  std::string name() const override { return "CBF"; }
  RecommendationList Recommend(const std::string& user_id,
                               std::size_t k) const override;

 private:
  std::shared_ptr<const TrainingIndex> index_;
  std::shared_ptr<const ContentIndex> content_;
};

class CollaborativeRecommender : public Recommender {
 public:
  CollaborativeRecommender(std::shared_ptr<const TrainingIndex> index,
                           std::size_t k_nn)
      : index_(std::move(index)), k_nn_(k_nn) {}
  std::string name() const override { return "CF"; }
  RecommendationList Recommend(const std::string& user_id,
                               std::size_t k) const override;

 private:
  std::shared_ptr<const TrainingIndex> index_;
  std::size_t k_nn_;
};

class EmbeddingRecommender : public Recommender {
 public:
  EmbeddingRecommender(std::shared_ptr<const TrainingIndex> index,
                       std::shared_ptr<const EmbeddingModel> model,
                       Strategy strategy, BllConfig bll)
      : index_(std::move(index)),
        model_(std::move(model)),
        strategy_(strategy),
        bll_(bll) {}
  // e.g. "Doc2Vec-BLL-d100"
  std::string name() const override;
  RecommendationList Recommend(const std::string& user_id,
                               std::size_t k) const override;
  Strategy strategy() const { return strategy_; }
  std::size_t dim() const { return model_->dim(); }

 private:
  std::shared_ptr<const TrainingIndex> index_;
  std::shared_ptr<const EmbeddingModel> model_;
  Strategy strategy_;
  BllConfig bll_;
};

class HybridRecommender : public Recommender {
 public:
  HybridRecommender(std::shared_ptr<const Recommender> first,
                    std::shared_ptr<const Recommender> second,
                    std::string name = "Hybrid")
      : first_(std::move(first)),
        second_(std::move(second)),
        name_(std::move(name)) {}
  std::string name() const override { return name_; }
  RecommendationList Recommend(const std::string& user_id,
                               std::size_t k) const override;

 private:
  std::shared_ptr<const Recommender> first_;
  std::shared_ptr<const Recommender> second_;
  std::string name_;
};

}  // namespace embrec

#endif  // EMBREC_RECOMMEND_H_
