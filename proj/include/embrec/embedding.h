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

#ifndef EMBREC_EMBEDDING_H_
#define EMBREC_EMBEDDING_H_

// PV-DBOW document embeddings trained with negative sampling, plus exact
// top-k cosine retrieval over the trained document vectors.
//
// Each document vector is the input of a skip-gram style classifier that has
// to tell the words of that document apart from noise words drawn from the
// count^0.75 unigram distribution. Word vectors here are output (context)
// vectors only; no input word vectors are trained.

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "embrec/textproc.h"

namespace embrec {

struct TrainConfig {
  std::size_t dim = 100;
  // Kept for parity with the reported doc2vec settings. Pure DBOW predicts
  // every word of the document, so the window does not change training.
  std::size_t window = 20;
  std::size_t negatives = 10;
  std::size_t epochs = 1;
  double learning_rate = 0.025;
  double min_learning_rate = 0.0001;
  std::size_t min_count = 2;
  std::uint64_t seed = 1;

  // Throws ConfigError.
  void Validate() const;
};

struct Document {
  std::string job_id;
  TokenStream tokens;
};

class Vocabulary {
 public:
  // Keeps words with count >= min_count, ordered by descending count then
  // ascending word. Throws InputError when nothing survives.
  static Vocabulary Build(const std::vector<Document>& docs,
                          std::size_t min_count);
  static Vocabulary FromCounts(
      std::vector<std::pair<std::string, std::uint64_t>> words);

  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t i) const { return words_[i]; }
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  // -1 when absent.
  std::int64_t index_of(std::string_view word) const;
  double noise_probability(std::size_t i) const { return noise_[i]; }
  // Maps a uniform draw in [0, 1) to a word index.
  std::size_t SampleNoise(double uniform) const;

 private:
  void BuildNoise();

  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> noise_;
  std::vector<double> cumulative_;
};

class EmbeddingModel {
 public:
  EmbeddingModel(TrainConfig config, std::vector<std::string> job_ids,
                 std::vector<float> doc_vectors, Vocabulary vocabulary,
                 std::vector<float> word_vectors);

  std::size_t dim() const { return config_.dim; }
  const TrainConfig& config() const { return config_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const std::vector<std::string>& job_ids() const { return job_ids_; }
  std::size_t size() const { return job_ids_.size(); }

  bool contains(std::string_view job_id) const;
  // Throws std::out_of_range for unknown jobs.
  std::span<const float> doc_vector(std::string_view job_id) const;
  std::span<const float> doc_vector(std::size_t i) const;
  double doc_norm(std::size_t i) const { return doc_norms_[i]; }
  std::span<const float> word_vector(std::size_t i) const;

  // Binary layout: "EMB1", dim u32, doc count u32, per doc a u32-length
  // prefixed id and dim float32; then word count u32, per word a u32-length
  // prefixed word, u64 count and dim float32; then the training config.
  // All integers and floats little-endian.
  void Save(const std::filesystem::path& path) const;
  static EmbeddingModel Load(const std::filesystem::path& path);

 private:
  TrainConfig config_;
  std::vector<std::string> job_ids_;
  std::vector<float> doc_vectors_;
  std::vector<double> doc_norms_;
  std::unordered_map<std::string, std::size_t> doc_index_;
  Vocabulary vocabulary_;
  std::vector<float> word_vectors_;
};

struct NegativeSamplingGradient {
  std::vector<double> doc;
  std::vector<double> positive;
  std::vector<std::vector<double>> negatives;
  double loss = 0.0;
};

// Loss -ln s(v.u_pos) - sum ln s(-v.u_neg) and its exact gradient with
// respect to the document vector and every word vector.
NegativeSamplingGradient ComputeNegativeSamplingGradient(
    std::span<const double> doc, std::span<const double> positive,
    const std::vector<std::span<const double>>& negatives);

double Sigmoid(double x);

struct TrainReport {
  std::vector<double> epoch_mean_loss;
  std::size_t steps = 0;
  bool all_finite = true;
};

struct TrainOptions {
  // When set, vocabulary and word vectors come from this model and stay
  // frozen; only the given documents' vectors are (re)trained and merged into
  // a copy of it.
  const EmbeddingModel* frozen_base = nullptr;
};

struct TrainResult {
  EmbeddingModel model;
  TrainReport report;
};

TrainResult Train(const std::vector<Document>& docs, const TrainConfig& config,
                  const TrainOptions& options = {});

struct Neighbor {
  std::string job_id;
  double similarity = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Exact top-k by cosine similarity, descending, ties by ascending job id.
// Throws std::invalid_argument for k == 0 or a dimension mismatch.
std::vector<Neighbor> Nearest(const EmbeddingModel& model,
                              std::span<const double> query, std::size_t k,
                              const std::set<std::string>& exclude = {});

}  // namespace embrec

#endif  // EMBREC_EMBEDDING_H_
