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

#ifndef EMBREC_TEXTPROC_H_
#define EMBREC_TEXTPROC_H_

// Tokenization, TF-IDF vectorization and sparse cosine similarity.

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace embrec {

using TokenStream = std::vector<std::string>;

// Lowercases, splits on every non-alphanumeric code point and drops tokens
// shorter than two code points. Input is treated as UTF-8; invalid bytes act
// as separators.
TokenStream Tokenize(std::string_view text);

class SparseVector {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  SparseVector() = default;
  // Entries may arrive in any order; indices must be unique.
  explicit SparseVector(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  double norm() const { return norm_; }
  double squared_norm() const { return squared_norm_; }
  bool empty() const { return entries_.empty(); }
  double weight(std::uint32_t index) const;

 private:
  std::vector<Entry> entries_;  // ascending index
  double norm_ = 0.0;
  double squared_norm_ = 0.0;
};

// dot(a, b) / (|a| |b|), or 0 when either vector has zero norm.
double Cosine(const SparseVector& a, const SparseVector& b);

// Content vectors keyed by job id.
using ContentVectors = std::unordered_map<std::string, SparseVector>;

class TfIdfModel {
 public:
  // Throws InputError on an empty corpus.
  static TfIdfModel Fit(const std::vector<TokenStream>& docs);

  // Sublinear tf, add-one smoothed idf, L2 normalized. Out-of-vocabulary
  // terms are ignored.
  SparseVector Vectorize(const TokenStream& doc) const;

  std::size_t num_docs() const { return num_docs_; }
  std::size_t vocabulary_size() const { return terms_.size(); }
  // -1 when the term is unknown.
  std::int64_t index_of(std::string_view term) const;
  std::size_t document_frequency(std::string_view term) const;
  const std::string& term(std::uint32_t index) const { return terms_[index]; }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> terms_;
  std::vector<std::size_t> document_frequency_;
  std::size_t num_docs_ = 0;
};

}  // namespace embrec

#endif  // EMBREC_TEXTPROC_H_
