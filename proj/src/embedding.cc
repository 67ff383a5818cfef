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

#include "embrec/embedding.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

#include "embrec/error.h"
#include "output.h"

namespace embrec {
namespace {

double UniformDouble(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// -ln s(x), stable for large |x|.
double NegLogSigmoid(double x) {
  return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

// d loss / d (v.u) for the positive target and for one noise target.
double PositiveCoefficient(double score) { return Sigmoid(score) - 1.0; }
double NegativeCoefficient(double score) { return Sigmoid(score); }

// ---- little-endian binary IO ----

void PutU32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 4);
}

void PutU64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b, 8);
}

void PutString(std::ostream& out, const std::string& s) {
  PutU32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void PutFloats(std::ostream& out, std::span<const float> values) {
  for (float f : values) PutU32(out, std::bit_cast<std::uint32_t>(f));
}

class Reader {
 public:
  Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  std::uint32_t U32() {
    unsigned char b[4];
    Read(b, 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  std::uint64_t U64() {
    unsigned char b[8];
    Read(b, 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }

  std::string String() {
    const auto n = U32();
    std::string s(n, '\0');
    Read(reinterpret_cast<unsigned char*>(s.data()), n);
    return s;
  }

  void Floats(std::size_t n, std::vector<float>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(std::bit_cast<float>(U32()));
    }
  }

  void Read(unsigned char* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw InputError(fmt::format("'{}': truncated model file", path_));
    }
  }

 private:
  std::istream& in_;
  std::string path_;
};

}  // namespace

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void TrainConfig::Validate() const {
  if (dim < 1) throw ConfigError("dim must be >= 1");
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(min_learning_rate > 0.0) || min_learning_rate > learning_rate) {
    throw ConfigError(fmt::format(
        "need 0 < min_learning_rate <= learning_rate, got {} and {}",
        min_learning_rate, learning_rate));
  }
  if (!std::isfinite(learning_rate)) {
    throw ConfigError("learning_rate must be finite");
  }
}

// ---- Vocabulary ----

Vocabulary Vocabulary::Build(const std::vector<Document>& docs,
                             std::size_t min_count) {
  if (docs.empty()) throw InputError("cannot build a vocabulary from no documents");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& doc : docs) {
    for (const auto& token : doc.tokens) ++counts[token];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [word, count] : counts) {
    if (count >= min_count) kept.emplace_back(word, count);
  }
  if (kept.empty()) {
    throw InputError(fmt::format(
        "vocabulary is empty after applying min_count={}", min_count));
  }
  return FromCounts(std::move(kept));
}

Vocabulary Vocabulary::FromCounts(
    std::vector<std::pair<std::string, std::uint64_t>> words) {
  std::stable_sort(words.begin(), words.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  Vocabulary vocab;
  for (auto& [word, count] : words) {
    vocab.index_.emplace(word, vocab.words_.size());
    vocab.words_.push_back(std::move(word));
    vocab.counts_.push_back(count);
  }
  vocab.BuildNoise();
  return vocab;
}

void Vocabulary::BuildNoise() {
  noise_.resize(counts_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    noise_[i] = std::pow(static_cast<double>(counts_[i]), 0.75);
    total += noise_[i];
  }
  cumulative_.resize(counts_.size());
  double running = 0.0;
  for (std::size_t i = 0; i < noise_.size(); ++i) {
    noise_[i] /= total;
    running += noise_[i];
    cumulative_[i] = running;
  }
  if (!cumulative_.empty()) cumulative_.back() = 1.0;
}

std::int64_t Vocabulary::index_of(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::size_t Vocabulary::SampleNoise(double uniform) const {
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), uniform);
  const auto i = static_cast<std::size_t>(it - cumulative_.begin());
  return std::min(i, cumulative_.size() - 1);
}

// ---- EmbeddingModel ----

EmbeddingModel::EmbeddingModel(TrainConfig config,
                               std::vector<std::string> job_ids,
                               std::vector<float> doc_vectors,
                               Vocabulary vocabulary,
                               std::vector<float> word_vectors)
    : config_(config),
      job_ids_(std::move(job_ids)),
      doc_vectors_(std::move(doc_vectors)),
      vocabulary_(std::move(vocabulary)),
      word_vectors_(std::move(word_vectors)) {
  const std::size_t d = config_.dim;
  if (d == 0 || doc_vectors_.size() != job_ids_.size() * d ||
      word_vectors_.size() != vocabulary_.size() * d) {
    throw InvariantError("embedding table shape does not match dimension");
  }
  for (float f : doc_vectors_) {
    if (!std::isfinite(f)) throw InvariantError("non-finite document vector");
  }
  doc_norms_.reserve(job_ids_.size());
  for (std::size_t i = 0; i < job_ids_.size(); ++i) {
    if (!doc_index_.emplace(job_ids_[i], i).second) {
      throw InvariantError(fmt::format("duplicate job id '{}'", job_ids_[i]));
    }
    double sum = 0.0;
    for (float f : doc_vector(i)) sum += static_cast<double>(f) * f;
    doc_norms_.push_back(std::sqrt(sum));
  }
}

bool EmbeddingModel::contains(std::string_view job_id) const {
  return doc_index_.contains(std::string(job_id));
}

std::span<const float> EmbeddingModel::doc_vector(
    std::string_view job_id) const {
  const auto it = doc_index_.find(std::string(job_id));
  if (it == doc_index_.end()) {
    throw std::out_of_range(
        fmt::format("no embedding for job '{}'", job_id));
  }
  return doc_vector(it->second);
}

std::span<const float> EmbeddingModel::doc_vector(std::size_t i) const {
  return std::span<const float>(doc_vectors_).subspan(i * dim(), dim());
}

std::span<const float> EmbeddingModel::word_vector(std::size_t i) const {
  return std::span<const float>(word_vectors_).subspan(i * dim(), dim());
}

void EmbeddingModel::Save(const std::filesystem::path& path) const {
  auto out = internal::OpenOutput(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out.write("EMB1", 4);
  PutU32(out, static_cast<std::uint32_t>(dim()));
  PutU32(out, static_cast<std::uint32_t>(job_ids_.size()));
  for (std::size_t i = 0; i < job_ids_.size(); ++i) {
    PutString(out, job_ids_[i]);
    PutFloats(out, doc_vector(i));
  }
  PutU32(out, static_cast<std::uint32_t>(vocabulary_.size()));
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    PutString(out, vocabulary_.word(i));
    PutU64(out, vocabulary_.count(i));
    PutFloats(out, word_vector(i));
  }
  PutU32(out, static_cast<std::uint32_t>(config_.window));
  PutU32(out, static_cast<std::uint32_t>(config_.negatives));
  PutU32(out, static_cast<std::uint32_t>(config_.epochs));
  PutU32(out, static_cast<std::uint32_t>(config_.min_count));
  PutU64(out, std::bit_cast<std::uint64_t>(config_.learning_rate));
  PutU64(out, std::bit_cast<std::uint64_t>(config_.min_learning_rate));
  PutU64(out, config_.seed);
  if (!out) throw InputError(fmt::format("failed writing '{}'", path.string()));
}

EmbeddingModel EmbeddingModel::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path.string()));
  Reader reader(in, path.string());
  unsigned char magic[4];
  reader.Read(magic, 4);
  if (std::string_view(reinterpret_cast<char*>(magic), 4) != "EMB1") {
    throw InputError(fmt::format("'{}': bad magic, expected EMB1",
                                 path.string()));
  }
  TrainConfig config;
  config.dim = reader.U32();
  if (config.dim == 0) {
    throw InputError(fmt::format("'{}': zero dimension", path.string()));
  }
  const auto docs = reader.U32();
  std::vector<std::string> ids;
  std::vector<float> doc_vectors;
  for (std::uint32_t i = 0; i < docs; ++i) {
    ids.push_back(reader.String());
    reader.Floats(config.dim, doc_vectors);
  }
  const auto words = reader.U32();
  std::vector<std::pair<std::string, std::uint64_t>> vocab_words;
  std::vector<float> word_vectors;
  for (std::uint32_t i = 0; i < words; ++i) {
    auto word = reader.String();
    const auto count = reader.U64();
    vocab_words.emplace_back(std::move(word), count);
    reader.Floats(config.dim, word_vectors);
  }
  config.window = reader.U32();
  config.negatives = reader.U32();
  config.epochs = reader.U32();
  config.min_count = reader.U32();
  config.learning_rate = std::bit_cast<double>(reader.U64());
  config.min_learning_rate = std::bit_cast<double>(reader.U64());
  config.seed = reader.U64();
  // The stored order is already canonical, so FromCounts keeps it.
  auto vocabulary = Vocabulary::FromCounts(std::move(vocab_words));
  try {
    return EmbeddingModel(config, std::move(ids), std::move(doc_vectors),
                          std::move(vocabulary), std::move(word_vectors));
  } catch (const InvariantError& e) {
    throw InputError(fmt::format("'{}': {}", path.string(), e.what()));
  }
}

// ---- gradient ----

NegativeSamplingGradient ComputeNegativeSamplingGradient(
    std::span<const double> doc, std::span<const double> positive,
    const std::vector<std::span<const double>>& negatives) {
  const std::size_t d = doc.size();
  if (positive.size() != d) {
    throw std::invalid_argument("positive vector dimension mismatch");
  }
  NegativeSamplingGradient grad;
  grad.doc.assign(d, 0.0);

  const double pos_score = Dot(doc, positive);
  const double g_pos = PositiveCoefficient(pos_score);
  grad.loss = NegLogSigmoid(pos_score);
  grad.positive.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    grad.doc[i] += g_pos * positive[i];
    grad.positive[i] = g_pos * doc[i];
  }
  for (const auto& neg : negatives) {
    if (neg.size() != d) {
      throw std::invalid_argument("negative vector dimension mismatch");
    }
    const double score = Dot(doc, neg);
    const double g = NegativeCoefficient(score);
    grad.loss += NegLogSigmoid(-score);
    auto& out = grad.negatives.emplace_back(d);
    for (std::size_t i = 0; i < d; ++i) {
      grad.doc[i] += g * neg[i];
      out[i] = g * doc[i];
    }
  }
  return grad;
}

// ---- training ----

TrainResult Train(const std::vector<Document>& docs, const TrainConfig& config,
                  const TrainOptions& options) {
  config.Validate();
  const EmbeddingModel* base = options.frozen_base;
  if (base != nullptr && base->dim() != config.dim) {
    throw ConfigError(fmt::format("frozen model has dim {}, config asks for {}",
                                  base->dim(), config.dim));
  }
  const bool frozen = base != nullptr;
  const Vocabulary vocab =
      frozen ? base->vocabulary() : Vocabulary::Build(docs, config.min_count);
  const std::size_t d = config.dim;

  std::mt19937_64 rng(config.seed);
  std::vector<double> doc_vecs(docs.size() * d);
  for (double& x : doc_vecs) {
    x = (UniformDouble(rng) - 0.5) / static_cast<double>(d);
  }
  std::vector<double> word_vecs(vocab.size() * d, 0.0);
  if (frozen) {
    for (std::size_t w = 0; w < vocab.size(); ++w) {
      const auto src = base->word_vector(w);
      std::copy(src.begin(), src.end(), word_vecs.begin() + w * d);
    }
  }

  // Token streams mapped to vocabulary indices; OOV tokens dropped.
  std::vector<std::vector<std::size_t>> encoded(docs.size());
  std::size_t tokens_per_epoch = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (const auto& token : docs[i].tokens) {
      const auto w = vocab.index_of(token);
      if (w >= 0) encoded[i].push_back(static_cast<std::size_t>(w));
    }
    tokens_per_epoch += encoded[i].size();
  }

  const double total_steps =
      static_cast<double>(tokens_per_epoch * config.epochs);
  TrainReport report;
  std::vector<double> doc_grad(d);
  std::vector<std::size_t> targets;
  std::vector<double> coeffs;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::size_t epoch_steps = 0;
    for (std::size_t doc = 0; doc < docs.size(); ++doc) {
      double* v = doc_vecs.data() + doc * d;
      for (const std::size_t positive : encoded[doc]) {
        const double progress =
            total_steps > 0 ? static_cast<double>(report.steps) / total_steps
                            : 0.0;
        const double lr =
            config.learning_rate -
            (config.learning_rate - config.min_learning_rate) * progress;

        targets.assign(1, positive);
        for (std::size_t n = 0; n < config.negatives; ++n) {
          targets.push_back(vocab.SampleNoise(UniformDouble(rng)));
        }
        std::fill(doc_grad.begin(), doc_grad.end(), 0.0);
        double loss = 0.0;
        for (std::size_t t = 0; t < targets.size(); ++t) {
          double* u = word_vecs.data() + targets[t] * d;
          double score = 0.0;
          for (std::size_t i = 0; i < d; ++i) score += v[i] * u[i];
          const double g =
              t == 0 ? PositiveCoefficient(score) : NegativeCoefficient(score);
          loss += t == 0 ? NegLogSigmoid(score) : NegLogSigmoid(-score);
          for (std::size_t i = 0; i < d; ++i) doc_grad[i] += g * u[i];
          if (!frozen) {
            for (std::size_t i = 0; i < d; ++i) u[i] -= lr * g * v[i];
          }
        }
        for (std::size_t i = 0; i < d; ++i) v[i] -= lr * doc_grad[i];
        if (!std::isfinite(loss)) report.all_finite = false;
        epoch_loss += loss;
        ++epoch_steps;
        ++report.steps;
      }
    }
    report.epoch_mean_loss.push_back(
        epoch_steps > 0 ? epoch_loss / static_cast<double>(epoch_steps) : 0.0);
  }

  std::vector<std::string> ids;
  std::vector<float> doc_out;
  std::vector<float> word_out(word_vecs.begin(), word_vecs.end());
  if (frozen) {
    std::map<std::string, std::size_t> replaced;
    for (std::size_t i = 0; i < docs.size(); ++i) replaced[docs[i].job_id] = i;
    for (std::size_t i = 0; i < base->size(); ++i) {
      const auto& id = base->job_ids()[i];
      if (replaced.contains(id)) continue;
      ids.push_back(id);
      const auto vec = base->doc_vector(i);
      doc_out.insert(doc_out.end(), vec.begin(), vec.end());
    }
  }
  for (std::size_t i = 0; i < docs.size(); ++i) {
    ids.push_back(docs[i].job_id);
    for (std::size_t j = 0; j < d; ++j) {
      doc_out.push_back(static_cast<float>(doc_vecs[i * d + j]));
    }
  }
  TrainConfig stored = config;
  if (frozen) stored = base->config();
  return {EmbeddingModel(stored, std::move(ids), std::move(doc_out), vocab,
                         std::move(word_out)),
          std::move(report)};
}

// ---- retrieval ----

std::vector<Neighbor> Nearest(const EmbeddingModel& model,
                              std::span<const double> query, std::size_t k,
                              const std::set<std::string>& exclude) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (query.size() != model.dim()) {
    throw std::invalid_argument(fmt::format(
        "query has dimension {}, model has {}", query.size(), model.dim()));
  }
  double query_norm = 0.0;
  for (double x : query) query_norm += x * x;
  query_norm = std::sqrt(query_norm);

  std::vector<Neighbor> scored;
  scored.reserve(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& id = model.job_ids()[i];
    if (exclude.contains(id)) continue;
    const auto vec = model.doc_vector(i);
    double dot = 0.0;
    for (std::size_t j = 0; j < vec.size(); ++j) dot += query[j] * vec[j];
    const double denom = query_norm * model.doc_norm(i);
    scored.push_back({id, denom > 0.0 ? dot / denom : 0.0});
  }
  const auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.job_id < b.job_id;
  };
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + n, scored.end(), better);
  scored.resize(n);
  return scored;
}

}  // namespace embrec
