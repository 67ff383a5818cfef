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

#include "embrec/textproc.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "embrec/error.h"

namespace embrec {
namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one UTF-8 sequence starting at `pos`, advancing it. Malformed input
// yields kInvalid and consumes a single byte.
char32_t DecodeUtf8(std::string_view s, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(s[pos]);
  if (lead < 0x80) {
    ++pos;
    return lead;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    ++pos;
    return kInvalid;
  }
  if (pos + extra >= s.size()) {
    ++pos;
    return kInvalid;
  }
  for (int i = 1; i <= extra; ++i) {
    const auto byte = static_cast<unsigned char>(s[pos + i]);
    if ((byte & 0xC0) != 0x80) {
      ++pos;
      return kInvalid;
    }
    cp = (cp << 6) | (byte & 0x3F);
  }
  pos += extra + 1;
  return cp;
}

void AppendUtf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Letters and digits. Outside ASCII this is a block-level approximation:
// punctuation, symbol and space blocks are excluded, everything else counts.
bool IsAlnum(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
           (cp >= 'A' && cp <= 'Z');
  }
  if (cp == kInvalid) return false;
  if (cp < 0xC0) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation .. arrows
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp >= 0xFF1A && cp <= 0xFF20) return false;
  if (cp >= 0xFFF0 && cp <= 0xFFFF) return false;
  if (cp >= 0xE000 && cp <= 0xF8FF) return false;  // private use
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji and pictographs
  return true;
}

char32_t ToLower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x17F && cp != 0x130 && cp != 0x138 &&
      cp != 0x149 && cp != 0x17F) {
    // Latin Extended-A pairs alternate upper/lower, with a parity shift in
    // the 0x139..0x148 and 0x179..0x17E ranges.
    const bool shifted =
        (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
    const bool upper = shifted ? (cp % 2 == 1) : (cp % 2 == 0);
    return upper ? cp + 1 : cp;
  }
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

}  // namespace

TokenStream Tokenize(std::string_view text) {
  TokenStream tokens;
  std::string current;
  std::size_t length = 0;  // code points in `current`
  auto flush = [&] {
    if (length >= 2) tokens.push_back(current);
    current.clear();
    length = 0;
  };
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t cp = DecodeUtf8(text, pos);
    if (IsAlnum(cp)) {
      AppendUtf8(ToLower(cp), current);
      ++length;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

SparseVector::SparseVector(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  double sum = 0.0;
  for (const auto& [index, w] : entries_) {
    if (!std::isfinite(w)) throw InvariantError("non-finite sparse weight");
    sum += w * w;
  }
  squared_norm_ = sum;
  norm_ = std::sqrt(sum);
}

double SparseVector::weight(std::uint32_t index) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, std::uint32_t i) { return e.first < i; });
  return it != entries_.end() && it->first == index ? it->second : 0.0;
}

double Cosine(const SparseVector& a, const SparseVector& b) {
  if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
  const auto& x = a.entries();
  const auto& y = b.entries();
  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].first < y[j].first) {
      ++i;
    } else if (y[j].first < x[i].first) {
      ++j;
    } else {
      dot += x[i].second * y[j].second;
      ++i;
      ++j;
    }
  }
  // sqrt(|a|^2 |b|^2) makes the cosine of a vector with itself exactly 1.
  return std::clamp(dot / std::sqrt(a.squared_norm() * b.squared_norm()), -1.0,
                    1.0);
}

TfIdfModel TfIdfModel::Fit(const std::vector<TokenStream>& docs) {
  if (docs.empty()) throw InputError("cannot fit TF-IDF on an empty corpus");
  TfIdfModel model;
  model.num_docs_ = docs.size();
  for (const auto& doc : docs) {
    std::unordered_set<std::uint32_t> seen;
    for (const auto& token : doc) {
      auto [it, inserted] = model.index_.try_emplace(
          token, static_cast<std::uint32_t>(model.terms_.size()));
      if (inserted) {
        model.terms_.push_back(token);
        model.document_frequency_.push_back(0);
      }
      if (seen.insert(it->second).second) {
        ++model.document_frequency_[it->second];
      }
    }
  }
  return model;
}

SparseVector TfIdfModel::Vectorize(const TokenStream& doc) const {
  std::unordered_map<std::uint32_t, std::size_t> tf;
  for (const auto& token : doc) {
    const auto it = index_.find(token);
    if (it != index_.end()) ++tf[it->second];
  }
  std::vector<SparseVector::Entry> entries;
  entries.reserve(tf.size());
  const double n = static_cast<double>(num_docs_);
  for (const auto& [index, count] : tf) {
    const double df = static_cast<double>(document_frequency_[index]);
    const double w = (1.0 + std::log(static_cast<double>(count))) *
                     std::log((n + 1.0) / (df + 1.0));
    if (w != 0.0) entries.emplace_back(index, w);
  }
  SparseVector raw(std::move(entries));
  if (raw.norm() == 0.0) return raw;
  std::vector<SparseVector::Entry> unit = raw.entries();
  for (auto& e : unit) e.second /= raw.norm();
  return SparseVector(std::move(unit));
}

std::int64_t TfIdfModel::index_of(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::size_t TfIdfModel::document_frequency(std::string_view term) const {
  const auto i = index_of(term);
  return i < 0 ? 0 : document_frequency_[static_cast<std::size_t>(i)];
}

}  // namespace embrec
