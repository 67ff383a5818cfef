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

#ifndef EMBREC_SYNTH_H_
#define EMBREC_SYNTH_H_

// Synthetic stand-in for a job portal log: topic-clustered job descriptions
// and users whose views are Zipf-skewed within a home topic.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "embrec/config.h"
#include "embrec/corpus.h"

namespace embrec {

struct SynthConfig {
  std::size_t num_topics = 2;
  std::size_t jobs_per_topic = 100;
  std::size_t users = 100;
  std::size_t views_per_user = 30;
  double apply_rate = 0.05;
  std::size_t vocab_per_topic = 200;
  std::size_t shared_vocab = 40;
  std::size_t words_per_job = 80;
  std::size_t jobs_per_company = 5;
  double popularity_skew = 1.0;
  double cross_topic_rate = 0.1;
  std::uint64_t seed = 42;

  // Throws ConfigError.
  void Validate() const;
  static SynthConfig FromValues(const ConfigValues& values);
};

struct SynthData {
  std::vector<JobPosting> jobs;
  // Canonical order (see InteractionOrder).
  std::vector<Interaction> interactions;
  std::map<std::string, std::size_t> job_topic;
  std::map<std::string, std::size_t> user_topic;
};

SynthData Synthesize(const SynthConfig& config);

// Jobs as JSON Lines and interactions as CSV, byte-stable for a given input.
void WriteJobs(const std::vector<JobPosting>& jobs,
               const std::filesystem::path& path);
void WriteInteractions(const std::vector<Interaction>& interactions,
                       const std::filesystem::path& path);

}  // namespace embrec

#endif  // EMBREC_SYNTH_H_
