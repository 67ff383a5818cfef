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

#include "embrec/synth.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <fmt/core.h>

#include "embrec/error.h"
#include "output.h"
#include "json.hpp"

namespace embrec {
namespace {

constexpr Timestamp kJobEpoch = 1'600'000'000;
constexpr Timestamp kUserEpoch = 1'700'000'000;

double Uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t UniformIndex(std::mt19937_64& rng, std::size_t n) {
  return std::min(static_cast<std::size_t>(Uniform(rng) * static_cast<double>(n)),
                  n - 1);
}

// Cumulative Zipf weights 1 / (rank + 1)^skew, normalized.
std::vector<double> ZipfCumulative(std::size_t n, double skew) {
  std::vector<double> cumulative(n);
  double total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    total += std::pow(static_cast<double>(r + 1), -skew);
    cumulative[r] = total;
  }
  for (double& c : cumulative) c /= total;
  cumulative.back() = 1.0;
  return cumulative;
}

std::size_t Draw(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<std::size_t>(it - cumulative.begin()),
                  cumulative.size() - 1);
}

void RequirePositive(std::string_view name, std::size_t v) {
  if (v < 1) throw ConfigError(fmt::format("{} must be >= 1", name));
}

}  // namespace

void SynthConfig::Validate() const {
  RequirePositive("num_topics", num_topics);
  RequirePositive("jobs_per_topic", jobs_per_topic);
  RequirePositive("users", users);
  RequirePositive("views_per_user", views_per_user);
  RequirePositive("vocab_per_topic", vocab_per_topic);
  RequirePositive("words_per_job", words_per_job);
  RequirePositive("jobs_per_company", jobs_per_company);
  if (!(apply_rate >= 0.0 && apply_rate <= 1.0)) {
    throw ConfigError("apply_rate must lie in [0, 1]");
  }
  if (!(cross_topic_rate >= 0.0 && cross_topic_rate <= 1.0)) {
    throw ConfigError("cross_topic_rate must lie in [0, 1]");
  }
  if (!(popularity_skew >= 0.0) || !std::isfinite(popularity_skew)) {
    throw ConfigError("popularity_skew must be >= 0");
  }
}

SynthConfig SynthConfig::FromValues(const ConfigValues& values) {
  SynthConfig c;
  c.num_topics = values.GetCount("num_topics");
  c.jobs_per_topic = values.GetCount("jobs_per_topic");
  c.users = values.GetCount("users");
  c.views_per_user = values.GetCount("views_per_user");
  c.apply_rate = values.GetDouble("apply_rate");
  c.vocab_per_topic = values.GetCount("vocab_per_topic");
  c.shared_vocab = values.GetCount("shared_vocab");
  c.words_per_job = values.GetCount("words_per_job");
  c.jobs_per_company = values.GetCount("jobs_per_company");
  c.popularity_skew = values.GetDouble("popularity_skew");
  c.cross_topic_rate = values.GetDouble("cross_topic_rate");
  c.seed = values.GetU64("seed");
  c.Validate();
  return c;
}

SynthData Synthesize(const SynthConfig& config) {
  config.Validate();
  std::mt19937_64 rng(DeriveSeed(config.seed, "synth"));
  SynthData data;

  // Jobs of one company reuse a template of topic words; descriptions mix
  // that template with the wider topic vocabulary and a few shared words.
  constexpr double kSharedShare = 0.15;
  constexpr double kTopicShare = 0.25;
  const std::size_t template_size =
      std::min<std::size_t>(20, config.vocab_per_topic);

  std::vector<std::vector<std::string>> topic_jobs(config.num_topics);
  std::vector<std::size_t> topic_words(config.vocab_per_topic);
  for (std::size_t t = 0; t < config.num_topics; ++t) {
    for (std::size_t j = 0; j < config.jobs_per_topic; ++j) {
      if (j % config.jobs_per_company == 0) {
        std::iota(topic_words.begin(), topic_words.end(), 0);
        for (std::size_t i = 0; i < template_size; ++i) {
          std::swap(topic_words[i],
                    topic_words[i + UniformIndex(rng, topic_words.size() - i)]);
        }
      }
      std::string text;
      for (std::size_t w = 0; w < config.words_per_job; ++w) {
        if (!text.empty()) text.push_back(' ');
        const double u = Uniform(rng);
        if (config.shared_vocab > 0 && u < kSharedShare) {
          text += fmt::format("common{}", UniformIndex(rng, config.shared_vocab));
        } else if (u < kSharedShare + kTopicShare) {
          text += fmt::format("t{}w{}", t,
                              UniformIndex(rng, config.vocab_per_topic));
        } else {
          text += fmt::format("t{}w{}", t,
                              topic_words[UniformIndex(rng, template_size)]);
        }
      }
      JobPosting job;
      job.job_id = fmt::format("job-{}-{:04}", t, j);
      job.description = std::move(text);
      job.created_at =
          kJobEpoch + static_cast<Timestamp>(data.jobs.size()) * 3600;
      data.job_topic[job.job_id] = t;
      topic_jobs[t].push_back(job.job_id);
      data.jobs.push_back(std::move(job));
    }
    // Popularity rank within the topic is a random permutation of its jobs.
    auto& jobs = topic_jobs[t];
    for (std::size_t i = jobs.size(); i > 1; --i) {
      std::swap(jobs[i - 1], jobs[UniformIndex(rng, i)]);
    }
  }

  const auto zipf = ZipfCumulative(config.jobs_per_topic, config.popularity_skew);
  std::vector<Interaction> events;
  events.reserve(config.users * config.views_per_user);
  for (std::size_t u = 0; u < config.users; ++u) {
    const std::string user = fmt::format("user-{:05}", u);
    const std::size_t home = u % config.num_topics;
    data.user_topic[user] = home;
    Timestamp t = kUserEpoch + static_cast<Timestamp>(UniformIndex(rng, 30 * 86400));
    for (std::size_t v = 0; v < config.views_per_user; ++v) {
      std::size_t topic = home;
      if (config.num_topics > 1 && Uniform(rng) < config.cross_topic_rate) {
        topic = (home + 1 + UniformIndex(rng, config.num_topics - 1)) %
                config.num_topics;
      }
      const auto& job = topic_jobs[topic][Draw(zipf, Uniform(rng))];
      t += 60 + static_cast<Timestamp>(UniformIndex(rng, 86400));
      events.push_back({user, job, t, Action::kView});
      if (Uniform(rng) < config.apply_rate) {
        t += 1 + static_cast<Timestamp>(UniformIndex(rng, 3600));
        events.push_back({user, job, t, Action::kApply});
      }
    }
  }
  data.interactions = MakeDataset({}, std::move(events)).interactions;
  return data;
}

void WriteJobs(const std::vector<JobPosting>& jobs,
               const std::filesystem::path& path) {
  auto out = internal::OpenOutput(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  for (const auto& job : jobs) {
    nlohmann::json record = {{"id", job.job_id},
                             {"description", job.description},
                             {"created_at", job.created_at}};
    out << record.dump() << '\n';
  }
}

void WriteInteractions(const std::vector<Interaction>& interactions,
                       const std::filesystem::path& path) {
  auto out = internal::OpenOutput(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path.string()));
  out << "user_id,job_id,timestamp,action\n";
  for (const auto& e : interactions) {
    out << e.user_id << ',' << e.job_id << ',' << e.timestamp << ','
        << ActionName(e.action) << '\n';
  }
}

}  // namespace embrec
