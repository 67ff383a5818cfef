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

#include "embrec/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "embrec/error.h"

namespace embrec {

double NdcgAtK(std::span<const std::string> recommended,
               const std::set<std::string>& relevant, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (relevant.empty()) return 0.0;
  double dcg = 0.0;
  const auto depth = std::min(k, recommended.size());
  for (std::size_t i = 0; i < depth; ++i) {
    if (relevant.contains(recommended[i])) dcg += 1.0 / std::log2(i + 2.0);
  }
  double idcg = 0.0;
  const auto ideal = std::min(k, relevant.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(i + 2.0);
  return dcg / idcg;
}

double DiversityAtK(std::span<const std::string> recommended,
                    const ContentVectors& content) {
  if (recommended.size() < 2) return 0.0;
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < recommended.size(); ++i) {
    const auto& a = content.at(recommended[i]);
    for (std::size_t j = i + 1; j < recommended.size(); ++j) {
      total += 1.0 - Cosine(a, content.at(recommended[j]));
      ++pairs;
    }
  }
  return std::clamp(total / static_cast<double>(pairs), 0.0, 1.0);
}

PopularityTable::PopularityTable(std::map<std::string, std::size_t> counts)
    : counts_(std::move(counts)) {
  for (const auto& [job, c] : counts_) max_ = std::max(max_, c);
}

PopularityTable PopularityTable::FromDataset(const Dataset& train) {
  std::map<std::string, std::size_t> counts;
  for (const auto& job : train.jobs) counts.emplace(job.job_id, 0);
  for (const auto& event : train.interactions) {
    if (event.action == Action::kView) ++counts[event.job_id];
  }
  return PopularityTable(std::move(counts));
}

std::size_t PopularityTable::count(const std::string& job_id) const {
  const auto it = counts_.find(job_id);
  return it == counts_.end() ? 0 : it->second;
}

double PopularityTable::ItemNovelty(const std::string& job_id) const {
  if (max_ == 0) return 1.0;
  return 1.0 - std::log2(static_cast<double>(count(job_id)) + 1.0) /
                   std::log2(static_cast<double>(max_) + 1.0);
}

NoveltyTarget NoveltyTarget::FromApplies(const Dataset& data,
                                         const PopularityTable& pops) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& event : data.interactions) {
    if (event.action != Action::kApply) continue;
    total += pops.ItemNovelty(event.job_id);
    ++n;
  }
  if (n == 0) return {};
  return {total / static_cast<double>(n)};
}

double NoveltyAtK(const std::vector<std::vector<std::string>>& lists,
                  const PopularityTable& pops, std::size_t k) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (lists.empty() || pops.max() == 0) return 1.0;
  const double log_max = std::log2(static_cast<double>(pops.max()) + 1.0);
  double users_total = 0.0;
  for (const auto& list : lists) {
    double inner = 0.0;
    const auto depth = std::min(k, list.size());
    for (std::size_t i = 0; i < depth; ++i) {
      inner += std::log2(static_cast<double>(pops.count(list[i])) + 1.0) /
               log_max;
    }
    users_total += inner / static_cast<double>(k);
  }
  return 1.0 - users_total / static_cast<double>(lists.size());
}

double NoveltyStar(double novelty, NoveltyTarget target) {
  return 1.0 - std::abs(target.value - novelty);
}

std::string EvaluationReport::ToCsv() const {
  std::string out = "approach,k,ndcg,novelty,diversity,novelty_star\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{:.4f},{:.4f},{:.4f},{:.4f}\n", r.approach, r.k,
                       r.ndcg, r.novelty, r.diversity, r.novelty_star);
  }
  return out;
}

namespace {

// Baselines share a group; embedding rows group by strategy.
std::string GroupOf(const std::string& approach) {
  if (approach.rfind("Doc2Vec-", 0) == 0) {
    return approach.substr(0, approach.find('-', 8));
  }
  if (approach == "MP" || approach == "CBF" || approach == "CF") {
    return "baselines";
  }
  return approach;
}

}  // namespace

std::string EvaluationReport::RenderTable() const {
  std::size_t width = 8;
  for (const auto& r : rows) width = std::max(width, r.approach.size());
  const auto line = [&](std::string_view a, std::string_view k,
                        std::string_view c1, std::string_view c2,
                        std::string_view c3, std::string_view c4) {
    return fmt::format("{:<{}} | {:>2} | {:>7} | {:>7} | {:>9} | {:>8}\n", a,
                       width, k, c1, c2, c3, c4);
  };
  const std::string rule(width + 49, '-');
  std::string out = line("approach", "k", "nDCG", "Novelty", "Diversity",
                         "Novelty*");
  out += rule + '\n';
  std::string group;
  for (const auto& r : rows) {
    const auto g = GroupOf(r.approach);
    if (!group.empty() && g != group) out += rule + '\n';
    group = g;
    out += line(r.approach, fmt::format("{}", r.k),
                fmt::format("{:.4f}", r.ndcg), fmt::format("{:.4f}", r.novelty),
                fmt::format("{:.4f}", r.diversity),
                fmt::format("{:.4f}", r.novelty_star));
  }
  out += fmt::format("target novelty N_A = {:.4f}\n", target.value);
  return out;
}

const ReportRow* EvaluationReport::find(std::string_view approach,
                                        std::size_t k) const {
  for (const auto& r : rows) {
    if (r.approach == approach && r.k == k) return &r;
  }
  return nullptr;
}

EvaluationReport Evaluate(const SplitDataset& split,
                          const std::vector<const Recommender*>& recommenders,
                          std::span<const std::size_t> ks,
                          const EvaluationContext& context) {
  if (split.test.empty()) throw InputError("no test users to evaluate");
  if (context.content == nullptr) {
    throw std::invalid_argument("evaluation needs content vectors");
  }
  EvaluationReport report;
  report.target = context.target;
  for (const Recommender* recommender : recommenders) {
    for (const std::size_t k : ks) {
      if (k == 0) throw std::invalid_argument("k must be positive");
      double ndcg = 0.0;
      double diversity = 0.0;
      std::vector<std::vector<std::string>> lists;
      lists.reserve(split.test.size());
      // std::map iteration gives ascending user ids.
      for (const auto& [user, relevant] : split.test) {
        auto ids = recommender->Recommend(user, k).job_ids();
        if (ids.size() > k) ids.resize(k);
        ndcg += NdcgAtK(ids, relevant, k);
        diversity += DiversityAtK(ids, *context.content);
        lists.push_back(std::move(ids));
      }
      const double users = static_cast<double>(split.test.size());
      ReportRow row;
      row.approach = recommender->name();
      row.k = k;
      row.ndcg = ndcg / users;
      row.diversity = diversity / users;
      row.novelty = NoveltyAtK(lists, context.popularity, k);
      row.novelty_star = NoveltyStar(row.novelty, context.target);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace embrec
