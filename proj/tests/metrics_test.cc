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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "embrec/error.h"
#include "reported_values.h"
#include "test_util.h"

namespace embrec {
namespace {

using Ids = std::vector<std::string>;

TEST(NdcgTest, Examples) {
  const std::set<std::string> relevant = {"a", "b", "c"};
  EXPECT_DOUBLE_EQ(NdcgAtK(Ids{"a", "b", "c"}, relevant, 3), 1.0);
  EXPECT_DOUBLE_EQ(NdcgAtK(Ids{"c", "a"}, relevant, 2), 1.0);
  EXPECT_DOUBLE_EQ(NdcgAtK(Ids{"x", "y", "z"}, relevant, 3), 0.0);
  EXPECT_DOUBLE_EQ(NdcgAtK(Ids{"a"}, {}, 3), 0.0);
  EXPECT_THROW(NdcgAtK(Ids{"a"}, relevant, 0), std::invalid_argument);
}

TEST(NdcgTest, SingleHitAtRankTwo) {
  std::set<std::string> relevant;
  for (int i = 0; i < 10; ++i) relevant.insert(fmt::format("r{}", i));
  EXPECT_NEAR(NdcgAtK(Ids{"x", "r4", "y"}, relevant, 3), 0.29608, 1e-5);
  const double dcg = 1.0 / std::log2(3.0);
  EXPECT_NEAR(NdcgAtK(Ids{"x", "r4", "y"}, relevant, 3),
              dcg / (1.0 + dcg + 0.5), 1e-15);
}

TEST(NdcgTest, OnlyTopKCounts) {
  const std::set<std::string> relevant = {"a"};
  EXPECT_DOUBLE_EQ(NdcgAtK(Ids{"x", "y", "a"}, relevant, 2), 0.0);
  EXPECT_EQ(NdcgAtK(Ids{"a", "x", "p", "q"}, relevant, 4),
            NdcgAtK(Ids{"a", "x", "q", "p"}, relevant, 4));
}

ContentVectors Content() {
  ContentVectors content;
  content.emplace("same1", SparseVector({{0, 1.0}, {1, 2.0}}));
  content.emplace("same2", SparseVector({{0, 1.0}, {1, 2.0}}));
  content.emplace("x", SparseVector({{2, 1.0}}));
  content.emplace("y", SparseVector({{3, 1.0}}));
  content.emplace("z", SparseVector({{4, 1.0}}));
  // cos(p, q) = 0.4
  content.emplace("p", SparseVector({{5, 1.0}}));
  content.emplace("q", SparseVector({{5, 0.4}, {6, std::sqrt(1 - 0.16)}}));
  return content;
}

TEST(DiversityTest, Examples) {
  const auto content = Content();
  EXPECT_DOUBLE_EQ(DiversityAtK(Ids{"same1", "same2"}, content), 0.0);
  EXPECT_DOUBLE_EQ(DiversityAtK(Ids{"x", "y", "z"}, content), 1.0);
  EXPECT_NEAR(DiversityAtK(Ids{"p", "q"}, content), 0.6, 1e-12);
  EXPECT_DOUBLE_EQ(DiversityAtK(Ids{"x"}, content), 0.0);
  EXPECT_DOUBLE_EQ(DiversityAtK(Ids{}, content), 0.0);
}

TEST(DiversityTest, OrderInvariant) {
  const auto content = Content();
  EXPECT_NEAR(DiversityAtK(Ids{"p", "q", "x", "same1"}, content),
              DiversityAtK(Ids{"same1", "x", "q", "p"}, content), 1e-15);
}

TEST(NoveltyTest, Examples) {
  const PopularityTable pops({{"hot", 9}, {"cold", 0}, {"warm", 3}});
  EXPECT_EQ(pops.max(), 9u);
  EXPECT_DOUBLE_EQ(NoveltyAtK({{"hot", "hot"}}, pops, 2), 0.0);
  EXPECT_DOUBLE_EQ(NoveltyAtK({{"cold", "unknown"}}, pops, 2), 1.0);
  EXPECT_NEAR(NoveltyAtK({{"hot", "cold"}}, pops, 2), 0.5, 1e-9);
  // Missing slots count as maximally novel.
  EXPECT_NEAR(NoveltyAtK({{"hot"}}, pops, 2), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(NoveltyAtK({{"hot"}}, PopularityTable({{"hot", 0}}), 1), 1.0);
}

TEST(NoveltyTest, MorePopularReplacementNeverRaisesNovelty) {
  std::mt19937_64 rng(12);
  std::map<std::string, std::size_t> counts;
  for (int i = 0; i < 30; ++i) counts[fmt::format("j{:02}", i)] = rng() % 50;
  const PopularityTable pops(counts);
  Ids ids;
  for (const auto& [id, c] : counts) ids.push_back(id);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Ids> lists(3);
    for (auto& list : lists) {
      for (int i = 0; i < 4; ++i) list.push_back(ids[rng() % ids.size()]);
    }
    const double before = NoveltyAtK(lists, pops, 4);
    auto& slot = lists[rng() % 3][rng() % 4];
    for (const auto& id : ids) {
      if (pops.count(id) > pops.count(slot)) {
        slot = id;
        break;
      }
    }
    EXPECT_LE(NoveltyAtK(lists, pops, 4), before + 1e-15);
  }
}

TEST(NoveltyStarTest, Examples) {
  EXPECT_NEAR(NoveltyStar(0.1649, {}), 0.5849, 1e-12);
  EXPECT_NEAR(NoveltyStar(0.7676, {}), 0.8124, 1e-12);
  EXPECT_DOUBLE_EQ(NoveltyStar(0.58, {}), 1.0);
  EXPECT_DOUBLE_EQ(NoveltyStar(0.3, {0.3}), 1.0);
  EXPECT_NEAR(NoveltyStar(0.5, {0.3}), 0.8, 1e-15);
  EXPECT_NEAR(NoveltyStar(0.1, {0.3}), 0.8, 1e-15);
}

TEST(NoveltyStarTest, ReproducesReportedPairs) {
  for (const auto& pair : testing::kReportedNoveltyPairs) {
    EXPECT_NEAR(NoveltyStar(pair.novelty, {}), pair.novelty_star, 1e-4)
        << pair.row;
  }
}

TEST(NoveltyTargetTest, FromApplies) {
  const auto data = MakeDataset(
      testing::NumberedJobs(3),
      {testing::View("u", "j000", 1), testing::View("u", "j000", 2),
       testing::View("u", "j000", 3), testing::View("v", "j001", 4),
       {"u", "j000", 5, Action::kApply}, {"v", "j002", 6, Action::kApply}});
  const auto pops = PopularityTable::FromDataset(data);
  EXPECT_EQ(pops.count("j000"), 3u);
  EXPECT_EQ(pops.count("j002"), 0u);
  // Item novelty: j000 -> 0, j002 -> 1.
  EXPECT_NEAR(NoveltyTarget::FromApplies(data, pops).value, 0.5, 1e-15);

  const auto no_applies = MakeDataset(testing::NumberedJobs(1),
                                      {testing::View("u", "j000", 1)});
  EXPECT_EQ(NoveltyTarget::FromApplies(no_applies, pops).value, 0.58);
}

// Emits the held-out jobs of every test user.
class OracleRecommender : public Recommender {
 public:
  explicit OracleRecommender(const SplitDataset& split) : split_(split) {}
  std::string name() const override { return "Oracle"; }
  RecommendationList Recommend(const std::string& user_id,
                               std::size_t k) const override {
    RecommendationList list{user_id, {}, k};
    for (const auto& job : split_.test.at(user_id)) {
      if (list.items.size() < k) list.items.push_back({job, 1.0});
    }
    return list;
  }

 private:
  const SplitDataset& split_;
};

class RandomRecommender : public Recommender {
 public:
  RandomRecommender(std::vector<std::string> jobs, std::uint64_t seed)
      : jobs_(std::move(jobs)), seed_(seed) {}
  std::string name() const override { return "Random"; }
  RecommendationList Recommend(const std::string& user_id,
                               std::size_t k) const override {
    std::mt19937_64 rng(seed_ ^ std::hash<std::string>{}(user_id));
    auto pool = jobs_;
    std::shuffle(pool.begin(), pool.end(), rng);
    RecommendationList list{user_id, {}, k};
    for (std::size_t i = 0; i < k && i < pool.size(); ++i) {
      list.items.push_back({pool[i], 0.0});
    }
    return list;
  }

 private:
  std::vector<std::string> jobs_;
  std::uint64_t seed_;
};

class EvaluateTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::mt19937_64 rng(8);
    auto data = testing::RandomDataset(rng, 30, 40, 25);
    for (auto& job : data.jobs) {
      job.description = fmt::format("work {} place {}", job.job_id,
                                    job.job_id.back());
    }
    split_ = Split(data, 6, 3);
    ASSERT_FALSE(split_.test.empty());
    index_ = std::make_shared<TrainingIndex>(split_.train);
    content_ = ContentIndex::Build(split_.train.jobs);
    context_.content = &content_.vectors;
    context_.popularity = PopularityTable::FromDataset(split_.train);
    context_.target =
        NoveltyTarget::FromApplies(split_.train, context_.popularity);
  }

  SplitDataset split_;
  std::shared_ptr<TrainingIndex> index_;
  ContentIndex content_;
  EvaluationContext context_;
};

TEST_F(EvaluateTest, PerfectOracleScoresOne) {
  const OracleRecommender oracle(split_);
  const std::vector<std::size_t> ks = {1, 2, 3};
  const auto report = Evaluate(split_, {&oracle}, ks, context_);
  ASSERT_EQ(report.rows.size(), 3u);
  for (const auto& row : report.rows) EXPECT_DOUBLE_EQ(row.ndcg, 1.0);
}

TEST_F(EvaluateTest, MostPopularDiversityIsSharedListDiversity) {
  const MostPopularRecommender mp(index_);
  const std::vector<std::size_t> ks = {6};
  const auto report = Evaluate(split_, {&mp}, ks, context_);
  const auto list = RecommendMostPopular(*index_, 6).job_ids();
  EXPECT_NEAR(report.rows[0].diversity, DiversityAtK(list, content_.vectors),
              1e-12);
}

TEST_F(EvaluateTest, RandomRecommenderRowsAreConsistent) {
  Ids jobs;
  for (const auto& job : split_.train.jobs) jobs.push_back(job.job_id);
  const RandomRecommender random(jobs, 99);
  const std::vector<std::size_t> ks = {3, 6};
  const auto report = Evaluate(split_, {&random}, ks, context_);
  for (const auto& row : report.rows) {
    std::vector<Ids> lists;
    double ndcg = 0.0;
    for (const auto& [user, relevant] : split_.test) {
      lists.push_back(random.Recommend(user, row.k).job_ids());
      ndcg += NdcgAtK(lists.back(), relevant, row.k);
    }
    const double novelty = NoveltyAtK(lists, context_.popularity, row.k);
    EXPECT_NEAR(row.novelty, novelty, 1e-12);
    EXPECT_NEAR(row.ndcg, ndcg / split_.test.size(), 1e-12);
    EXPECT_NEAR(row.novelty_star,
                1.0 - std::abs(context_.target.value - novelty), 1e-12);
    for (double v : {row.ndcg, row.novelty, row.diversity, row.novelty_star}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST_F(EvaluateTest, NoTestUsersIsAnInputError) {
  SplitDataset empty = split_;
  empty.test.clear();
  const MostPopularRecommender mp(index_);
  const std::vector<std::size_t> ks = {3};
  EXPECT_THROW(Evaluate(empty, {&mp}, ks, context_), InputError);
}

TEST(ReportTest, CsvAndTable) {
  EvaluationReport report;
  report.rows = {{"MP", 3, 0.0395, 0.1649, 0.7261, 0.5849},
                 {"Doc2Vec-BLL-d100", 3, 0.01564, 0.73, 0.5974, 0.85},
                 {"Hybrid-BLL-d100-CF", 6, 1.0 / 3.0, 0.5, 0.25, 0.92}};
  EXPECT_EQ(report.ToCsv(),
            "approach,k,ndcg,novelty,diversity,novelty_star\n"
            "MP,3,0.0395,0.1649,0.7261,0.5849\n"
            "Doc2Vec-BLL-d100,3,0.0156,0.7300,0.5974,0.8500\n"
            "Hybrid-BLL-d100-CF,6,0.3333,0.5000,0.2500,0.9200\n");
  const auto table = report.RenderTable();
  EXPECT_NE(table.find("Novelty*"), std::string::npos);
  EXPECT_NE(table.find("0.3333"), std::string::npos);
  ASSERT_NE(report.find("MP", 3), nullptr);
  EXPECT_EQ(report.find("MP", 6), nullptr);
}

}  // namespace
}  // namespace embrec
