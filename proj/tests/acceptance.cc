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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails. Usage: acceptance [synthetic.ini]

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>

#include <fmt/core.h>

#include "embrec/config.h"
#include "embrec/harness.h"
#include "embrec/metrics.h"
#include "embrec/profile.h"
#include "embrec/recommend.h"
#include "embrec/synth.h"
#include "reported_values.h"
#include "test_util.h"

namespace embrec {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.clear();
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

Outcome NoveltyStarPairs() {
  Outcome out;
  double worst = 0.0;
  for (const auto& pair : testing::kReportedNoveltyPairs) {
    const double err = std::abs(NoveltyStar(pair.novelty, {}) - pair.novelty_star);
    worst = std::max(worst, err);
    out.Check(err <= 5e-4, fmt::format("{} off by {:.2e}", pair.row, err));
  }
  if (out.pass) {
    out.detail = fmt::format("{} pairs, max error {:.1e}",
                             testing::kReportedNoveltyPairs.size(), worst);
  }
  return out;
}

Outcome DatasetSparsity() {
  Outcome out;
  const double s = Sparsity(3011, 2345, 140411);
  out.Check(std::abs(s * 100.0 - 98.01) <= 0.01,
            fmt::format("sparsity {:.4f}%", s * 100.0));
  out.Check(FormatSparsity(s) == "98.01%", "formatted " + FormatSparsity(s));
  if (out.pass) out.detail = FormatSparsity(s);
  return out;
}

UserHistory History(std::vector<ViewEvent> events) {
  return {"u", std::move(events)};
}

Outcome BllFidelity() {
  Outcome out;
  BllConfig config;
  config.reference_time = 1'000'000;
  const double one = BllActivation(History({{"A", 1'000'000 - 100}}), "A", config);
  const double two = BllActivation(
      History({{"A", 1'000'000 - 1}, {"A", 1'000'000 - 1}}), "A", config);
  out.Check(std::abs(one - -2.302585) <= 1e-6, fmt::format("one view {}", one));
  out.Check(std::abs(two - 0.693147) <= 1e-6, fmt::format("two views {}", two));

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Timestamp> age(1, 500'000);
  std::uniform_real_distribution<double> decay(0.05, 1.5);
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    config.decay = decay(rng);
    const Timestamp a = age(rng);
    Timestamp b = age(rng);
    while (b == a) b = age(rng);
    const auto h = History({{"A", config.reference_time - a},
                            {"B", config.reference_time - b}});
    const double act_a = BllActivation(h, "A", config);
    const double act_b = BllActivation(h, "B", config);
    if ((act_a > act_b) != (a < b)) ++violations;
    auto more = h;
    more.events.push_back({"A", config.reference_time - age(rng)});
    if (!(BllActivation(more, "A", config) > act_a)) ++violations;
  }
  out.Check(violations == 0, fmt::format("{} monotonicity violations", violations));
  if (out.pass) {
    out.detail = fmt::format("{:.6f}, {:.6f}, 1000 randomized cases", one, two);
  }
  return out;
}

Outcome SoftmaxContract() {
  Outcome out;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> value(-500.0, 500.0);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  std::size_t bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(1 + rng() % 12);
    if (trial % 3 == 0) {
      for (auto& x : a) x = (trial % 2 ? 500.0 : -500.0) + shift(rng);
    } else if (trial % 3 == 1) {
      for (auto& x : a) x = value(rng) * 0.7;
    } else {
      for (auto& x : a) x = shift(rng);
    }
    const auto w = SoftmaxWeights(a);
    double sum = 0.0;
    for (double x : w) {
      if (!(x > 0.0)) ++bad;
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) ++bad;
    const double c = value(rng);
    auto shifted = a;
    for (auto& x : shifted) x += c;
    const auto ws = SoftmaxWeights(shifted);
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (std::abs(ws[i] - w[i]) > 1e-12) ++bad;
    }
  }
  out.Check(bad == 0, fmt::format("{} contract violations", bad));
  if (out.pass) out.detail = "1000 vectors up to |a| = 550";
  return out;
}

Outcome GradientCheck() {
  Outcome out;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 0.7);
  constexpr double h = 1e-5;
  constexpr std::size_t d = 8;
  double worst = 0.0;
  auto rel = [](const std::vector<double>& a, const std::vector<double>& n) {
    double diff = 0, na = 0, nn = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      diff += (a[i] - n[i]) * (a[i] - n[i]);
      na += a[i] * a[i];
      nn += n[i] * n[i];
    }
    return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nn), 1e-8});
  };
  for (int trial = 0; trial < 120; ++trial) {
    auto vec = [&] {
      std::vector<double> x(d);
      for (auto& c : x) c = normal(rng);
      return x;
    };
    auto v = vec();
    auto pos = vec();
    std::vector<std::vector<double>> negs(1 + trial % 5);
    for (auto& n : negs) n = vec();
    auto loss = [&] {
      std::vector<std::span<const double>> views(negs.begin(), negs.end());
      return ComputeNegativeSamplingGradient(v, pos, views).loss;
    };
    std::vector<std::span<const double>> views(negs.begin(), negs.end());
    const auto g = ComputeNegativeSamplingGradient(v, pos, views);
    auto numeric = [&](std::vector<double>& x) {
      std::vector<double> out_grad(d);
      for (std::size_t i = 0; i < d; ++i) {
        const double saved = x[i];
        x[i] = saved + h;
        const double up = loss();
        x[i] = saved - h;
        const double down = loss();
        x[i] = saved;
        out_grad[i] = (up - down) / (2 * h);
      }
      return out_grad;
    };
    worst = std::max(worst, rel(g.doc, numeric(v)));
    worst = std::max(worst, rel(g.positive, numeric(pos)));
    for (std::size_t n = 0; n < negs.size(); ++n) {
      worst = std::max(worst, rel(g.negatives[n], numeric(negs[n])));
    }
  }
  out.Check(worst < 1e-4, fmt::format("max relative error {:.2e}", worst));
  if (out.pass) out.detail = fmt::format("120 cases, max relative error {:.2e}", worst);
  return out;
}

bool SameRanking(const std::vector<std::string>& ids,
                 const std::vector<double>& scores,
                 const std::vector<testing::RankedId>& want) {
  if (ids.size() != want.size()) return false;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] != want[i].id || std::abs(scores[i] - want[i].score) > 1e-12) {
      return false;
    }
  }
  return true;
}

Outcome OracleEquivalence() {
  Outcome out;
  std::mt19937_64 rng(6);
  std::size_t nearest_bad = 0, cf_bad = 0, cbf_bad = 0, cf_checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t num_jobs = 10 + rng() % 91;
    const std::size_t num_users = 5 + rng() % 46;

    // nearest
    TrainConfig tc;
    tc.dim = 2 + rng() % 10;
    std::vector<std::string> ids;
    std::vector<float> vecs;
    std::normal_distribution<float> nf;
    for (std::size_t j = 0; j < num_jobs; ++j) {
      ids.push_back(fmt::format("j{:03}", j));
      for (std::size_t c = 0; c < tc.dim; ++c) {
        // Coarse values make exact ties common.
        vecs.push_back(trial % 2 ? std::round(nf(rng)) : nf(rng));
      }
    }
    const EmbeddingModel model(tc, ids, vecs, Vocabulary::FromCounts({{"w", 1}}),
                               std::vector<float>(tc.dim, 0.0f));
    std::vector<double> q(tc.dim);
    std::normal_distribution<double> nd;
    for (auto& x : q) x = nd(rng);
    std::set<std::string> exclude;
    for (int e = 0; e < 3; ++e) exclude.insert(ids[rng() % ids.size()]);
    const std::size_t k = 1 + rng() % 20;
    const auto got = Nearest(model, q, k, exclude);
    std::vector<std::string> got_ids;
    std::vector<double> got_scores;
    for (const auto& n : got) {
      got_ids.push_back(n.job_id);
      got_scores.push_back(n.similarity);
    }
    nearest_bad += !SameRanking(got_ids, got_scores,
                                testing::NearestOracle(model, q, k, exclude));

    // CF
    auto data = testing::RandomDataset(rng, num_users, num_jobs, 8);
    const TrainingIndex index(data);
    std::map<std::string, std::set<std::string>> user_jobs;
    for (const auto& e : data.interactions) {
      if (e.action == Action::kView) user_jobs[e.user_id].insert(e.job_id);
    }
    const std::size_t k_nn = 1 + rng() % 10;
    for (const auto& [user, history] : index.histories()) {
      const auto list = RecommendCollaborative(history, index, k, k_nn);
      const auto want = testing::CfOracle(user_jobs, user, k, k_nn);
      std::vector<double> scores;
      for (const auto& item : list.items) scores.push_back(item.score);
      ++cf_checks;
      if (!want.has_neighbors) {
        cf_bad += list.job_ids() != PopularityFallback(index, history, k).job_ids();
      } else {
        cf_bad += !SameRanking(list.job_ids(), scores, want.ranking);
      }
    }

    // CBF
    static const std::vector<std::string> words = {
        "data", "python", "sales", "nurse", "cook", "driver", "teacher",
        "engineer", "remote", "senior", "junior", "cloud", "retail", "legal"};
    for (auto& job : data.jobs) {
      job.description.clear();
      const auto len = 1 + rng() % 7;
      for (std::size_t w = 0; w < len; ++w) {
        job.description += words[rng() % words.size()] + " ";
      }
    }
    const auto content = ContentIndex::Build(data.jobs);
    const auto& [user, history] = *index.histories().begin();
    std::vector<std::string> seen;
    for (const auto& e : history.events) seen.push_back(e.job_id);
    const auto list = RecommendContentBased(history, content, k);
    std::vector<double> scores;
    for (const auto& item : list.items) scores.push_back(item.score);
    cbf_bad += !SameRanking(list.job_ids(), scores,
                            testing::CbfOracle(data.jobs, seen, history.last_job(), k));
  }
  out.Check(nearest_bad == 0, fmt::format("nearest mismatches {}", nearest_bad));
  out.Check(cf_bad == 0, fmt::format("CF mismatches {}", cf_bad));
  out.Check(cbf_bad == 0, fmt::format("CBF mismatches {}", cbf_bad));
  if (out.pass) {
    out.detail = fmt::format("50 instances; nearest, CBF and {} CF users", cf_checks);
  }
  return out;
}

Outcome MetricHandValues() {
  Outcome out;
  std::set<std::string> relevant;
  for (int i = 0; i < 10; ++i) relevant.insert(fmt::format("r{}", i));
  const std::vector<std::string> list = {"x", "r3", "y"};
  const double ndcg = NdcgAtK(list, relevant, 3);
  out.Check(std::abs(ndcg - 0.29608) <= 1e-5, fmt::format("ndcg {}", ndcg));

  ContentVectors content;
  content.emplace("a", SparseVector({{0, 0.3}, {4, 1.2}}));
  content.emplace("b", SparseVector({{0, 0.3}, {4, 1.2}}));
  content.emplace("c", SparseVector({{0, 0.3}, {4, 1.2}}));
  const std::vector<std::string> same = {"a", "b", "c"};
  const double div = DiversityAtK(same, content);
  out.Check(div == 0.0, fmt::format("diversity {}", div));

  const PopularityTable pops({{"hot", 40}, {"cold", 0}});
  const double nov = NoveltyAtK({{"hot", "cold"}}, pops, 2);
  out.Check(std::abs(nov - 0.5) <= 1e-9, fmt::format("novelty {}", nov));
  if (out.pass) {
    out.detail = fmt::format("ndcg {:.5f}, diversity {}, novelty {}", ndcg, div, nov);
  }
  return out;
}

// Uniform random top-k over all jobs, seeded per user.
class UniformRandomRecommender : public Recommender {
 public:
  UniformRandomRecommender(std::vector<std::string> jobs, std::uint64_t seed)
      : jobs_(std::move(jobs)), seed_(seed) {}
  std::string name() const override { return "Random"; }
  RecommendationList Recommend(const std::string& user_id,
                               std::size_t k) const override {
    std::mt19937_64 rng(DeriveSeed(seed_, user_id));
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

Outcome EndToEnd(const std::string& ini) {
  Outcome out;
  ConfigValues values;
  if (!ini.empty()) values.LoadFile(ini);
  auto synth = SynthConfig::FromValues(values);
  out.Check(synth.num_topics == 2 && synth.jobs_per_topic == 100 &&
                synth.users == 300 && synth.views_per_user == 30 &&
                synth.seed == 42,
            "synthetic config does not match 2x100 jobs, 300 users, 30 views, seed 42");
  if (!out.pass) return out;

  testing::TempDir dir;
  const auto start = std::chrono::steady_clock::now();
  const auto data = Synthesize(synth);
  auto config = ExperimentConfig::FromValues(values);
  config.jobs = dir.file("jobs.jsonl");
  config.interactions = dir.file("interactions.csv");
  config.model = dir.file("run1/model");
  config.output = dir.file("run1.csv");
  std::filesystem::create_directories(dir.file("run1"));
  WriteJobs(data.jobs, config.jobs);
  WriteInteractions(data.interactions, config.interactions);
  const auto result = RunExperiment(config);
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  out.Check(elapsed.count() < 60.0, fmt::format("(a) took {:.1f} s", elapsed.count()));

  // (b) home-topic share of LAST/BLL slots at the largest k.
  const std::size_t k = *std::max_element(config.ks.begin(), config.ks.end());
  double worst_home = 1.0;
  std::string worst_name;
  for (const auto& rec : result.recommenders) {
    const auto* embed = dynamic_cast<const EmbeddingRecommender*>(rec.get());
    if (embed == nullptr || embed->strategy() == Strategy::kAvg) continue;
    std::size_t home = 0, slots = 0;
    for (const auto& [user, relevant] : result.split->test) {
      for (const auto& job : rec->Recommend(user, k).job_ids()) {
        home += data.job_topic.at(job) == data.user_topic.at(user);
        ++slots;
      }
    }
    const double share = slots ? static_cast<double>(home) / slots : 0.0;
    if (share < worst_home) {
      worst_home = share;
      worst_name = rec->name();
    }
  }
  out.Check(worst_home >= 0.85,
            fmt::format("(b) {} home-topic share {:.3f}", worst_name, worst_home));

  // (c) CF against a uniform random recommender at k = 6.
  std::vector<std::string> jobs;
  for (const auto& job : data.jobs) jobs.push_back(job.job_id);
  const UniformRandomRecommender random(jobs, DeriveSeed(config.seed, "random"));
  EvaluationContext context;
  context.content = &result.content->vectors;
  context.popularity = PopularityTable::FromDataset(result.split->train);
  context.target = result.report.target;
  const std::vector<std::size_t> k6 = {6};
  const double random_ndcg =
      Evaluate(*result.split, {&random}, k6, context).rows.at(0).ndcg;
  const auto* cf = result.report.find("CF", 6);
  const double cf_ndcg = cf ? cf->ndcg : 0.0;
  out.Check(cf != nullptr && cf_ndcg >= 2.0 * random_ndcg,
            fmt::format("(c) CF nDCG@6 {:.4f} vs random {:.4f}", cf_ndcg, random_ndcg));

  // (d) AVG diversity >= LAST diversity at k = 6, per dimension.
  std::string div_detail;
  for (std::size_t dim : config.dims) {
    const auto* avg = result.report.find(fmt::format("Doc2Vec-AVG-d{}", dim), 6);
    const auto* last = result.report.find(fmt::format("Doc2Vec-LAST-d{}", dim), 6);
    const bool ok = avg && last && avg->diversity >= last->diversity;
    out.Check(ok, fmt::format("(d) d{} AVG {:.4f} < LAST {:.4f}", dim,
                              avg ? avg->diversity : 0.0,
                              last ? last->diversity : 0.0));
    if (avg && last) {
      div_detail += fmt::format(" d{} {:.3f}/{:.3f}", dim, avg->diversity,
                                last->diversity);
    }
  }

  // (e) a second run from scratch writes the same bytes.
  auto again = config;
  again.model = dir.file("run2/model");
  again.output = dir.file("run2.csv");
  std::filesystem::create_directories(dir.file("run2"));
  RunExperiment(again);
  out.Check(testing::ReadFile(config.output) == testing::ReadFile(again.output),
            "(e) CSV differs between runs");

  if (out.pass) {
    out.detail = fmt::format(
        "{:.1f} s; home-topic >= {:.3f}; CF {:.4f} vs random {:.4f}; "
        "AVG/LAST div@6{}; identical CSV",
        elapsed.count(), worst_home, cf_ndcg, random_ndcg, div_detail);
  }
  return out;
}

Outcome CompositionIdentity() {
  Outcome out;
  TrainConfig config;
  config.dim = 16;
  config.epochs = 5;
  SynthConfig synth;
  synth.users = 10;
  const auto data = Synthesize(synth);
  const auto model = Train(MakeDocuments(data.jobs), config).model;
  std::mt19937_64 rng(9);
  BllConfig bll;
  bll.reference_time = 1'000'000;
  std::size_t bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto& job = model.job_ids()[rng() % model.size()];
    UserHistory history{"u", {}};
    const auto views = 1 + rng() % 5;
    for (std::size_t i = 0; i < views; ++i) {
      history.events.push_back({job, static_cast<Timestamp>(rng() % 1'000'000)});
    }
    std::sort(history.events.begin(), history.events.end(),
              [](const ViewEvent& a, const ViewEvent& b) {
                return a.timestamp < b.timestamp;
              });
    const auto last = LastVector(history, model).values;
    const auto avg = AvgVector(history, model).values;
    const auto b = BllVector(history, model, bll).values;
    for (std::size_t i = 0; i < last.size(); ++i) {
      if (std::abs(last[i] - avg[i]) > 1e-12 || std::abs(last[i] - b[i]) > 1e-12) {
        ++bad;
        break;
      }
    }
    const auto l = RecommendEmbedding(history, model, Strategy::kLast, bll, 6);
    if (l.job_ids() !=
            RecommendEmbedding(history, model, Strategy::kAvg, bll, 6).job_ids() ||
        l.job_ids() !=
            RecommendEmbedding(history, model, Strategy::kBll, bll, 6).job_ids()) {
      ++bad;
    }
  }
  out.Check(bad == 0, fmt::format("{} mismatching histories", bad));
  if (out.pass) out.detail = "200 single-job histories";
  return out;
}

}  // namespace
}  // namespace embrec

int main(int argc, char** argv) {
  const std::string ini = argc > 1 ? argv[1] : "";
  struct Criterion {
    const char* name;
    std::function<embrec::Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"novelty* matches the reported table", embrec::NoveltyStarPairs},
      {"dataset sparsity", embrec::DatasetSparsity},
      {"BLL activation fidelity", embrec::BllFidelity},
      {"softmax contract", embrec::SoftmaxContract},
      {"negative-sampling gradient check", embrec::GradientCheck},
      {"nearest/CF/CBF oracle equivalence", embrec::OracleEquivalence},
      {"metric hand values", embrec::MetricHandValues},
      {"end-to-end synthetic run", [&] { return embrec::EndToEnd(ini); }},
      {"single-job composition identity", embrec::CompositionIdentity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    embrec::Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::cout << fmt::format("{} {}. {}: {}\n", outcome.pass ? "PASS" : "FAIL",
                             i + 1, criteria[i].name, outcome.detail)
              << std::flush;
  }
  std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - failed,
                           criteria.size());
  return failed == 0 ? 0 : 1;
}
