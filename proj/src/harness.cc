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

#include "embrec/harness.h"

#include <algorithm>
#include <fstream>
#include <set>

#include <fmt/core.h>

#include "embrec/error.h"
#include "output.h"

namespace embrec {
namespace {

// Runs `body`, prefixing any error with the stage name while keeping its
// category.
template <typename F>
auto Stage(std::string_view name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const InputError& e) {
    throw InputError(fmt::format("{}: {}", name, e.what()));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", name, e.what()));
  } catch (const std::exception& e) {
    throw InvariantError(fmt::format("{}: {}", name, e.what()));
  }
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (ks.empty()) throw ConfigError("ks must not be empty");
  for (auto k : ks) {
    if (k < 1) throw ConfigError("every k must be >= 1");
  }
  if (dims.empty()) throw ConfigError("dims must not be empty");
  for (auto d : dims) {
    if (d < 1) throw ConfigError("every dim must be >= 1");
  }
  if (k_nn < 1) throw ConfigError("k_nn must be >= 1");
  if (min_history <= holdout) {
    throw ConfigError("min_history must exceed holdout");
  }
  if (novelty_target && !(*novelty_target >= 0.0 && *novelty_target <= 1.0)) {
    throw ConfigError("novelty_target must lie in [0, 1]");
  }
  const std::set<std::filesystem::path> paths = {jobs, interactions, model,
                                                 output};
  if (paths.size() != 4) throw ConfigError("all paths must be distinct");
  train.Validate();
  bll.Validate();
}

ExperimentConfig ExperimentConfig::FromValues(const ConfigValues& values) {
  ExperimentConfig c;
  c.jobs = values.Get("jobs");
  c.interactions = values.Get("interactions");
  c.model = values.Get("model");
  c.output = values.Get("output");
  c.ks = values.GetCountList("ks");
  c.dims = values.GetCountList("dims");
  c.k_nn = values.GetCount("k_nn");
  c.seed = values.GetU64("seed");
  c.min_history = values.GetCount("min_history");
  c.holdout = values.GetCount("holdout");
  const auto& order = values.Get("hybrid_order");
  if (order == "bll_first") {
    c.bll_first = true;
  } else if (order == "cf_first") {
    c.bll_first = false;
  } else {
    throw ConfigError(fmt::format(
        "hybrid_order must be bll_first or cf_first, got '{}'", order));
  }
  if (values.Get("novelty_target") != "auto") {
    c.novelty_target = values.GetDouble("novelty_target");
  }
  c.train.window = values.GetCount("window");
  c.train.negatives = values.GetCount("negatives");
  c.train.epochs = values.GetCount("epochs");
  c.train.learning_rate = values.GetDouble("learning_rate");
  c.train.min_learning_rate = values.GetDouble("min_learning_rate");
  c.train.min_count = values.GetCount("min_count");
  c.bll.decay = values.GetDouble("decay");
  c.bll.min_age = static_cast<Timestamp>(values.GetCount("min_age"));
  c.Validate();
  return c;
}

std::filesystem::path ModelPath(const std::filesystem::path& prefix,
                                std::size_t dim) {
  auto path = prefix;
  path += fmt::format("-d{}.emb", dim);
  return path;
}

std::vector<Document> MakeDocuments(const std::vector<JobPosting>& jobs) {
  std::vector<Document> docs;
  docs.reserve(jobs.size());
  for (const auto& job : jobs) {
    docs.push_back({job.job_id, Tokenize(job.description)});
  }
  return docs;
}

std::vector<TrainResult> TrainModels(const std::vector<JobPosting>& jobs,
                                     const ExperimentConfig& config) {
  const auto docs = MakeDocuments(jobs);
  std::vector<TrainResult> results;
  for (const auto dim : config.dims) {
    TrainConfig tc = config.train;
    tc.dim = dim;
    tc.seed = DeriveSeed(config.seed, fmt::format("embedding-d{}", dim));
    results.push_back(Train(docs, tc));
  }
  return results;
}

ExperimentResult RunExperimentOn(Dataset data, const ExperimentConfig& config,
                                 std::ostream* log) {
  Stage("config", [&] { config.Validate(); });
  auto say = [&](std::string_view msg) {
    if (log != nullptr) *log << msg << '\n';
  };

  ExperimentResult result;
  result.stats = ComputeStats(data);
  const auto split = Stage("split", [&] {
    return std::make_shared<const SplitDataset>(
        Split(data, config.min_history, config.holdout));
  });
  result.split = split;
  say(fmt::format("split: {} test users, {} held-out views, split_time {}",
                  split->test.size(), split->held_out.size(),
                  split->split_time));

  std::vector<std::shared_ptr<const EmbeddingModel>> models;
  Stage("train_embeddings", [&] {
    const auto docs = MakeDocuments(data.jobs);
    for (const auto dim : config.dims) {
      const auto path = ModelPath(config.model, dim);
      if (!config.model.empty() && std::filesystem::exists(path)) {
        auto model = EmbeddingModel::Load(path);
        if (model.dim() != dim) {
          throw InputError(fmt::format("'{}' has dim {}, expected {}",
                                       path.string(), model.dim(), dim));
        }
        for (const auto& job : data.jobs) {
          if (!model.contains(job.job_id)) {
            throw InputError(fmt::format("'{}' has no vector for job '{}'",
                                         path.string(), job.job_id));
          }
        }
        say(fmt::format("loaded {}", path.string()));
        models.push_back(std::make_shared<const EmbeddingModel>(std::move(model)));
        continue;
      }
      TrainConfig tc = config.train;
      tc.dim = dim;
      tc.seed = DeriveSeed(config.seed, fmt::format("embedding-d{}", dim));
      auto trained = Train(docs, tc);
      if (!trained.report.all_finite) {
        throw InvariantError("training loss became non-finite");
      }
      say(fmt::format("trained d={} ({} steps, final epoch loss {:.4f})", dim,
                      trained.report.steps,
                      trained.report.epoch_mean_loss.back()));
      models.push_back(
          std::make_shared<const EmbeddingModel>(std::move(trained.model)));
    }
  });

  BllConfig bll = config.bll;
  bll.reference_time = split->split_time + 1;

  std::vector<std::shared_ptr<const Recommender>> recommenders;
  std::vector<std::shared_ptr<const EmbeddingRecommender>> bll_recommenders;
  std::shared_ptr<const Recommender> cf;
  Stage("fit_recommenders", [&] {
    result.index = std::make_shared<const TrainingIndex>(split->train);
    result.content =
        std::make_shared<const ContentIndex>(ContentIndex::Build(data.jobs));
    recommenders.push_back(
        std::make_shared<MostPopularRecommender>(result.index));
    recommenders.push_back(
        std::make_shared<ContentBasedRecommender>(result.index, result.content));
    cf = std::make_shared<CollaborativeRecommender>(result.index, config.k_nn);
    recommenders.push_back(cf);
    for (const auto strategy : {Strategy::kLast, Strategy::kAvg, Strategy::kBll}) {
      for (const auto& model : models) {
        auto r = std::make_shared<EmbeddingRecommender>(result.index, model,
                                                        strategy, bll);
        if (strategy == Strategy::kBll) bll_recommenders.push_back(r);
        recommenders.push_back(std::move(r));
      }
    }
  });

  EvaluationContext context;
  Stage("evaluate", [&] {
    context.content = &result.content->vectors;
    context.popularity = PopularityTable::FromDataset(split->train);
    context.target =
        config.novelty_target
            ? NoveltyTarget{*config.novelty_target}
            : NoveltyTarget::FromApplies(split->train, context.popularity);
    say(fmt::format("target novelty {:.4f}", context.target.value));

    std::vector<const Recommender*> raw;
    for (const auto& r : recommenders) raw.push_back(r.get());
    result.report = Evaluate(*split, raw, config.ks, context);

    // Hybrid partner: the BLL dimension with the best mean Novelty*, ties to
    // the smaller dimension.
    std::shared_ptr<const EmbeddingRecommender> best;
    double best_score = -1.0;
    for (const auto& r : bll_recommenders) {
      double score = 0.0;
      for (const auto k : config.ks) {
        score += result.report.find(r->name(), k)->novelty_star;
      }
      score /= static_cast<double>(config.ks.size());
      if (score > best_score || (score == best_score && r->dim() < best->dim())) {
        best = r;
        best_score = score;
      }
    }
    result.hybrid_dim = best->dim();
    const auto name = config.bll_first
                          ? fmt::format("Hybrid-BLL-d{}-CF", best->dim())
                          : fmt::format("Hybrid-CF-BLL-d{}", best->dim());
    auto hybrid = config.bll_first
                      ? std::make_shared<HybridRecommender>(best, cf, name)
                      : std::make_shared<HybridRecommender>(cf, best, name);
    const auto rows = Evaluate(*split, {hybrid.get()}, config.ks, context).rows;
    result.report.rows.insert(result.report.rows.end(), rows.begin(),
                              rows.end());
    recommenders.push_back(std::move(hybrid));
  });
  result.recommenders = std::move(recommenders);
  result.table = result.report.RenderTable();
  return result;
}

ExperimentResult RunExperiment(const ExperimentConfig& config,
                               std::ostream* log) {
  Stage("config", [&] { config.Validate(); });
  auto jobs = Stage("load_jobs", [&] { return LoadJobs(config.jobs); });
  auto loaded = Stage("load_interactions", [&] {
    if (!std::filesystem::exists(config.interactions)) {
      throw InputError(fmt::format("'{}' does not exist",
                                   config.interactions.string()));
    }
    return LoadInteractions(config.interactions, std::move(jobs));
  });
  if (!loaded.rejections.empty()) {
    const auto path = WriteRejectionReport(config.interactions, loaded.rejections);
    if (log != nullptr) {
      *log << fmt::format("rejected {} rows, see {}\n", loaded.rejections.size(),
                          path.string());
    }
  }
  auto result = RunExperimentOn(std::move(loaded.dataset), config, log);
  result.rejections = std::move(loaded.rejections);
  Stage("write_report", [&] {
    auto out = internal::OpenOutput(config.output);
    if (!out) {
      throw InputError(fmt::format("cannot write '{}'", config.output.string()));
    }
    out << result.report.ToCsv();
  });
  return result;
}

}  // namespace embrec
