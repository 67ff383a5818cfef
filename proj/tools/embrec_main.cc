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

// Command-line entry point: synth, train, evaluate and stats subcommands.
//
// Exit codes: 0 success, 1 input error, 2 config error, 3 internal failure.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "embrec/config.h"
#include "embrec/error.h"
#include "embrec/harness.h"
#include "embrec/synth.h"

namespace {

enum ExitCode { kOk = 0, kInputError = 1, kConfigError = 2, kInternalError = 3 };

struct CommandOptions {
  std::string config_path;
  std::map<std::string, std::string> flags;
};

void AddConfigOptions(CLI::App* cmd, CommandOptions& opts) {
  cmd->add_option("--config", opts.config_path, "INI configuration file");
  for (const auto& key : embrec::ConfigKeys()) {
    const std::string name(key.name);
    cmd->add_option_function<std::string>(
        "--" + name,
        [&opts, name](const std::string& value) { opts.flags[name] = value; },
        fmt::format("[{}] {} (default {})", key.section, key.help,
                    key.default_value));
  }
}

embrec::ConfigValues Resolve(const CommandOptions& opts) {
  embrec::ConfigValues values;
  if (!opts.config_path.empty()) values.LoadFile(opts.config_path);
  values.LoadEnvironment();
  for (const auto& [key, value] : opts.flags) values.Set(key, value);
  return values;
}

int RunSynth(const CommandOptions& opts) {
  const auto values = Resolve(opts);
  const auto config = embrec::SynthConfig::FromValues(values);
  const auto data = embrec::Synthesize(config);
  embrec::WriteJobs(data.jobs, values.Get("jobs"));
  embrec::WriteInteractions(data.interactions, values.Get("interactions"));
  std::cout << fmt::format("wrote {} jobs to {} and {} interactions to {}\n",
                           data.jobs.size(), values.Get("jobs"),
                           data.interactions.size(), values.Get("interactions"));
  return kOk;
}

int RunTrain(const CommandOptions& opts) {
  const auto config = embrec::ExperimentConfig::FromValues(Resolve(opts));
  const auto jobs = embrec::LoadJobs(config.jobs);
  const auto results = embrec::TrainModels(jobs, config);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto path = embrec::ModelPath(config.model, config.dims[i]);
    results[i].model.Save(path);
    const auto& loss = results[i].report.epoch_mean_loss;
    std::cout << fmt::format("d={}: {} docs, {} words, loss {:.4f} -> {:.4f}, "
                             "saved {}\n",
                             config.dims[i], results[i].model.size(),
                             results[i].model.vocabulary().size(), loss.front(),
                             loss.back(), path.string());
  }
  return kOk;
}

int RunEvaluate(const CommandOptions& opts) {
  const auto config = embrec::ExperimentConfig::FromValues(Resolve(opts));
  const auto start = std::chrono::steady_clock::now();
  const auto result = embrec::RunExperiment(config, &std::cerr);
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  std::cout << result.table;
  std::cout << fmt::format("report written to {} ({:.1f} s)\n",
                           config.output.string(), elapsed.count());
  return kOk;
}

int RunStats(const CommandOptions& opts) {
  const auto config = embrec::ExperimentConfig::FromValues(Resolve(opts));
  auto jobs = embrec::LoadJobs(config.jobs);
  auto loaded = embrec::LoadInteractions(config.interactions, std::move(jobs));
  if (!loaded.rejections.empty()) {
    const auto path =
        embrec::WriteRejectionReport(config.interactions, loaded.rejections);
    std::cout << fmt::format("rejected rows: {} (see {})\n",
                             loaded.rejections.size(), path.string());
  }
  const auto stats = embrec::ComputeStats(loaded.dataset);
  const auto split =
      embrec::Split(loaded.dataset, config.min_history, config.holdout);
  std::cout << fmt::format("users:        {}\n", stats.users)
            << fmt::format("jobs:         {}\n", stats.jobs)
            << fmt::format("views:        {}\n", stats.interactions)
            << fmt::format("applies:      {}\n", stats.applies)
            << fmt::format("sparsity:     {}\n",
                           embrec::FormatSparsity(stats.sparsity))
            << fmt::format("test users:   {}\n", split.test.size())
            << fmt::format("held out:     {} views\n", split.held_out.size());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding-based job recommendation and offline evaluation"};
  app.require_subcommand(1);

  CommandOptions synth_opts, train_opts, eval_opts, stats_opts;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  AddConfigOptions(synth, synth_opts);
  auto* train = app.add_subcommand("train", "train and save embedding models");
  AddConfigOptions(train, train_opts);
  auto* evaluate =
      app.add_subcommand("evaluate", "run every approach and write the report");
  AddConfigOptions(evaluate, eval_opts);
  evaluate->add_option_function<std::string>(
      "--out",
      [&eval_opts](const std::string& v) { eval_opts.flags["output"] = v; },
      "alias for --output");
  auto* stats = app.add_subcommand("stats", "print dataset statistics");
  AddConfigOptions(stats, stats_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (synth->parsed()) return RunSynth(synth_opts);
    if (train->parsed()) return RunTrain(train_opts);
    if (evaluate->parsed()) return RunEvaluate(eval_opts);
    if (stats->parsed()) return RunStats(stats_opts);
  } catch (const embrec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const embrec::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}
