// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Exit status: 0 on success, CLI11's codes (>= 100)
// on bad usage, 10 + error class for toolkit errors (see mise::ErrorKind),
// 1 otherwise.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mise/aggregate.hpp"
#include "mise/error.hpp"
#include "mise/minidata.hpp"
#include "mise/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

int exit_code(mise::ErrorKind kind) { return 10 + static_cast<int>(kind); }

void apply_aggregation(const std::vector<std::string>& specs, mise::PipelineConfig& cfg) {
  for (const auto& spec : specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) {
      cfg.mpeg7_aggregation = cfg.dnn_aggregation = mise::aggregation_from_string(spec);
      continue;
    }
    const std::string family = spec.substr(0, eq);
    const auto kind = mise::aggregation_from_string(spec.substr(eq + 1));
    if (family == "mpeg7") {
      cfg.mpeg7_aggregation = kind;
    } else if (family == "dnn") {
      cfg.dnn_aggregation = kind;
    } else {
      mise::fail(mise::ErrorKind::Parameter,
                 "--agg family must be mpeg7 or dnn, got '" + family + "'");
    }
  }
}

/// Fills unset input paths from a dataset directory laid out like data/mini.
void apply_data_dir(const fs::path& dir, mise::PipelineConfig& cfg) {
  if (dir.empty()) return;
  auto fill = [&](fs::path& target, const char* name) {
    if (target.empty() && fs::exists(dir / name)) target = dir / name;
  };
  fill(cfg.videos, "videos");
  fill(cfg.ratings, "ratings.csv");
  fill(cfg.tags, "tags.csv");
  fill(cfg.movies, "movies.csv");
  fill(cfg.embeddings, "embeddings.csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mise-en-scene feature extraction and Collective SLIM recommendation"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with option values");

  mise::PipelineConfig cfg;
  fs::path data_dir;
  std::vector<std::string> agg;
  std::string features = "mpeg7";

  app.add_option("--data", data_dir, "Dataset directory (videos/, ratings.csv, ...)");
  app.add_option("--videos", cfg.videos, "Directory of <movie_id>.y4m files or PPM dirs");
  app.add_option("--ratings", cfg.ratings, "ratings.csv");
  app.add_option("--tags", cfg.tags, "tags.csv");
  app.add_option("--movies", cfg.movies, "movies.csv");
  app.add_option("--embeddings", cfg.embeddings, "Per-keyframe DNN vectors (CSV or binary)");
  app.add_option("--cache", cfg.cache, "Artifact cache directory")->capture_default_str();
  app.add_option("--report", cfg.report, "Copy the evaluation CSV here");

  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "Worker threads for segment/extract/aggregate")
      ->capture_default_str();
  app.add_flag("--force", cfg.force, "Rebuild stale cache entries");

  app.add_option("--threshold", cfg.shot_threshold, "Shot boundary similarity threshold")
      ->capture_default_str();
  app.add_option("--agg", agg,
                 "Aggregation {intersection|average|median|union}, optionally "
                 "per family as mpeg7=KIND or dnn=KIND");
  app.add_option("--cca-k", cfg.cca_components, "Canonical pairs (0 = maximum)")
      ->capture_default_str();
  app.add_option("--cca-ridge", cfg.cca_ridge, "CCA ridge (negative = default)")
      ->capture_default_str();
  app.add_option("--lsa-rank", cfg.lsa_rank, "Tag LSA rank")->capture_default_str();

  app.add_option("--features", features, "Feature family for train/evaluate/recommend")
      ->check(CLI::IsMember({"mpeg7", "dnn", "fused", "genre", "tag-lsa"}))
      ->capture_default_str();
  app.add_option("--alpha", cfg.train.alpha, "Weight of the ranking term")->capture_default_str();
  app.add_option("--gamma", cfg.train.gamma, "L2 penalty")->capture_default_str();
  app.add_option("--lr", cfg.train.learning_rate, "Learning rate")->capture_default_str();
  app.add_option("--epochs", cfg.train.epochs, "Training epochs")->capture_default_str();
  app.add_option("--samples", cfg.train.samples_per_epoch,
                 "Ranking samples per epoch (0 = one per positive)")
      ->capture_default_str();
  app.add_option("--feature-steps", cfg.train.feature_steps,
                 "Feature-term gradient steps per epoch")
      ->capture_default_str();
  app.add_option("--relevance", cfg.train.relevance_threshold,
                 "Ratings at or above this are positive")
      ->capture_default_str();
  app.add_option("--folds", cfg.folds, "Cross-validation folds")->capture_default_str();
  app.add_option("--cutoffs", cfg.cutoffs, "Top-N cutoffs")->capture_default_str();
  app.add_option("--user", cfg.user, "User id for recommend");
  app.add_option("--top", cfg.top_n, "List length for recommend")->capture_default_str();

  const std::vector<std::pair<mise::Stage, const char*>> stages = {
      {mise::Stage::Segment, "Detect shots and keyframes"},
      {mise::Stage::Extract, "MPEG-7 descriptors per keyframe; validate DNN coverage"},
      {mise::Stage::Aggregate, "Pool keyframe vectors per movie"},
      {mise::Stage::Fuse, "CCA fusion of MPEG-7 and DNN vectors"},
      {mise::Stage::Textfeat, "Genre and tag-LSA item features"},
      {mise::Stage::Train, "Train Collective SLIM on all ratings"},
      {mise::Stage::Evaluate, "Cross-validated top-N evaluation"},
      {mise::Stage::Recommend, "Top-N list for one user"},
  };
  std::vector<std::pair<CLI::App*, mise::Stage>> stage_commands;
  for (const auto& [stage, help] : stages) {
    stage_commands.emplace_back(app.add_subcommand(std::string(mise::to_string(stage)), help),
                                stage);
  }
  auto* all = app.add_subcommand("all", "segment through evaluate");
  fs::path mini_dir = "data/mini";
  auto* mini = app.add_subcommand("generate-mini", "Write the synthetic mini-dataset");
  mini->add_option("dir", mini_dir, "Output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (mini->parsed()) {
      mise::generate_mini_dataset(mini_dir, cfg.seed);
      std::cout << "wrote mini-dataset to " << mini_dir.string() << "\n";
      return 0;
    }
    apply_data_dir(data_dir, cfg);
    apply_aggregation(agg, cfg);
    cfg.features = mise::feature_family_from_string(features);
    if (all->parsed()) {
      mise::run_all(cfg, std::cout);
      return 0;
    }
    for (const auto& [cmd, stage] : stage_commands) {
      if (cmd->parsed()) std::cout << mise::run_stage(stage, cfg, std::cout).summary << "\n";
    }
  } catch (const mise::Error& e) {
    std::cerr << "error (" << mise::to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return exit_code(mise::ErrorKind::Io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
