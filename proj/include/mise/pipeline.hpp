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

// Stage orchestration over the artifact cache.
//
//   segment   videos                -> segment/shots_<movie>.csv
//   extract   segment (+embeddings) -> extract/{mpeg7_keyframes,keyframes,dnn_keyframes}.csv
//   aggregate extract               -> aggregate/{mpeg7,dnn}.csv
//   fuse      aggregate (+ratings)  -> fuse/{fused.csv,cca.bin}
//   textfeat  movies, tags          -> textfeat/{genre,tag_lsa}.csv
//   train     ratings + features    -> train/<family>/{model.bin,loss.csv}
//   evaluate  train/<family>        -> evaluate/<family>/{report.csv,report.txt}
//   recommend train/<family>        -> top-N list on the output stream

#ifndef MISE_PIPELINE_HPP
#define MISE_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mise/aggregate.hpp"
#include "mise/recsys.hpp"

namespace mise {

enum class Stage { Segment, Extract, Aggregate, Fuse, Textfeat, Train, Evaluate, Recommend };

std::string_view to_string(Stage stage) noexcept;

enum class FeatureFamily { Mpeg7, Dnn, Fused, Genre, TagLsa };

std::string_view to_string(FeatureFamily family) noexcept;
FeatureFamily feature_family_from_string(std::string_view name);

struct PipelineConfig {
  std::filesystem::path videos;
  std::filesystem::path ratings;
  std::filesystem::path tags;
  std::filesystem::path movies;
  std::filesystem::path embeddings;  // optional; enables dnn and fused
  std::filesystem::path cache = "mise-cache";
  std::filesystem::path report;      // optional copy of the evaluation CSV

  double shot_threshold = 0.75;
  AggregationKind mpeg7_aggregation = AggregationKind::Intersection;
  AggregationKind dnn_aggregation = AggregationKind::Average;
  int cca_components = 0;   // 0 = as many as the data allows
  double cca_ridge = -1.0;  // < 0 = scale-aware default
  int lsa_rank = 100;

  FeatureFamily features = FeatureFamily::Mpeg7;
  TrainConfig train;
  int folds = 5;
  std::vector<int> cutoffs{1, 10, 20};

  std::int64_t user = -1;  // recommend
  int top_n = 10;

  std::uint64_t seed = 42;
  int jobs = 1;
  bool force = false;

  void validate() const;
};

struct StageResult {
  bool ran = false;  // false when the cache was already up to date
  std::string summary;
};

StageResult run_stage(Stage stage, const PipelineConfig& config, std::ostream& out);

/// segment through evaluate for the configured feature family (fuse only
/// when embeddings are configured).
void run_all(const PipelineConfig& config, std::ostream& out);

/// Calls fn(i) for i in [0, n) on up to `jobs` threads. The exception of the
/// smallest failing index is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace mise

#endif  // MISE_PIPELINE_HPP
