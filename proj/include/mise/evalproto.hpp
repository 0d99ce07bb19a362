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

// Offline top-N evaluation: per-user stratified train/validation/test
// splits, one-plus-all-unrated ranking and two families of metrics.
//
// "protocol" metrics rank each relevant test item against the items the
// user never rated; "standard" metrics score each user's top-N list against
// the user's relevant test items.

#ifndef MISE_EVALPROTO_HPP
#define MISE_EVALPROTO_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mise/recsys.hpp"

namespace mise {

inline constexpr int kDefaultFolds = 5;

struct Split {
  int fold = 0;
  std::uint64_t seed = 0;
  std::vector<Rating> train;
  std::vector<Rating> validation;
  std::vector<Rating> test;
};

/// Users with fewer than three ratings are train-only.
std::vector<Split> make_splits(const InteractionMatrix& ratings, int folds,
                               std::uint64_t seed);

struct RankResult {
  int rank = 0;        // 1-based
  int candidates = 0;  // including the test item
};

/// Rank of `test_item` among `candidates` (which may include it); items tied
/// with it rank ahead of it.
int pessimistic_rank(std::span<const double> scores, int test_item,
                     std::span<const int> candidates);

/// Ranks `test_item` against every item the user has not rated in
/// `exclude` (the full rating matrix) or, when null, in `train`. Returns
/// nullopt when the user has no training ratings.
std::optional<RankResult> rank_one_plus_unrated(const SimilarityModel& model,
                                                const InteractionMatrix& train,
                                                int user, int test_item,
                                                const InteractionMatrix* exclude = nullptr);

struct RankedTest {
  int user = 0;
  int item = 0;
  int rank = 0;
  int candidates = 0;
};

struct UserTopList {
  int user = 0;
  std::vector<int> top;       // best first, at least max cutoff long unless the pool is smaller
  std::vector<int> relevant;  // the user's relevant test items
};

struct MetricValue {
  std::string family;  // "protocol" or "standard"
  std::string metric;  // "recall", "precision" or "map"
  int cutoff = 0;
  double value = 0.0;
};

struct FoldMetrics {
  std::vector<MetricValue> values;
  std::size_t tests = 0;
  std::size_t skipped = 0;

  double get(std::string_view family, std::string_view metric, int cutoff) const;
};

FoldMetrics compute_metrics(std::span<const RankedTest> ranks,
                            std::span<const UserTopList> lists,
                            std::span<const int> cutoffs);

struct EvalReport {
  std::vector<int> cutoffs;
  std::vector<FoldMetrics> folds;

  double mean(std::string_view family, std::string_view metric, int cutoff) const;
  /// 1.96 * sample sd / sqrt(folds); zero for a single fold.
  double ci95(std::string_view family, std::string_view metric, int cutoff) const;

  /// family,metric,cutoff,fold,value with rows per fold, then mean and ci95.
  std::string to_csv() const;
  std::string to_table() const;
};

using Trainer = std::function<SimilarityModel(const InteractionMatrix& train)>;

struct EvalOptions {
  int folds = kDefaultFolds;
  std::uint64_t seed = 42;
  std::vector<int> cutoffs{1, 10, 20};
  double relevance_threshold = 4.0;
};

/// Trains once per fold on the training split and evaluates on its test
/// split.
EvalReport cross_validate(const InteractionMatrix& ratings, const Trainer& trainer,
                          const EvalOptions& options);

/// Evaluates a trained model on one split.
FoldMetrics evaluate_split(const SimilarityModel& model, const InteractionMatrix& full,
                           const Split& split, const EvalOptions& options);

}  // namespace mise

#endif  // MISE_EVALPROTO_HPP
