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

// Collective SLIM: an item-item similarity matrix S scored as R*S, learned
// from pairwise ranking on the ratings and reconstruction of the item
// features.
//
// Training minimizes
//
//   alpha * E[-ln sigmoid(x_ui - x_uj)]
//     + (1 - alpha) * |F - F S|^2 / (n_items * d)
//     + gamma * |S|^2,        diag(S) = 0,
//
// where F is feature x item (standardized columns) and x_ut = sum_l r_ul S_lt.
// Each epoch runs one pass of stochastic steps over sampled (u, i, j)
// triples, then full gradient steps on the feature term.

#ifndef MISE_RECSYS_HPP
#define MISE_RECSYS_HPP

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "mise/feature.hpp"

namespace mise {

struct Rating {
  int user = 0;
  int item = 0;
  double value = 0.0;
  std::int64_t timestamp = 0;
};

struct ItemRating {
  int item = 0;
  double value = 0.0;
};

/// Sparse user x item ratings over dense indices; at most one entry per
/// (user, item).
class InteractionMatrix {
 public:
  InteractionMatrix() = default;
  InteractionMatrix(int n_users, int n_items, std::vector<Rating> entries);

  int n_users() const noexcept { return n_users_; }
  int n_items() const noexcept { return n_items_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  const std::vector<Rating>& entries() const noexcept { return entries_; }

  /// Ratings of one user sorted by item.
  std::span<const ItemRating> row(int user) const;
  bool contains(int user, int item) const;

 private:
  int n_users_ = 0;
  int n_items_ = 0;
  std::vector<Rating> entries_;  // sorted by (user, item)
  std::vector<ItemRating> cells_;
  std::vector<std::size_t> row_start_;
};

/// Maps external ids (MovieLens userId / movieId) to dense indices in
/// ascending id order, so index order equals id order.
class IdIndex {
 public:
  IdIndex() = default;
  explicit IdIndex(std::vector<std::int64_t> ids);

  int size() const noexcept { return static_cast<int>(ids_.size()); }
  std::int64_t id(int index) const { return ids_.at(static_cast<std::size_t>(index)); }
  /// -1 when absent.
  int find(std::int64_t id) const noexcept;
  const std::vector<std::int64_t>& ids() const noexcept { return ids_; }

 private:
  std::vector<std::int64_t> ids_;
  std::map<std::int64_t, int> index_;
};

struct FeatureMatrix {
  FeatureKind family = FeatureKind::Mpeg7All;
  Eigen::MatrixXd values;  // items x d
};

/// Zero mean, unit variance per column over items; constant columns become
/// zero.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& values);

struct TrainConfig {
  double alpha = 0.5;
  double gamma = 1e-4;
  double learning_rate = 0.005;
  int epochs = 30;
  std::uint64_t seed = 42;
  double relevance_threshold = 4.0;
  /// BPR samples per epoch; 0 means one per positive (user, item) pair.
  std::size_t samples_per_epoch = 0;
  /// Full gradient steps on the feature term per epoch.
  int feature_steps = 1;

  void validate() const;
};

struct SimilarityModel {
  Eigen::MatrixXd s;  // item x item, zero diagonal, column-major
  TrainConfig config;
  int feature_dim = 0;
  /// Weighted objective at the end of each epoch (BPR term averaged over a
  /// fixed seeded set of 4096 sampled triples).
  std::vector<double> epoch_loss;

  int n_items() const noexcept { return static_cast<int>(s.rows()); }
};

/// Uniform (user, positive item, unrated item) triples.
class BprSampler {
 public:
  BprSampler(const InteractionMatrix& ratings, double relevance_threshold);

  std::size_t positive_count() const noexcept { return positives_.size(); }
  /// Returns false when the drawn user has rated every item.
  bool sample(std::mt19937_64& rng, int& user, int& positive, int& negative) const;

 private:
  const InteractionMatrix* ratings_;
  std::vector<std::pair<int, int>> positives_;
};

SimilarityModel train_collective_slim(const InteractionMatrix& ratings,
                                      const FeatureMatrix& features,
                                      const TrainConfig& config);

/// Pairwise-ranking SLIM without side information.
SimilarityModel train_bpr_slim(const InteractionMatrix& ratings,
                               const TrainConfig& config);

/// score(t) = sum over rated l of r_ul * S_lt, for every item t.
std::vector<double> score(const SimilarityModel& model,
                          const InteractionMatrix& ratings, int user);

/// Top-N unrated items by score; ties go to the smaller item index.
std::vector<int> recommend(const SimilarityModel& model,
                           const InteractionMatrix& ratings, int user, int n);

/// Header (n_items, d, hyperparameters, seed) followed by each column's
/// nonzeros.
std::vector<std::uint8_t> write_checkpoint(const SimilarityModel& model);
SimilarityModel parse_checkpoint(std::span<const std::uint8_t> bytes);

}  // namespace mise

#endif  // MISE_RECSYS_HPP
