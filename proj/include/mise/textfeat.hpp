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

// Baseline feature families: binary genre vectors and LSA tag factors.

#ifndef MISE_TEXTFEAT_HPP
#define MISE_TEXTFEAT_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "mise/feature.hpp"
#include "mise/movielens.hpp"

namespace mise {

extern const std::array<std::string_view, kGenreCount> kGenreVocabulary;

/// Column of a genre label; case-insensitive, accepts the MovieLens spellings
/// "Children" and "(no genres listed)". Throws a vocabulary error otherwise.
std::size_t genre_column(std::string_view label);

struct GenreMatrix {
  std::vector<std::int64_t> movie_ids;
  Eigen::MatrixXd values;  // items x 19, entries in {0, 1}
};

GenreMatrix build_genre_matrix(std::span<const MovieRow> catalog);

struct TagAssignment {
  std::int64_t movie_id = 0;
  std::string tag;
  double count = 0.0;
};

/// Lowercased, whitespace-trimmed tag.
std::string normalize_tag(std::string_view tag);

/// Sums per-user tag applications into (movie, tag, count) triples.
std::vector<TagAssignment> tag_assignments(std::span<const TagRow> rows);

struct TfIdf {
  std::vector<std::string> tags;        // sorted
  std::vector<std::int64_t> movie_ids;  // sorted
  Eigen::SparseMatrix<double> weights;  // tags x items
};

/// count * log(1 + n_items / document_frequency).
TfIdf tfidf_matrix(std::span<const TagAssignment> assignments);

struct LsaFactors {
  Eigen::MatrixXd tag_factors;      // U_k, tags x k
  Eigen::VectorXd singular_values;  // descending
  Eigen::MatrixXd item_factors;     // V_k * Sigma_k, items x k
  int k = 0;
  bool truncated = false;  // requested rank exceeded the numerical rank
};

/// Rank-k truncated SVD of a tags x items matrix.
LsaFactors lsa_factorize(const Eigen::SparseMatrix<double>& matrix, int k);

struct TagLsaModel {
  std::vector<std::string> tags;
  std::vector<std::int64_t> movie_ids;
  LsaFactors factors;

  /// Frobenius norm of W - U_k Sigma_k V_k^T for the weight matrix W.
  double reconstruction_error(const Eigen::SparseMatrix<double>& weights) const;
};

inline constexpr int kDefaultLsaRank = 100;

TagLsaModel fit_tag_lsa(std::span<const TagAssignment> assignments,
                        int k = kDefaultLsaRank);

/// Movie-level records of a feature matrix whose rows follow `movie_ids`.
std::vector<FeatureRecord> to_records(FeatureKind kind,
                                      std::span<const std::int64_t> movie_ids,
                                      const Eigen::MatrixXd& values);

}  // namespace mise

#endif  // MISE_TEXTFEAT_HPP
