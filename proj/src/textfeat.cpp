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

#include "mise/textfeat.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "mise/error.hpp"

namespace mise {

const std::array<std::string_view, kGenreCount> kGenreVocabulary = {
    "action",  "adventure", "animation", "children's", "comedy",
    "crime",   "documentary", "drama",   "fantasy",    "film-noir",
    "horror",  "musical",   "mystery",   "romance",    "sci-fi",
    "thriller", "war",      "western",   "unknown"};

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string normalize_tag(std::string_view tag) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!tag.empty() && is_space(tag.front())) tag.remove_prefix(1);
  while (!tag.empty() && is_space(tag.back())) tag.remove_suffix(1);
  return lower(tag);
}

std::size_t genre_column(std::string_view label) {
  std::string key = normalize_tag(label);
  if (key == "children") key = "children's";
  if (key == "(no genres listed)") key = "unknown";
  const auto it = std::find(kGenreVocabulary.begin(), kGenreVocabulary.end(), key);
  if (it == kGenreVocabulary.end()) {
    fail(ErrorKind::Vocabulary, "unknown genre label '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - kGenreVocabulary.begin());
}

GenreMatrix build_genre_matrix(std::span<const MovieRow> catalog) {
  GenreMatrix out;
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(catalog.size()),
                                     kGenreCount);
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (catalog[i].genres.empty()) {
      fail(ErrorKind::Vocabulary,
           "movie " + std::to_string(catalog[i].movie_id) + " lists no genre");
    }
    out.movie_ids.push_back(catalog[i].movie_id);
    for (const auto& g : catalog[i].genres) {
      out.values(static_cast<Eigen::Index>(i), genre_column(g)) = 1.0;
    }
  }
  return out;
}

std::vector<TagAssignment> tag_assignments(std::span<const TagRow> rows) {
  std::map<std::pair<std::int64_t, std::string>, double> counts;
  for (const auto& r : rows) {
    auto tag = normalize_tag(r.tag);
    if (!tag.empty()) counts[{r.movie_id, std::move(tag)}] += 1.0;
  }
  std::vector<TagAssignment> out;
  out.reserve(counts.size());
  for (auto& [key, count] : counts) out.push_back({key.first, key.second, count});
  return out;
}

TfIdf tfidf_matrix(std::span<const TagAssignment> assignments) {
  if (assignments.empty()) fail(ErrorKind::EmptyInput, "no tag assignments");
  std::map<std::string, Eigen::Index> tag_index;
  std::map<std::int64_t, Eigen::Index> movie_index;
  for (const auto& a : assignments) {
    if (!(a.count > 0.0)) {
      fail(ErrorKind::Parameter, "tag counts must be positive (movie " +
                                     std::to_string(a.movie_id) + ")");
    }
    tag_index.emplace(normalize_tag(a.tag), 0);
    movie_index.emplace(a.movie_id, 0);
  }
  TfIdf out;
  for (auto& [tag, idx] : tag_index) {
    idx = static_cast<Eigen::Index>(out.tags.size());
    out.tags.push_back(tag);
  }
  for (auto& [movie, idx] : movie_index) {
    idx = static_cast<Eigen::Index>(out.movie_ids.size());
    out.movie_ids.push_back(movie);
  }

  std::map<std::pair<Eigen::Index, Eigen::Index>, double> cells;
  for (const auto& a : assignments) {
    cells[{tag_index.at(normalize_tag(a.tag)), movie_index.at(a.movie_id)}] += a.count;
  }
  std::vector<double> df(out.tags.size(), 0.0);
  for (const auto& [key, _] : cells) df[key.first] += 1.0;
  const double n_items = static_cast<double>(out.movie_ids.size());

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(cells.size());
  for (const auto& [key, count] : cells) {
    triplets.emplace_back(key.first, key.second,
                          count * std::log1p(n_items / df[key.first]));
  }
  out.weights.resize(static_cast<Eigen::Index>(out.tags.size()),
                     static_cast<Eigen::Index>(out.movie_ids.size()));
  out.weights.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

LsaFactors lsa_factorize(const Eigen::SparseMatrix<double>& matrix, int k) {
  if (k < 1) fail(ErrorKind::Parameter, "LSA rank must be >= 1");
  if (matrix.rows() == 0 || matrix.cols() == 0) {
    fail(ErrorKind::EmptyInput, "LSA of an empty matrix");
  }
  // Eigen-decompose the Gram matrix on the smaller side.
  const bool item_side = matrix.cols() <= matrix.rows();
  const Eigen::MatrixXd gram =
      item_side ? Eigen::MatrixXd(matrix.transpose() * matrix)
                : Eigen::MatrixXd(matrix * matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::Index n = gram.rows();
  // Eigenvalues ascend; walk from the top.
  Eigen::VectorXd sigma(n);
  Eigen::MatrixXd vectors(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    sigma(j) = std::sqrt(std::max(0.0, eig.eigenvalues()(n - 1 - j)));
    vectors.col(j) = eig.eigenvectors().col(n - 1 - j);
  }
  const double tol = 1e-10 * std::max(sigma(0), 1e-300);
  Eigen::Index rank = 0;
  while (rank < n && sigma(rank) > tol) ++rank;

  LsaFactors out;
  out.truncated = k > rank;
  out.k = static_cast<int>(std::min<Eigen::Index>(k, rank));
  if (out.k == 0) fail(ErrorKind::EmptyInput, "LSA matrix is numerically zero");
  out.singular_values = sigma.head(out.k);
  const Eigen::MatrixXd basis = vectors.leftCols(out.k);
  if (item_side) {
    out.item_factors = basis * out.singular_values.asDiagonal();
    out.tag_factors = (matrix * basis) * out.singular_values.cwiseInverse().asDiagonal();
  } else {
    out.tag_factors = basis;
    out.item_factors = matrix.transpose() * basis;
  }
  return out;
}

double TagLsaModel::reconstruction_error(const Eigen::SparseMatrix<double>& weights) const {
  const Eigen::MatrixXd approx = factors.tag_factors * factors.item_factors.transpose();
  return (Eigen::MatrixXd(weights) - approx).norm();
}

TagLsaModel fit_tag_lsa(std::span<const TagAssignment> assignments, int k) {
  auto tfidf = tfidf_matrix(assignments);
  TagLsaModel model;
  model.factors = lsa_factorize(tfidf.weights, k);
  model.tags = std::move(tfidf.tags);
  model.movie_ids = std::move(tfidf.movie_ids);
  return model;
}

std::vector<FeatureRecord> to_records(FeatureKind kind,
                                      std::span<const std::int64_t> movie_ids,
                                      const Eigen::MatrixXd& values) {
  if (static_cast<Eigen::Index>(movie_ids.size()) != values.rows()) {
    fail(ErrorKind::Alignment, "feature rows do not match the movie list");
  }
  std::vector<FeatureRecord> out;
  out.reserve(movie_ids.size());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(values.cols()));
    for (Eigen::Index j = 0; j < values.cols(); ++j) row[j] = values(i, j);
    out.push_back({movie_ids[i], kMovieLevel, FeatureVector(kind, std::move(row))});
  }
  return out;
}

}  // namespace mise
