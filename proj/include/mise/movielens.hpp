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

// MovieLens-format catalog inputs: ratings.csv, tags.csv, movies.csv.

#ifndef MISE_MOVIELENS_HPP
#define MISE_MOVIELENS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mise {

struct RatingRow {
  std::int64_t user_id = 0;
  std::int64_t movie_id = 0;
  double rating = 0.0;
  std::int64_t timestamp = 0;
};

struct TagRow {
  std::int64_t user_id = 0;
  std::int64_t movie_id = 0;
  std::string tag;
  std::int64_t timestamp = 0;
};

struct MovieRow {
  std::int64_t movie_id = 0;
  std::string title;
  std::vector<std::string> genres;  // pipe-separated in the file
};

std::vector<RatingRow> parse_ratings_csv(std::string_view text);
std::vector<TagRow> parse_tags_csv(std::string_view text);
std::vector<MovieRow> parse_movies_csv(std::string_view text);

std::string write_ratings_csv(std::span<const RatingRow> rows);
std::string write_tags_csv(std::span<const TagRow> rows);
std::string write_movies_csv(std::span<const MovieRow> rows);

}  // namespace mise

#endif  // MISE_MOVIELENS_HPP
