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

#include "mise/movielens.hpp"

#include "mise/csv.hpp"
#include "mise/error.hpp"

namespace mise {

namespace {

std::vector<std::vector<std::string>> table(std::string_view text,
                                            std::string_view header,
                                            std::size_t columns) {
  const auto rows = csv::lines(text);
  if (rows.empty() || rows.front() != header) {
    fail(ErrorKind::Format, "expected CSV header '" + std::string(header) + "'");
  }
  std::vector<std::vector<std::string>> out;
  out.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto fields = csv::split(rows[r]);
    if (fields.size() != columns) {
      fail(ErrorKind::Format, "row " + std::to_string(r) + " of '" +
                                  std::string(header) + "' has " +
                                  std::to_string(fields.size()) + " fields");
    }
    out.push_back(std::move(fields));
  }
  return out;
}

}  // namespace

std::vector<RatingRow> parse_ratings_csv(std::string_view text) {
  std::vector<RatingRow> out;
  std::size_t r = 0;
  for (const auto& f : table(text, "userId,movieId,rating,timestamp", 4)) {
    ++r;
    RatingRow row{csv::to_int(f[0], r), csv::to_int(f[1], r),
                  csv::to_double(f[2], r), csv::to_int(f[3], r)};
    if (!(row.rating >= 0.5 && row.rating <= 5.0)) {
      fail(ErrorKind::Format, "rating out of [0.5, 5] at row " + std::to_string(r));
    }
    out.push_back(row);
  }
  return out;
}

std::vector<TagRow> parse_tags_csv(std::string_view text) {
  std::vector<TagRow> out;
  std::size_t r = 0;
  for (auto& f : table(text, "userId,movieId,tag,timestamp", 4)) {
    ++r;
    out.push_back({csv::to_int(f[0], r), csv::to_int(f[1], r), std::move(f[2]),
                   csv::to_int(f[3], r)});
  }
  return out;
}

std::vector<MovieRow> parse_movies_csv(std::string_view text) {
  std::vector<MovieRow> out;
  std::size_t r = 0;
  for (auto& f : table(text, "movieId,title,genres", 3)) {
    ++r;
    MovieRow row{csv::to_int(f[0], r), std::move(f[1]), {}};
    std::string_view g = f[2];
    while (!g.empty()) {
      const auto bar = g.find('|');
      row.genres.emplace_back(g.substr(0, bar));
      if (bar == std::string_view::npos) break;
      g.remove_prefix(bar + 1);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string write_ratings_csv(std::span<const RatingRow> rows) {
  std::string out = "userId,movieId,rating,timestamp\n";
  for (const auto& r : rows) {
    out += std::to_string(r.user_id) + "," + std::to_string(r.movie_id) + "," +
           csv::format_double(r.rating) + "," + std::to_string(r.timestamp) + "\n";
  }
  return out;
}

std::string write_tags_csv(std::span<const TagRow> rows) {
  std::string out = "userId,movieId,tag,timestamp\n";
  for (const auto& r : rows) {
    out += std::to_string(r.user_id) + "," + std::to_string(r.movie_id) + "," +
           csv::quote(r.tag) + "," + std::to_string(r.timestamp) + "\n";
  }
  return out;
}

std::string write_movies_csv(std::span<const MovieRow> rows) {
  std::string out = "movieId,title,genres\n";
  for (const auto& r : rows) {
    std::string genres;
    for (const auto& g : r.genres) genres += (genres.empty() ? "" : "|") + g;
    out += std::to_string(r.movie_id) + "," + csv::quote(r.title) + "," +
           csv::quote(genres) + "\n";
  }
  return out;
}

}  // namespace mise
