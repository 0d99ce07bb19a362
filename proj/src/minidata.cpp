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

#include "mise/minidata.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mise/error.hpp"
#include "mise/feature.hpp"
#include "mise/movielens.hpp"

namespace mise {

namespace {

enum class Pattern { kVertical, kHorizontal, kChecker, kDiagonal };

Rgb bin_center(int h_bin, int s_bin, int v_bin) {
  return hsv_to_rgb({(h_bin + 0.5) * 22.5, (s_bin + 0.5) / 4.0, (v_bin + 0.5) / 4.0});
}

std::uint8_t jitter(std::uint8_t c, int delta) {
  return static_cast<std::uint8_t>(std::clamp(int(c) + delta, 0, 255));
}

}  // namespace

SyntheticVideo synthetic_video(const VideoRecipe& recipe, std::mt19937_64& rng) {
  if (recipe.width < 1 || recipe.height < 1 || recipe.shot_lengths.empty()) {
    fail(ErrorKind::Parameter, "video recipe needs a size and at least one shot");
  }
  if (recipe.hue_bins.size() < 2) fail(ErrorKind::Parameter, "need at least two hue bins");
  std::uniform_int_distribution<int> pick_pattern(0, 3);
  std::uniform_int_distribution<int> pick_period(2, 6);
  std::uniform_int_distribution<std::size_t> pick_hue(0, recipe.hue_bins.size() - 1);
  std::uniform_int_distribution<int> noise(-recipe.noise, recipe.noise);

  SyntheticVideo out;
  int previous_hue = -1;
  int frame_index = 0;
  for (std::size_t s = 0; s < recipe.shot_lengths.size(); ++s) {
    if (recipe.shot_lengths[s] < 1) fail(ErrorKind::Parameter, "empty shot in recipe");
    int hue;
    do {
      hue = recipe.hue_bins[pick_hue(rng)];
    } while (hue == previous_hue);
    previous_hue = hue;
    const Rgb a = bin_center(hue, 2, 3);
    const Rgb b = bin_center(hue, 3, 2);
    const auto pattern = static_cast<Pattern>(pick_pattern(rng));
    const int period = 2 * pick_period(rng);

    if (s > 0) out.boundaries.push_back(frame_index - 1);
    out.keyframes.push_back(frame_index + (recipe.shot_lengths[s] - 1) / 2);
    for (int t = 0; t < recipe.shot_lengths[s]; ++t, ++frame_index) {
      FrameBuffer frame(recipe.width, recipe.height);
      for (int y = 0; y < recipe.height; ++y) {
        for (int x = 0; x < recipe.width; ++x) {
          int u = 0;
          switch (pattern) {
            case Pattern::kVertical: u = x + t; break;
            case Pattern::kHorizontal: u = y + t; break;
            case Pattern::kDiagonal: u = x + y + t; break;
            case Pattern::kChecker:
              u = ((x + t) / (period / 2) + y / (period / 2)) * (period / 2);
              break;
          }
          const Rgb base = (u % period) < period / 2 ? a : b;
          frame.set(x, y, {jitter(base.r, noise(rng)), jitter(base.g, noise(rng)),
                           jitter(base.b, noise(rng))});
        }
      }
      out.stream.frames.push_back(std::move(frame));
    }
  }
  out.stream.frame_rate = 24.0;
  return out;
}

VideoRecipe random_recipe(std::mt19937_64& rng, int width, int height) {
  VideoRecipe r;
  r.width = width;
  r.height = height;
  std::uniform_int_distribution<int> shots(2, 5);
  std::uniform_int_distribution<int> length(4, 12);
  const int n = shots(rng);
  for (int i = 0; i < n; ++i) r.shot_lengths.push_back(length(rng));
  for (int h = 0; h < 16; ++h) r.hue_bins.push_back(h);
  return r;
}

namespace {

struct MiniMovie {
  const char* title;
  const char* genres;
  int group;
};

// Group 0 is warm and action-heavy, group 1 cool and light.
constexpr MiniMovie kMovies[] = {
    {"Crimson Run (2019)", "Action|Thriller", 0},
    {"Ember Street (2017)", "Action|Crime", 0},
    {"The Red Hour (2020)", "Thriller|Horror", 0},
    {"Ashfall (2018)", "Action|Adventure|Thriller", 0},
    {"Blue Picnic (2016)", "Comedy|Romance", 1},
    {"Paper Whales (2021)", "Animation|Children", 1},
    {"Seafoam Summer (2015)", "Comedy|Drama|Romance", 1},
    {"Tin Can Band (2019)", "Musical|Comedy", 1},
};

constexpr std::array<std::array<const char*, 5>, 2> kGroupTags = {{
    {"explosions", "dark", "chase", "gritty", "violent"},
    {"funny", "colorful", "feel-good", "romantic", "family"},
}};

constexpr int kUsers = 50;

std::vector<int> group_hues(int group) {
  return group == 0 ? std::vector<int>{0, 1, 2, 14, 15} : std::vector<int>{7, 8, 9, 10, 11};
}

}  // namespace

void generate_mini_dataset(const std::filesystem::path& dir, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::array<std::vector<double>, 2> group_mean;
  for (auto& m : group_mean) {
    m.resize(kDnnLength);
    for (auto& v : m) v = 0.5 * gauss(rng);
  }

  std::vector<MovieRow> movies;
  std::vector<FeatureRecord> embeddings;
  std::uniform_int_distribution<int> shot_length(6, 10);
  for (std::size_t k = 0; k < std::size(kMovies); ++k) {
    const auto& spec = kMovies[k];
    const std::int64_t id = static_cast<std::int64_t>(k) + 1;
    MovieRow row;
    row.movie_id = id;
    row.title = spec.title;
    std::string genres = spec.genres;
    for (std::size_t at = 0; at != std::string::npos;) {
      const auto bar = genres.find('|', at);
      row.genres.push_back(genres.substr(at, bar == std::string::npos ? bar : bar - at));
      at = bar == std::string::npos ? bar : bar + 1;
    }
    movies.push_back(std::move(row));

    VideoRecipe recipe;
    recipe.hue_bins = group_hues(spec.group);
    for (int s = 0; s < 3; ++s) recipe.shot_lengths.push_back(shot_length(rng));
    const auto video = synthetic_video(recipe, rng);
    write_file(dir / "videos" / (std::to_string(id) + ".y4m"), write_y4m(video.stream));

    std::vector<double> offset(kDnnLength);
    for (auto& v : offset) v = 0.3 * gauss(rng);
    for (int key : video.keyframes) {
      std::vector<double> values(kDnnLength);
      for (std::size_t i = 0; i < kDnnLength; ++i) {
        const double v = group_mean[spec.group][i] + offset[i] + 0.1 * gauss(rng);
        values[i] = std::round(v * 1e4) / 1e4;
      }
      embeddings.push_back({id, key, FeatureVector(FeatureKind::Dnn, std::move(values))});
    }
  }

  std::vector<RatingRow> ratings;
  std::vector<TagRow> tags;
  std::int64_t clock = 1600000000;
  std::uniform_int_distribution<int> rated_count(5, 7);
  std::uniform_int_distribution<int> liked(8, 10);    // half stars
  std::uniform_int_distribution<int> disliked(2, 6);  // half stars
  std::uniform_int_distribution<int> tag_pick(0, 4);
  std::bernoulli_distribution tags_this(0.3);
  for (int u = 1; u <= kUsers; ++u) {
    const int community = u % 2;
    std::vector<int> order(std::size(kMovies));
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(static_cast<std::size_t>(rated_count(rng)));
    std::sort(order.begin(), order.end());
    for (int k : order) {
      const bool match = kMovies[k].group == community;
      const double stars = (match ? liked(rng) : disliked(rng)) / 2.0;
      ratings.push_back({u, k + 1, stars, clock += 60});
      if (tags_this(rng)) {
        const char* tag = kGroupTags[static_cast<std::size_t>(kMovies[k].group)]
                                    [static_cast<std::size_t>(tag_pick(rng))];
        tags.push_back({u, k + 1, tag, clock += 30});
      }
    }
  }
  // Every movie gets at least one tag so tag features cover the catalog.
  for (std::size_t k = 0; k < std::size(kMovies); ++k) {
    tags.push_back({1, static_cast<std::int64_t>(k) + 1, "trailer", clock += 30});
  }

  write_file(dir / "movies.csv", write_movies_csv(movies));
  write_file(dir / "ratings.csv", write_ratings_csv(ratings));
  write_file(dir / "tags.csv", write_tags_csv(tags));
  write_file(dir / "embeddings.csv", write_feature_csv(embeddings));
}

}  // namespace mise
