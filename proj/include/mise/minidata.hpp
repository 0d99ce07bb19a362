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

// Procedural test data: multi-shot videos with known cuts and a small
// MovieLens-style catalog built around them.

#ifndef MISE_MINIDATA_HPP
#define MISE_MINIDATA_HPP

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "mise/media_io.hpp"

namespace mise {

struct SyntheticVideo {
  FrameStream stream;
  std::vector<int> boundaries;  // last frame of every shot but the final one
  std::vector<int> keyframes;   // middle frame of every shot
};

struct VideoRecipe {
  int width = 48;
  int height = 48;
  std::vector<int> shot_lengths;
  /// Hue bins (0..15) the shots draw from; consecutive shots never share one.
  std::vector<int> hue_bins;
  int noise = 3;  // uniform per-channel jitter amplitude
};

/// Each shot is a moving stripe or checker pattern of two colors from one
/// hue bin, so frames within a shot share their HSV histogram up to noise
/// while consecutive shots share no histogram cell.
SyntheticVideo synthetic_video(const VideoRecipe& recipe, std::mt19937_64& rng);

/// Random recipe: 2 to 5 shots of 4 to 12 frames at the given size.
VideoRecipe random_recipe(std::mt19937_64& rng, int width, int height);

/// Writes videos/, ratings.csv, tags.csv, movies.csv and embeddings.csv
/// (DNN vectors for the middle keyframe of every shot) under `dir`.
void generate_mini_dataset(const std::filesystem::path& dir, std::uint64_t seed);

}  // namespace mise

#endif  // MISE_MINIDATA_HPP
