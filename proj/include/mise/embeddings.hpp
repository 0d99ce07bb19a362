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

// Ingestion of keyframe embeddings produced by an external network run.

#ifndef MISE_EMBEDDINGS_HPP
#define MISE_EMBEDDINGS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mise/feature.hpp"

namespace mise {

using KeyframeKey = std::pair<std::int64_t, std::int64_t>;  // (movie, keyframe)
using KeyframeManifest = std::set<KeyframeKey>;

/// `movie_id,keyframe_index`
KeyframeManifest parse_keyframe_manifest(std::string_view text);
std::string write_keyframe_manifest(const KeyframeManifest& manifest);

class EmbeddingTable {
 public:
  EmbeddingTable() = default;

  /// Rejects non-DNN kinds, wrong lengths, and duplicate keys.
  static EmbeddingTable from_records(std::span<const FeatureRecord> records);

  std::size_t size() const noexcept { return entries_.size(); }
  const FeatureVector& at(std::int64_t movie, std::int64_t keyframe) const;
  bool contains(std::int64_t movie, std::int64_t keyframe) const {
    return entries_.contains({movie, keyframe});
  }
  const std::map<KeyframeKey, FeatureVector>& entries() const noexcept {
    return entries_;
  }
  std::vector<FeatureVector> movie_vectors(std::int64_t movie) const;

  bool operator==(const EmbeddingTable&) const = default;

 private:
  std::map<KeyframeKey, FeatureVector> entries_;
};

/// Coverage against the manifest must be exact: every manifest key present
/// and no extra keys.
void check_coverage(const EmbeddingTable& table, const KeyframeManifest& manifest);

EmbeddingTable load_embeddings(
    const std::filesystem::path& path,
    const std::optional<KeyframeManifest>& expected = std::nullopt);

}  // namespace mise

#endif  // MISE_EMBEDDINGS_HPP
