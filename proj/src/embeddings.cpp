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

#include "mise/embeddings.hpp"

#include "mise/csv.hpp"
#include "mise/error.hpp"

namespace mise {

namespace {

std::string key_name(const KeyframeKey& key) {
  return "(" + std::to_string(key.first) + "," + std::to_string(key.second) + ")";
}

}  // namespace

KeyframeManifest parse_keyframe_manifest(std::string_view text) {
  const auto rows = csv::lines(text);
  if (rows.empty() || rows.front() != "movie_id,keyframe_index") {
    fail(ErrorKind::Format, "keyframe manifest header must be movie_id,keyframe_index");
  }
  KeyframeManifest out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto f = csv::split(rows[r]);
    if (f.size() != 2) fail(ErrorKind::Format, "manifest row " + std::to_string(r));
    out.emplace(csv::to_int(f[0], r), csv::to_int(f[1], r));
  }
  return out;
}

std::string write_keyframe_manifest(const KeyframeManifest& manifest) {
  std::string out = "movie_id,keyframe_index\n";
  for (const auto& [movie, key] : manifest) {
    out += std::to_string(movie) + "," + std::to_string(key) + "\n";
  }
  return out;
}

EmbeddingTable EmbeddingTable::from_records(std::span<const FeatureRecord> records) {
  EmbeddingTable table;
  std::size_t row = 0;
  for (const auto& rec : records) {
    ++row;
    if (rec.vector.kind() != FeatureKind::Dnn) {
      fail(ErrorKind::KindMismatch, "row " + std::to_string(row) + " has kind " +
                                        std::string(to_string(rec.vector.kind())) +
                                        ", expected DNN");
    }
    if (rec.vector.size() != kDnnLength) {
      fail(ErrorKind::Dimension, "row " + std::to_string(row) + " has length " +
                                     std::to_string(rec.vector.size()));
    }
    const KeyframeKey key{rec.movie_id, rec.keyframe};
    if (!table.entries_.emplace(key, rec.vector).second) {
      fail(ErrorKind::Duplicate, "row " + std::to_string(row) +
                                     " duplicates keyframe " + key_name(key));
    }
  }
  return table;
}

const FeatureVector& EmbeddingTable::at(std::int64_t movie, std::int64_t keyframe) const {
  const auto it = entries_.find({movie, keyframe});
  if (it == entries_.end()) {
    fail(ErrorKind::Coverage, "no embedding for keyframe " + key_name({movie, keyframe}));
  }
  return it->second;
}

std::vector<FeatureVector> EmbeddingTable::movie_vectors(std::int64_t movie) const {
  std::vector<FeatureVector> out;
  for (auto it = entries_.lower_bound({movie, INT64_MIN});
       it != entries_.end() && it->first.first == movie; ++it) {
    out.push_back(it->second);
  }
  return out;
}

void check_coverage(const EmbeddingTable& table, const KeyframeManifest& manifest) {
  std::string missing, extra;
  for (const auto& key : manifest) {
    if (!table.contains(key.first, key.second)) missing += " " + key_name(key);
  }
  for (const auto& [key, _] : table.entries()) {
    if (!manifest.contains(key)) extra += " " + key_name(key);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "embedding coverage mismatch;";
    if (!missing.empty()) msg += " missing:" + missing + ";";
    if (!extra.empty()) msg += " extra:" + extra + ";";
    fail(ErrorKind::Coverage, msg);
  }
}

EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               const std::optional<KeyframeManifest>& expected) {
  const auto records = load_features(path);
  auto table = EmbeddingTable::from_records(records);
  if (expected) check_coverage(table, *expected);
  return table;
}

}  // namespace mise
