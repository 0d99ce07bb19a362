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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>

#include "mise/embeddings.hpp"
#include "mise/error.hpp"
#include "mise/feature.hpp"
#include "mise/media_io.hpp"

using namespace mise;

namespace {

FeatureVector random_vector(std::mt19937_64& rng, FeatureKind kind, std::size_t n) {
  std::normal_distribution<double> g(0.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return FeatureVector(kind, std::move(v));
}

std::string dnn_row(std::int64_t movie, std::int64_t key, std::size_t n, double value) {
  std::string row = std::to_string(movie) + "," + std::to_string(key) + ",DNN";
  for (std::size_t i = 0; i < n; ++i) row += "," + std::to_string(value + double(i) * 0.001);
  return row + "\n";
}

constexpr const char* kDnnHeader = "movie_id,keyframe,kind";

std::string dnn_csv(const std::vector<std::string>& rows) {
  std::string text = kDnnHeader;
  for (int i = 0; i < int(kDnnLength); ++i) text += ",v" + std::to_string(i);
  text += "\n";
  for (const auto& r : rows) text += r;
  return text;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Io;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mise_test_features_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("feature vector lengths are enforced") {
  CHECK(expected_length(FeatureKind::Scd) == 256u);
  CHECK(expected_length(FeatureKind::Mpeg7All) == 774u);
  CHECK(expected_length(FeatureKind::Dnn) == 1024u);
  CHECK(expected_length(FeatureKind::Genre) == 19u);
  CHECK_FALSE(expected_length(FeatureKind::Fused).has_value());
  CHECK(kind_of([] { FeatureVector(FeatureKind::Cld, std::vector<double>(119)); }) ==
        ErrorKind::Dimension);
  CHECK(FeatureVector(FeatureKind::TagLsa, std::vector<double>(7)).size() == 7);
  for (auto k : {FeatureKind::Scd, FeatureKind::Htd, FeatureKind::TagLsa, FeatureKind::Fused}) {
    CHECK(feature_kind_from_string(to_string(k)) == k);
  }
  CHECK(kind_of([] { feature_kind_from_string("SIFT"); }) == ErrorKind::Format);
}

TEST_CASE("feature CSV round trip") {
  std::mt19937_64 rng(1);
  std::vector<FeatureRecord> movie_level = {
      {3, kMovieLevel, random_vector(rng, FeatureKind::Ehd, 80)},
      {1, kMovieLevel, random_vector(rng, FeatureKind::Ehd, 80)}};
  const auto text = write_feature_csv(movie_level);
  CHECK(text.starts_with("movie_id,kind,v0,v1,"));
  CHECK(parse_feature_csv(text) == movie_level);

  std::vector<FeatureRecord> keyed = {{7, 4, random_vector(rng, FeatureKind::TagLsa, 5)},
                                      {7, 9, random_vector(rng, FeatureKind::TagLsa, 5)}};
  const auto keyed_text = write_feature_csv(keyed);
  CHECK(keyed_text.starts_with("movie_id,keyframe,kind,v0,"));
  CHECK(parse_feature_csv(keyed_text) == keyed);
}

TEST_CASE("feature CSV errors") {
  CHECK(kind_of([] { parse_feature_csv(""); }) == ErrorKind::Format);
  CHECK(kind_of([] { parse_feature_csv("id,kind,v0\n1,SCD,0\n"); }) == ErrorKind::Format);
  CHECK(kind_of([] { parse_feature_csv("movie_id,kind,v0\n1,GIST,0\n"); }) == ErrorKind::Format);
  CHECK(kind_of([] { parse_feature_csv("movie_id,kind,v0\n1,EHD,0.5\n"); }) ==
        ErrorKind::Dimension);
  CHECK(kind_of([] { parse_feature_csv("movie_id,kind,v0\n1,TAG_LSA,zero\n"); }) ==
        ErrorKind::Format);
}

TEST_CASE("feature binary round trip and errors") {
  std::mt19937_64 rng(2);
  std::vector<FeatureRecord> recs;
  for (int m = 0; m < 4; ++m) recs.push_back({m + 10, m * 3, random_vector(rng, FeatureKind::Dnn, 1024)});
  const auto bytes = write_feature_binary(recs);
  CHECK(bytes.size() == 8 + 4 + 4 + 8 + 8 + 4 * (16 + 8 * 1024));
  CHECK(parse_feature_binary(bytes) == recs);

  auto truncated = bytes;
  truncated.resize(truncated.size() - 9);
  CHECK(kind_of([&] { parse_feature_binary(truncated); }) == ErrorKind::Truncation);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK(kind_of([&] { parse_feature_binary(bad_magic); }) == ErrorKind::Format);
  std::vector<FeatureRecord> mixed = {recs[0], {1, 0, random_vector(rng, FeatureKind::Scd, 256)}};
  CHECK(kind_of([&] { write_feature_binary(mixed); }) == ErrorKind::KindMismatch);

  const auto dir = temp_dir("binary");
  save_features(dir / "f.bin", recs);
  save_features(dir / "f.csv", recs);
  CHECK(load_features(dir / "f.bin") == recs);
  const auto from_csv = load_features(dir / "f.csv");
  REQUIRE(from_csv.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(from_csv[i].movie_id == recs[i].movie_id);
    CHECK(from_csv[i].vector.values() == recs[i].vector.values());
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("embeddings: three rows") {
  const auto dir = temp_dir("three");
  write_file(dir / "e.csv", dnn_csv({dnn_row(1, 0, 1024, 0.1), dnn_row(1, 4, 1024, 0.2),
                                     dnn_row(2, 0, 1024, 0.3)}));
  const auto table = load_embeddings(dir / "e.csv");
  CHECK(table.size() == 3);
  CHECK(table.at(1, 4)[0] == doctest::Approx(0.2));
  CHECK(table.movie_vectors(1).size() == 2);
  CHECK(table.movie_vectors(5).empty());
  CHECK(kind_of([&] { table.at(2, 4); }) == ErrorKind::Coverage);
  std::filesystem::remove_all(dir);
}

TEST_CASE("embeddings: a short row is a dimension error naming the row") {
  const auto dir = temp_dir("short");
  write_file(dir / "e.csv", dnn_csv({dnn_row(1, 0, 1024, 0.1), dnn_row(1, 4, 1000, 0.2)}));
  try {
    load_embeddings(dir / "e.csv");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Dimension);
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("embeddings: coverage against a keyframe manifest") {
  const auto dir = temp_dir("coverage");
  write_file(dir / "e.csv", dnn_csv({dnn_row(5, 0, 1024, 0.1), dnn_row(5, 4, 1024, 0.2)}));
  const KeyframeManifest manifest = {{5, 0}, {5, 4}, {5, 9}};
  try {
    load_embeddings(dir / "e.csv", manifest);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Coverage);
    CHECK(std::string(e.what()).find("(5,9)") != std::string::npos);
  }
  CHECK(load_embeddings(dir / "e.csv", KeyframeManifest{{5, 0}, {5, 4}}).size() == 2);
  // Extra keyframes are a mismatch too.
  CHECK(kind_of([&] { load_embeddings(dir / "e.csv", KeyframeManifest{{5, 0}}); }) ==
        ErrorKind::Coverage);
  std::filesystem::remove_all(dir);
}

TEST_CASE("embeddings: duplicates and wrong kinds are rejected") {
  std::mt19937_64 rng(3);
  const auto v = random_vector(rng, FeatureKind::Dnn, 1024);
  std::vector<FeatureRecord> dup = {{1, 2, v}, {1, 2, v}};
  CHECK(kind_of([&] { EmbeddingTable::from_records(dup); }) == ErrorKind::Duplicate);
  std::vector<FeatureRecord> wrong = {{1, 2, random_vector(rng, FeatureKind::Scd, 256)}};
  CHECK(kind_of([&] { EmbeddingTable::from_records(wrong); }) == ErrorKind::KindMismatch);
}

TEST_CASE("embeddings: load is order independent") {
  std::mt19937_64 rng(4);
  std::vector<FeatureRecord> recs;
  for (int m = 1; m <= 4; ++m) {
    for (int k : {0, 5, 11}) recs.push_back({m, k, random_vector(rng, FeatureKind::Dnn, 1024)});
  }
  const auto a = EmbeddingTable::from_records(recs);
  std::shuffle(recs.begin(), recs.end(), rng);
  CHECK(EmbeddingTable::from_records(recs) == a);
}

TEST_CASE("keyframe manifest round trip") {
  const KeyframeManifest m = {{1, 0}, {1, 7}, {3, 2}};
  const auto text = write_keyframe_manifest(m);
  CHECK(text == "movie_id,keyframe_index\n1,0\n1,7\n3,2\n");
  CHECK(parse_keyframe_manifest(text) == m);
  CHECK(kind_of([] { parse_keyframe_manifest("movie,key\n"); }) == ErrorKind::Format);
}
