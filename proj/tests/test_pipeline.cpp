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

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mise/cache.hpp"
#include "mise/error.hpp"
#include "mise/media_io.hpp"
#include "mise/minidata.hpp"
#include "mise/pipeline.hpp"

using namespace mise;
namespace fs = std::filesystem;

namespace {

const fs::path kMini = MISE_MINI_DATA;

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("mise_test_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PipelineConfig mini_config(const fs::path& cache) {
  PipelineConfig cfg;
  cfg.videos = kMini / "videos";
  cfg.ratings = kMini / "ratings.csv";
  cfg.tags = kMini / "tags.csv";
  cfg.movies = kMini / "movies.csv";
  cfg.embeddings = kMini / "embeddings.csv";
  cfg.cache = cache;
  cfg.lsa_rank = 4;
  cfg.train.epochs = 5;
  cfg.folds = 3;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorKind stage_error(Stage stage, const PipelineConfig& cfg, std::string* message = nullptr) {
  std::ostringstream sink;
  try {
    run_stage(stage, cfg, sink);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  FAIL("stage succeeded");
  return ErrorKind::Io;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(MISE_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex(std::string_view("abc")) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex(std::string_view("")) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const auto dir = fresh_dir("sha");
  write_file(dir / "abc.txt", std::string("abc"));
  CHECK(sha256_file(dir / "abc.txt") == sha256_hex(std::string_view("abc")));
  fs::remove_all(dir);
}

TEST_CASE("manifest JSON round trip and recipe equality") {
  StageManifest m;
  m.stage = "train/mpeg7";
  m.seed = 42;
  m.inputs = {{"ratings", "aa"}, {"stage/aggregate", "bb"}};
  m.params = {{"alpha", "0.5"}, {"seed", "42"}};
  m.outputs = {{"model.bin", "cc"}};
  const auto text = write_manifest_json(m);
  CHECK(parse_manifest_json(text) == m);

  StageManifest other = m;
  other.seed = 7;
  other.outputs.clear();
  CHECK(m.same_recipe(other));
  other.params["alpha"] = "0.6";
  CHECK_FALSE(m.same_recipe(other));
  other = m;
  other.inputs["ratings"] = "ab";
  CHECK_FALSE(m.same_recipe(other));

  try {
    parse_manifest_json("{not json");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Format);
  }
}

TEST_CASE("artifact cache store, require and integrity") {
  const auto root = fresh_dir("cache");
  const ArtifactCache cache(root);
  try {
    cache.require("segment");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Dependency);
    CHECK(std::string(e.what()).find("segment") != std::string::npos);
  }
  StageManifest m;
  m.stage = "segment";
  fs::create_directories(cache.stage_dir("segment"));
  write_file(cache.stage_dir("segment") / "a.csv", std::string("x,y\n"));
  m.outputs["a.csv"] = sha256_hex(std::string_view("x,y\n"));
  cache.store(m);
  CHECK(cache.require("segment") == m);
  CHECK(cache.outputs_intact(m));
  write_file(cache.stage_dir("segment") / "a.csv", std::string("x,z\n"));
  CHECK_FALSE(cache.outputs_intact(m));
  fs::remove(cache.stage_dir("segment") / "a.csv");
  CHECK_FALSE(cache.outputs_intact(m));
  fs::remove_all(root);
}

TEST_CASE("stages respect dependencies, staleness and force") {
  const auto root = fresh_dir("stages");
  auto cfg = mini_config(root / "cache");
  std::string message;
  CHECK(stage_error(Stage::Extract, cfg, &message) == ErrorKind::Dependency);
  CHECK(message.find("segment") != std::string::npos);

  std::ostringstream sink;
  CHECK(run_stage(Stage::Segment, cfg, sink).ran);
  const auto manifest = slurp(root / "cache" / "segment" / "manifest.json");
  const auto again = run_stage(Stage::Segment, cfg, sink);
  CHECK_FALSE(again.ran);
  CHECK(slurp(root / "cache" / "segment" / "manifest.json") == manifest);

  // A different seed does not stale the unseeded segment stage.
  auto reseeded = cfg;
  reseeded.seed = 7;
  CHECK_FALSE(run_stage(Stage::Segment, reseeded, sink).ran);

  auto changed = cfg;
  changed.shot_threshold = 0.6;
  CHECK(stage_error(Stage::Segment, changed) == ErrorKind::StaleCache);
  changed.force = true;
  CHECK(run_stage(Stage::Segment, changed, sink).ran);
  CHECK(slurp(root / "cache" / "segment" / "manifest.json") != manifest);

  // Tampered outputs are stale too.
  CHECK(run_stage(Stage::Segment, changed, sink).ran == false);
  write_file(root / "cache" / "segment" / "shots_1.csv", std::string("tampered\n"));
  changed.force = false;
  CHECK(stage_error(Stage::Segment, changed) == ErrorKind::StaleCache);

  CHECK(stage_error(Stage::Train, cfg) == ErrorKind::Dependency);
  fs::remove_all(root);
}

TEST_CASE("full mini runs are byte-identical across caches and job counts") {
  const auto root = fresh_dir("repro");
  auto a = mini_config(root / "a");
  auto b = mini_config(root / "b");
  b.jobs = 3;
  std::ostringstream sink;
  run_all(a, sink);
  run_all(b, sink);
  const auto ra = slurp(root / "a" / "evaluate" / "mpeg7" / "report.csv");
  REQUIRE(!ra.empty());
  CHECK(ra == slurp(root / "b" / "evaluate" / "mpeg7" / "report.csv"));
  CHECK(slurp(root / "a" / "aggregate" / "mpeg7.csv") ==
        slurp(root / "b" / "aggregate" / "mpeg7.csv"));
  CHECK(slurp(root / "a" / "fuse" / "fused.csv") == slurp(root / "b" / "fuse" / "fused.csv"));
  CHECK(ra.starts_with("family,metric,cutoff,fold,value\n"));

  // Other families train from the same upstream cache.
  for (auto family : {FeatureFamily::Dnn, FeatureFamily::Fused, FeatureFamily::Genre,
                      FeatureFamily::TagLsa}) {
    a.features = family;
    CHECK(run_stage(Stage::Train, a, sink).ran);
    CHECK(run_stage(Stage::Evaluate, a, sink).ran);
    CHECK(fs::exists(root / "a" / "evaluate" / std::string(to_string(family)) / "report.csv"));
  }

  a.features = FeatureFamily::Mpeg7;
  a.user = 3;
  a.top_n = 2;
  std::ostringstream rec;
  run_stage(Stage::Recommend, a, rec);
  CHECK(rec.str().find("rank,movie_id,score") != std::string::npos);
  a.user = 999;
  CHECK(stage_error(Stage::Recommend, a) == ErrorKind::MissingUser);
  fs::remove_all(root);
}

TEST_CASE("the bundled mini-dataset matches its generator") {
  const auto root = fresh_dir("generate");
  generate_mini_dataset(root, 42);
  for (const char* f : {"ratings.csv", "tags.csv", "movies.csv", "embeddings.csv",
                        "videos/1.y4m", "videos/8.y4m"}) {
    CAPTURE(f);
    CHECK(slurp(root / f) == slurp(kMini / f));
  }
  fs::remove_all(root);
}

TEST_CASE("parallel_for covers every index and rethrows the first failure") {
  std::vector<int> hit(100, 0);
  parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
  std::atomic<int> calls = 0;
  try {
    parallel_for(50, 3, [&](std::size_t i) {
      ++calls;
      if (i == 7 || i == 30) fail(ErrorKind::Parameter, "index " + std::to_string(i));
    });
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()) == "index 7");
  }
}

TEST_CASE("CLI exit codes") {
  const auto root = fresh_dir("cli");
  const std::string data = "--data " + kMini.string() + " --cache " + (root / "c").string();
  CHECK(cli("extract " + data) == 10 + static_cast<int>(ErrorKind::Dependency));
  CHECK(cli("segment " + data) == 0);
  CHECK(cli("segment " + data) == 0);
  CHECK(cli("segment --threshold 0.5 " + data) == 10 + static_cast<int>(ErrorKind::StaleCache));
  CHECK(cli("segment --force --threshold 0.5 " + data) == 0);
  CHECK(cli("segment --threshold 1.5 " + data) == 10 + static_cast<int>(ErrorKind::Parameter));
  CHECK(cli("segment --no-such-flag") >= 100);
  CHECK(cli("") >= 100);
  fs::remove_all(root);
}
