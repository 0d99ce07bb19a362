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

// Per-stage artifact cache. Each stage owns one directory holding its
// outputs and a manifest.json with the digests of its inputs and outputs,
// its parameters and the seed.

#ifndef MISE_CACHE_HPP
#define MISE_CACHE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>

namespace mise {

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);
std::string sha256_file(const std::filesystem::path& path);

struct StageManifest {
  std::string stage;
  std::uint64_t seed = 0;  // of the invocation; seeded stages also list it in params
  std::map<std::string, std::string> inputs;   // name -> sha256
  std::map<std::string, std::string> params;   // name -> value
  std::map<std::string, std::string> outputs;  // file name in the stage dir -> sha256

  /// Same stage, inputs and parameters.
  bool same_recipe(const StageManifest& other) const;
  bool operator==(const StageManifest&) const = default;
};

std::string write_manifest_json(const StageManifest& manifest);
StageManifest parse_manifest_json(std::string_view text);

class ArtifactCache {
 public:
  explicit ArtifactCache(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const noexcept { return root_; }
  std::filesystem::path stage_dir(std::string_view stage) const { return root_ / stage; }
  std::filesystem::path manifest_path(std::string_view stage) const {
    return stage_dir(stage) / "manifest.json";
  }

  std::optional<StageManifest> load(std::string_view stage) const;
  /// Throws a dependency error naming `stage` when it has not run.
  StageManifest require(std::string_view stage) const;
  void store(const StageManifest& manifest) const;

  /// True when every output listed in the manifest exists with its digest.
  bool outputs_intact(const StageManifest& manifest) const;

 private:
  std::filesystem::path root_;
};

}  // namespace mise

#endif  // MISE_CACHE_HPP
