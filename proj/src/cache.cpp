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

#include "mise/cache.hpp"

#include <openssl/evp.h>

#include <json.hpp>

#include "mise/error.hpp"
#include "mise/media_io.hpp"

namespace mise {

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::Io, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

std::string sha256_hex(std::string_view text) {
  return sha256_hex(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string sha256_file(const std::filesystem::path& path) {
  return sha256_hex(read_file(path));
}

bool StageManifest::same_recipe(const StageManifest& other) const {
  return stage == other.stage && inputs == other.inputs && params == other.params;
}

std::string write_manifest_json(const StageManifest& m) {
  nlohmann::ordered_json j;
  j["stage"] = m.stage;
  j["seed"] = m.seed;
  j["inputs"] = m.inputs;
  j["params"] = m.params;
  j["outputs"] = m.outputs;
  return j.dump(2) + "\n";
}

StageManifest parse_manifest_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    StageManifest m;
    m.stage = j.at("stage").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.params = j.at("params").get<std::map<std::string, std::string>>();
    m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, std::string("malformed stage manifest: ") + e.what());
  }
}

std::optional<StageManifest> ArtifactCache::load(std::string_view stage) const {
  const auto path = manifest_path(stage);
  if (!std::filesystem::exists(path)) return std::nullopt;
  const auto bytes = read_file(path);
  return parse_manifest_json(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

StageManifest ArtifactCache::require(std::string_view stage) const {
  auto m = load(stage);
  if (!m) {
    fail(ErrorKind::Dependency, "stage '" + std::string(stage) +
                                    "' has not been run (no manifest under " +
                                    stage_dir(stage).string() + ")");
  }
  return *m;
}

void ArtifactCache::store(const StageManifest& manifest) const {
  write_file(manifest_path(manifest.stage), write_manifest_json(manifest));
}

bool ArtifactCache::outputs_intact(const StageManifest& manifest) const {
  for (const auto& [name, digest] : manifest.outputs) {
    const auto path = stage_dir(manifest.stage) / name;
    if (!std::filesystem::exists(path) || sha256_file(path) != digest) return false;
  }
  return true;
}

}  // namespace mise
