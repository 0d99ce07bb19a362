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

#ifndef MISE_FEATURE_HPP
#define MISE_FEATURE_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mise {

enum class FeatureKind : std::uint32_t {
  Scd = 1,
  Csd = 2,
  Cld = 3,
  Ehd = 4,
  Htd = 5,
  Mpeg7All = 6,
  Dnn = 7,
  Fused = 8,
  Genre = 9,
  TagLsa = 10,
};

inline constexpr std::size_t kScdLength = 256;
inline constexpr std::size_t kCsdLength = 256;
inline constexpr std::size_t kCldLength = 120;
inline constexpr std::size_t kEhdLength = 80;
inline constexpr std::size_t kHtdLength = 62;
inline constexpr std::size_t kMpeg7Length =
    kScdLength + kCsdLength + kCldLength + kEhdLength + kHtdLength;
inline constexpr std::size_t kDnnLength = 1024;
inline constexpr std::size_t kGenreCount = 19;

/// Fixed length of a kind, or nullopt when it depends on configuration
/// (FUSED, TAG_LSA).
std::optional<std::size_t> expected_length(FeatureKind kind) noexcept;

std::string_view to_string(FeatureKind kind) noexcept;
FeatureKind feature_kind_from_string(std::string_view name);

class FeatureVector {
 public:
  FeatureVector() = default;
  /// Throws a dimension error if `values` violates the kind's fixed length.
  FeatureVector(FeatureKind kind, std::vector<double> values);

  FeatureKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  bool operator==(const FeatureVector&) const = default;

 private:
  FeatureKind kind_ = FeatureKind::Mpeg7All;
  std::vector<double> values_;
};

inline constexpr std::int64_t kMovieLevel = -1;

struct FeatureRecord {
  std::int64_t movie_id = 0;
  std::int64_t keyframe = kMovieLevel;
  FeatureVector vector;

  bool operator==(const FeatureRecord&) const = default;
};

/// CSV: `movie_id,kind,v0..v{L-1}` for movie-level vectors, or
/// `movie_id,keyframe,kind,v0..` when any record carries a keyframe index.
std::string write_feature_csv(std::span<const FeatureRecord> records);
std::vector<FeatureRecord> parse_feature_csv(std::string_view text);

/// Binary cache format, little-endian:
///   "MISEFEAT" | u32 version | u32 kind | u64 length | u64 count
///   then per record: i64 movie_id | i64 keyframe | length x f64
std::vector<std::uint8_t> write_feature_binary(
    std::span<const FeatureRecord> records);
std::vector<FeatureRecord> parse_feature_binary(
    std::span<const std::uint8_t> bytes);

/// Dispatches on the binary magic, falling back to CSV.
std::vector<FeatureRecord> load_features(const std::filesystem::path& path);
void save_features(const std::filesystem::path& path,
                   std::span<const FeatureRecord> records);

}  // namespace mise

#endif  // MISE_FEATURE_HPP
