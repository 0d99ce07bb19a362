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

#include "mise/feature.hpp"

#include <algorithm>
#include <cstring>

#include "mise/binary_io.hpp"
#include "mise/csv.hpp"
#include "mise/error.hpp"
#include "mise/media_io.hpp"

namespace mise {

namespace {

constexpr char kMagic[8] = {'M', 'I', 'S', 'E', 'F', 'E', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;

struct KindName {
  FeatureKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {FeatureKind::Scd, "SCD"},         {FeatureKind::Csd, "CSD"},
    {FeatureKind::Cld, "CLD"},         {FeatureKind::Ehd, "EHD"},
    {FeatureKind::Htd, "HTD"},         {FeatureKind::Mpeg7All, "MPEG7_ALL"},
    {FeatureKind::Dnn, "DNN"},         {FeatureKind::Fused, "FUSED"},
    {FeatureKind::Genre, "GENRE"},     {FeatureKind::TagLsa, "TAG_LSA"},
};

}  // namespace

std::optional<std::size_t> expected_length(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::Scd: return kScdLength;
    case FeatureKind::Csd: return kCsdLength;
    case FeatureKind::Cld: return kCldLength;
    case FeatureKind::Ehd: return kEhdLength;
    case FeatureKind::Htd: return kHtdLength;
    case FeatureKind::Mpeg7All: return kMpeg7Length;
    case FeatureKind::Dnn: return kDnnLength;
    case FeatureKind::Genre: return kGenreCount;
    case FeatureKind::Fused:
    case FeatureKind::TagLsa: return std::nullopt;
  }
  return std::nullopt;
}

std::string_view to_string(FeatureKind kind) noexcept {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "UNKNOWN";
}

FeatureKind feature_kind_from_string(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  fail(ErrorKind::Format, "unknown feature kind '" + std::string(name) + "'");
}

FeatureVector::FeatureVector(FeatureKind kind, std::vector<double> values)
    : kind_(kind), values_(std::move(values)) {
  if (const auto len = expected_length(kind); len && *len != values_.size()) {
    fail(ErrorKind::Dimension,
         std::string(to_string(kind)) + " vector must have length " +
             std::to_string(*len) + ", got " + std::to_string(values_.size()));
  }
}

std::string write_feature_csv(std::span<const FeatureRecord> records) {
  const bool keyed = std::any_of(records.begin(), records.end(),
                                 [](const auto& r) { return r.keyframe != kMovieLevel; });
  const std::size_t len = records.empty() ? 0 : records.front().vector.size();
  std::string out = keyed ? "movie_id,keyframe,kind" : "movie_id,kind";
  for (std::size_t i = 0; i < len; ++i) out += ",v" + std::to_string(i);
  out += '\n';
  for (const auto& rec : records) {
    out += std::to_string(rec.movie_id);
    if (keyed) out += "," + std::to_string(rec.keyframe);
    out += ',';
    out += to_string(rec.vector.kind());
    for (double v : rec.vector.values()) {
      out += ',';
      out += csv::format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<FeatureRecord> parse_feature_csv(std::string_view text) {
  const auto rows = csv::lines(text);
  if (rows.empty()) fail(ErrorKind::Format, "feature CSV lacks a header");
  const auto header = csv::split(rows.front());
  if (header.size() < 2 || header[0] != "movie_id") {
    fail(ErrorKind::Format, "feature CSV header must start with movie_id");
  }
  const bool keyed = header[1] == "keyframe";
  const std::size_t first_value = keyed ? 3 : 2;
  if (header.size() < first_value || header[first_value - 1] != "kind") {
    fail(ErrorKind::Format, "feature CSV header lacks the kind column");
  }
  std::vector<FeatureRecord> out;
  out.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto fields = csv::split(rows[r]);
    if (fields.size() < first_value) {
      fail(ErrorKind::Format, "feature CSV row " + std::to_string(r) +
                                  " has too few columns");
    }
    FeatureRecord rec;
    rec.movie_id = csv::to_int(fields[0], r);
    if (keyed) rec.keyframe = csv::to_int(fields[1], r);
    const FeatureKind kind = feature_kind_from_string(fields[first_value - 1]);
    std::vector<double> values;
    values.reserve(fields.size() - first_value);
    for (std::size_t i = first_value; i < fields.size(); ++i) {
      values.push_back(csv::to_double(fields[i], r));
    }
    const auto len = expected_length(kind);
    if (len && *len != values.size()) {
      fail(ErrorKind::Dimension,
           "row " + std::to_string(r) + " (movie " + std::to_string(rec.movie_id) +
               "): " + std::string(to_string(kind)) + " vector has length " +
               std::to_string(values.size()) + ", expected " + std::to_string(*len));
    }
    rec.vector = FeatureVector(kind, std::move(values));
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<std::uint8_t> write_feature_binary(
    std::span<const FeatureRecord> records) {
  ByteWriter out;
  out.put_raw(std::string_view(kMagic, sizeof(kMagic)));
  const FeatureKind kind =
      records.empty() ? FeatureKind::Mpeg7All : records.front().vector.kind();
  const std::uint64_t len = records.empty() ? 0 : records.front().vector.size();
  out.put(kVersion);
  out.put(static_cast<std::uint32_t>(kind));
  out.put(len);
  out.put(static_cast<std::uint64_t>(records.size()));
  for (const auto& rec : records) {
    if (rec.vector.kind() != kind || rec.vector.size() != len) {
      fail(ErrorKind::KindMismatch,
           "binary feature files hold a single kind and length");
    }
    out.put(rec.movie_id);
    out.put(rec.keyframe);
    out.put_all(rec.vector.values());
  }
  return std::move(out.bytes());
}

std::vector<FeatureRecord> parse_feature_binary(
    std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  in.expect(std::string_view(kMagic, sizeof(kMagic)), "feature file");
  const auto version = in.get<std::uint32_t>("version");
  if (version != kVersion) {
    fail(ErrorKind::Format, "unsupported feature file version " +
                                std::to_string(version));
  }
  const auto tag = in.get<std::uint32_t>("kind");
  if (tag < 1 || tag > 10) {
    fail(ErrorKind::Format, "unknown feature kind tag " + std::to_string(tag));
  }
  const auto kind = static_cast<FeatureKind>(tag);
  const auto len = in.get<std::uint64_t>("length");
  const auto count = in.get<std::uint64_t>("count");
  if (const auto want = expected_length(kind); want && *want != len) {
    fail(ErrorKind::Dimension, std::string(to_string(kind)) +
                                   " file declares length " +
                                   std::to_string(len));
  }
  if (len > 0 && count > in.remaining() / (16 + 8 * len)) {
    fail(ErrorKind::Truncation, "feature file declares " +
                                    std::to_string(count) +
                                    " records but is too short");
  }
  std::vector<FeatureRecord> out;
  out.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) {
    FeatureRecord rec;
    rec.movie_id = in.get<std::int64_t>("movie id");
    rec.keyframe = in.get<std::int64_t>("keyframe");
    std::vector<double> values(len);
    for (auto& v : values) v = in.get<double>("values");
    rec.vector = FeatureVector(kind, std::move(values));
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<FeatureRecord> load_features(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= sizeof(kMagic) &&
      std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) == 0) {
    return parse_feature_binary(bytes);
  }
  return parse_feature_csv(
      std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void save_features(const std::filesystem::path& path,
                   std::span<const FeatureRecord> records) {
  if (path.extension() == ".bin") {
    write_file(path, write_feature_binary(records));
  } else {
    write_file(path, write_feature_csv(records));
  }
}

}  // namespace mise
