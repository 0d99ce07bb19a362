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

#include "mise/shotseg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mise/csv.hpp"
#include "mise/error.hpp"

namespace mise {

int hsv_cell(const Hsv& hsv) noexcept {
  const int h = std::min(kHueBins - 1, static_cast<int>(hsv.h / (360.0 / kHueBins)));
  const int s = std::min(kSatBins - 1, static_cast<int>(hsv.s * kSatBins));
  const int v = std::min(kValBins - 1, static_cast<int>(hsv.v * kValBins));
  return hsv_cell(std::max(h, 0), std::max(s, 0), std::max(v, 0));
}

double Histogram::mass() const noexcept {
  return std::accumulate(bins.begin(), bins.end(), 0.0);
}

Histogram frame_histogram(const FrameBuffer& frame) {
  if (frame.empty()) fail(ErrorKind::EmptyInput, "histogram of an empty frame");
  Histogram h;
  h.bins.assign(kHsvCells, 0.0);
  std::vector<std::size_t> counts(kHsvCells, 0);
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) ++counts[hsv_cell(frame.at(x, y))];
  }
  const double n = static_cast<double>(frame.pixel_count());
  for (int b = 0; b < kHsvCells; ++b) h.bins[b] = counts[b] / n;
  h.normalized = true;
  return h;
}

double histogram_intersection(const Histogram& a, const Histogram& b) {
  if (a.bins.size() != b.bins.size()) {
    fail(ErrorKind::Dimension, "histogram lengths differ: " +
                                   std::to_string(a.bins.size()) + " vs " +
                                   std::to_string(b.bins.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.bins.size(); ++i) s += std::min(a.bins[i], b.bins[i]);
  return s;
}

std::vector<ShotRange> ShotBoundaryList::shots() const {
  std::vector<ShotRange> out;
  int start = 0;
  for (std::size_t i = 0; i <= boundaries.size(); ++i) {
    const int end = i < boundaries.size() ? boundaries[i] : frame_count - 1;
    out.push_back({start, end, keyframes.at(i)});
    start = end + 1;
  }
  return out;
}

ShotBoundaryList detect_shots(const std::vector<Histogram>& histograms,
                              double threshold) {
  if (histograms.empty()) fail(ErrorKind::EmptyInput, "no frames to segment");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    fail(ErrorKind::Parameter, "shot threshold must lie in [0, 1]");
  }
  ShotBoundaryList out;
  out.frame_count = static_cast<int>(histograms.size());
  for (std::size_t t = 0; t + 1 < histograms.size(); ++t) {
    if (histogram_intersection(histograms[t], histograms[t + 1]) < threshold) {
      out.boundaries.push_back(static_cast<int>(t));
    }
  }
  int start = 0;
  for (std::size_t i = 0; i <= out.boundaries.size(); ++i) {
    const int end = i < out.boundaries.size() ? out.boundaries[i] : out.frame_count - 1;
    out.keyframes.push_back((start + end) / 2);
    start = end + 1;
  }
  return out;
}

ShotBoundaryList detect_shots(const FrameStream& stream, double threshold) {
  if (stream.frames.empty()) fail(ErrorKind::EmptyInput, "no frames to segment");
  std::vector<Histogram> hist;
  hist.reserve(stream.frames.size());
  for (const auto& f : stream.frames) hist.push_back(frame_histogram(f));
  return detect_shots(hist, threshold);
}

std::string write_shot_csv(const ShotBoundaryList& shots) {
  std::string out = "shot_id,start_frame,end_frame,keyframe\n";
  int id = 0;
  for (const auto& s : shots.shots()) {
    out += std::to_string(id++) + "," + std::to_string(s.start) + "," +
           std::to_string(s.end) + "," + std::to_string(s.keyframe) + "\n";
  }
  return out;
}

ShotBoundaryList parse_shot_csv(std::string_view text) {
  const auto rows = csv::lines(text);
  if (rows.empty() || rows.front() != "shot_id,start_frame,end_frame,keyframe") {
    fail(ErrorKind::Format, "shot CSV header mismatch");
  }
  ShotBoundaryList out;
  int expected_start = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto f = csv::split(rows[r]);
    if (f.size() != 4) fail(ErrorKind::Format, "shot CSV row " + std::to_string(r));
    const auto start = static_cast<int>(csv::to_int(f[1], r));
    const auto end = static_cast<int>(csv::to_int(f[2], r));
    const auto key = static_cast<int>(csv::to_int(f[3], r));
    if (start != expected_start || end < start || key < start || key > end) {
      fail(ErrorKind::Format, "shot CSV row " + std::to_string(r) +
                                  " is not contiguous with the previous shot");
    }
    if (r > 1) out.boundaries.push_back(start - 1);
    out.keyframes.push_back(key);
    expected_start = end + 1;
  }
  if (out.keyframes.empty()) fail(ErrorKind::EmptyInput, "shot CSV has no shots");
  out.frame_count = expected_start;
  return out;
}

}  // namespace mise
