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

// Shot boundary detection by histogram intersection of consecutive frames.

#ifndef MISE_SHOTSEG_HPP
#define MISE_SHOTSEG_HPP

#include <string>
#include <string_view>
#include <vector>

#include "mise/media_io.hpp"

namespace mise {

/// 256-cell HSV quantizer shared by the segmentation histogram, SCD and CSD:
/// 16 hue x 4 saturation x 4 value cells, hue-major.
inline constexpr int kHueBins = 16;
inline constexpr int kSatBins = 4;
inline constexpr int kValBins = 4;
inline constexpr int kHsvCells = kHueBins * kSatBins * kValBins;

int hsv_cell(const Hsv& hsv) noexcept;
inline int hsv_cell(Rgb pixel) noexcept { return hsv_cell(rgb_to_hsv(pixel)); }
constexpr int hsv_cell(int h_idx, int s_idx, int v_idx) noexcept {
  return h_idx * kSatBins * kValBins + s_idx * kValBins + v_idx;
}

struct Histogram {
  std::vector<double> bins;
  bool normalized = false;

  double mass() const noexcept;
};

Histogram frame_histogram(const FrameBuffer& frame);

/// Sum of per-bin minima.
double histogram_intersection(const Histogram& a, const Histogram& b);

inline constexpr double kDefaultShotThreshold = 0.75;

struct ShotRange {
  int start = 0;  // inclusive
  int end = 0;    // inclusive
  int keyframe = 0;
};

struct ShotBoundaryList {
  /// t in `boundaries` means frames t and t+1 belong to different shots.
  std::vector<int> boundaries;
  std::vector<int> keyframes;
  int frame_count = 0;

  std::size_t shot_count() const noexcept { return boundaries.size() + 1; }
  std::vector<ShotRange> shots() const;
};

/// Boundary at t whenever similarity(h_t, h_{t+1}) < threshold; keyframe of
/// each shot is its middle frame, floor((start+end)/2).
ShotBoundaryList detect_shots(const FrameStream& stream,
                              double threshold = kDefaultShotThreshold);
ShotBoundaryList detect_shots(const std::vector<Histogram>& histograms,
                              double threshold = kDefaultShotThreshold);

/// `shot_id,start_frame,end_frame,keyframe`
std::string write_shot_csv(const ShotBoundaryList& shots);
ShotBoundaryList parse_shot_csv(std::string_view text);

}  // namespace mise

#endif  // MISE_SHOTSEG_HPP
