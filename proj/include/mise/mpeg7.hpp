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

// Color and texture descriptors computed per keyframe.
//
//   SCD  256  normalized HSV (16,4,4) histogram
//   CSD  256  color-structure histogram over the same HSV cells
//   CLD  120  zigzag DCT of an 8x8 YCbCr thumbnail, 40 coefficients/channel
//   EHD   80  5-way edge histogram for each of 4x4 subimages
//   HTD   62  luma mean/std + 30 Gabor channel energies + 30 deviations

#ifndef MISE_MPEG7_HPP
#define MISE_MPEG7_HPP

#include <array>

#include "mise/feature.hpp"
#include "mise/media_io.hpp"

namespace mise {

FeatureVector scd(const FrameBuffer& frame);
FeatureVector csd(const FrameBuffer& frame);
FeatureVector cld(const FrameBuffer& frame);
FeatureVector ehd(const FrameBuffer& frame);
FeatureVector htd(const FrameBuffer& frame);

/// SCD | CSD | CLD | EHD | HTD, 774 values.
FeatureVector mpeg7_all(const FrameBuffer& frame);

namespace mpeg7_detail {

/// CSD spatial subsampling factor K = 2^p, p = max(0, round(0.5 log2(WH) - 8)).
int csd_subsample_factor(int width, int height) noexcept;
inline constexpr int kCsdWindow = 8;

/// JPEG zigzag order: kZigzag[i] = row * 8 + col of the i-th coefficient.
extern const std::array<int, 64> kZigzag;
inline constexpr int kCldCoefficientsPerChannel = 40;

/// Orthonormal 8x8 type-II DCT, separable.
std::array<double, 64> dct8x8(const std::array<double, 64>& block) noexcept;

/// Mean RGB of each cell of the 8x8 grid, cell-row-major.
std::array<std::array<double, 3>, 64> cld_cell_means(const FrameBuffer& frame);

enum EdgeType { kVertical = 0, kHorizontal, kDiagonal45, kDiagonal135,
                kNonDirectional, kEdgeTypes };
inline constexpr double kEdgeThreshold = 11.0;
inline constexpr int kDesiredBlocks = 1100;

/// Even macro-block side targeting ~1100 blocks per frame (minimum 2).
int ehd_block_size(int width, int height) noexcept;

/// Filter responses of the five 2x2 edge operators on sub-block means
/// (top-left, top-right, bottom-left, bottom-right).
std::array<double, kEdgeTypes> edge_responses(double tl, double tr, double bl,
                                              double br) noexcept;

inline constexpr int kHtdScales = 5;
inline constexpr int kHtdOrientations = 6;
inline constexpr int kHtdMinSide = 32;

/// Gabor channel k = scale * 6 + orientation. Center radial frequency in
/// cycles/pixel and orientation of the frequency vector in degrees.
struct GaborChannel {
  double center_frequency;
  double orientation_deg;
  double radial_sigma;
  double angular_sigma_deg;
};
GaborChannel gabor_channel(int scale, int orientation) noexcept;

/// Frequency response of a channel at (fx, fy) cycles/pixel; zero at DC.
double gabor_response(const GaborChannel& channel, double fx, double fy) noexcept;

}  // namespace mpeg7_detail

}  // namespace mise

#endif  // MISE_MPEG7_HPP
