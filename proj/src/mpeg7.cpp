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

#include "mise/mpeg7.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mise/error.hpp"
#include "mise/shotseg.hpp"

namespace mise {

namespace mpeg7_detail {

const std::array<int, 64> kZigzag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

int csd_subsample_factor(int width, int height) noexcept {
  const double area = static_cast<double>(width) * static_cast<double>(height);
  const long p = std::max(0L, std::lround(0.5 * std::log2(area) - 8.0));
  return 1 << p;
}

std::array<double, 64> dct8x8(const std::array<double, 64>& block) noexcept {
  static const auto basis = [] {
    std::array<double, 64> c{};
    for (int k = 0; k < 8; ++k) {
      const double scale = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
      for (int n = 0; n < 8; ++n) {
        c[k * 8 + n] = scale * std::cos(std::numbers::pi * (2 * n + 1) * k / 16.0);
      }
    }
    return c;
  }();
  std::array<double, 64> rows{};
  for (int y = 0; y < 8; ++y) {
    for (int k = 0; k < 8; ++k) {
      double s = 0.0;
      for (int n = 0; n < 8; ++n) s += basis[k * 8 + n] * block[y * 8 + n];
      rows[y * 8 + k] = s;
    }
  }
  std::array<double, 64> out{};
  for (int x = 0; x < 8; ++x) {
    for (int k = 0; k < 8; ++k) {
      double s = 0.0;
      for (int n = 0; n < 8; ++n) s += basis[k * 8 + n] * rows[n * 8 + x];
      out[k * 8 + x] = s;
    }
  }
  return out;
}

std::array<std::array<double, 3>, 64> cld_cell_means(const FrameBuffer& frame) {
  if (frame.empty()) fail(ErrorKind::EmptyInput, "CLD of an empty frame");
  auto span_of = [](int i, int extent) {
    const int lo = i * extent / 8;
    const int hi = std::max(lo + 1, (i + 1) * extent / 8);
    return std::pair{lo, std::min(hi, extent)};
  };
  std::array<std::array<double, 3>, 64> means{};
  for (int cy = 0; cy < 8; ++cy) {
    const auto [y0, y1] = span_of(cy, frame.height());
    for (int cx = 0; cx < 8; ++cx) {
      const auto [x0, x1] = span_of(cx, frame.width());
      double r = 0, g = 0, b = 0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          const Rgb p = frame.at(x, y);
          r += p.r;
          g += p.g;
          b += p.b;
        }
      }
      const double n = double(y1 - y0) * double(x1 - x0);
      means[cy * 8 + cx] = {r / n, g / n, b / n};
    }
  }
  return means;
}

int ehd_block_size(int width, int height) noexcept {
  const double a = std::sqrt(double(width) * double(height) / kDesiredBlocks);
  const int size = static_cast<int>(a / 2.0) * 2;
  return std::max(size, 2);
}

std::array<double, kEdgeTypes> edge_responses(double tl, double tr, double bl,
                                              double br) noexcept {
  const double r2 = std::numbers::sqrt2;
  return {std::fabs(tl - tr + bl - br), std::fabs(tl + tr - bl - br),
          std::fabs(r2 * tl - r2 * br), std::fabs(r2 * tr - r2 * bl),
          std::fabs(2 * tl - 2 * tr - 2 * bl + 2 * br)};
}

}  // namespace mpeg7_detail

using namespace mpeg7_detail;

FeatureVector scd(const FrameBuffer& frame) {
  if (frame.empty()) fail(ErrorKind::EmptyInput, "SCD of an empty frame");
  return FeatureVector(FeatureKind::Scd, frame_histogram(frame).bins);
}

FeatureVector csd(const FrameBuffer& frame) {
  if (frame.empty()) fail(ErrorKind::EmptyInput, "CSD of an empty frame");
  const int k = csd_subsample_factor(frame.width(), frame.height());
  const int ws = (frame.width() + k - 1) / k;
  const int hs = (frame.height() + k - 1) / k;
  std::vector<int> cells(std::size_t(ws) * hs);
  for (int y = 0; y < hs; ++y) {
    for (int x = 0; x < ws; ++x) {
      cells[std::size_t(y) * ws + x] = hsv_cell(frame.at(x * k, y * k));
    }
  }

  // Windows smaller than the structuring element collapse to one placement
  // covering the whole subsampled frame.
  const int win_w = std::min(kCsdWindow, ws);
  const int win_h = std::min(kCsdWindow, hs);
  const int places_x = ws - win_w + 1;
  const int places_y = hs - win_h + 1;

  std::vector<double> counts(kHsvCells, 0.0);
  std::vector<int> stamp(kHsvCells, -1);
  int placement = 0;
  for (int py = 0; py < places_y; ++py) {
    for (int px = 0; px < places_x; ++px, ++placement) {
      for (int y = py; y < py + win_h; ++y) {
        const int* row = &cells[std::size_t(y) * ws];
        for (int x = px; x < px + win_w; ++x) {
          const int c = row[x];
          if (stamp[c] != placement) {
            stamp[c] = placement;
            counts[c] += 1.0;
          }
        }
      }
    }
  }
  for (auto& c : counts) c /= placement;
  return FeatureVector(FeatureKind::Csd, std::move(counts));
}

FeatureVector cld(const FrameBuffer& frame) {
  const auto means = cld_cell_means(frame);
  std::array<std::array<double, 64>, 3> planes{};
  for (int i = 0; i < 64; ++i) {
    const YCbCr c = rgb_to_ycbcr(means[i][0], means[i][1], means[i][2]);
    planes[0][i] = c.y;
    planes[1][i] = c.cb;
    planes[2][i] = c.cr;
  }
  std::vector<double> out;
  out.reserve(kCldLength);
  for (const auto& plane : planes) {
    const auto coeffs = dct8x8(plane);
    for (int i = 0; i < kCldCoefficientsPerChannel; ++i) {
      out.push_back(coeffs[kZigzag[i]]);
    }
  }
  return FeatureVector(FeatureKind::Cld, std::move(out));
}

FeatureVector ehd(const FrameBuffer& frame) {
  if (frame.width() < 8 || frame.height() < 8) {
    fail(ErrorKind::Size, "EHD needs at least 8x8 pixels, got " +
                              std::to_string(frame.width()) + "x" +
                              std::to_string(frame.height()));
  }
  const int w = frame.width();
  const auto luma = luma_plane(frame);
  const int bs = ehd_block_size(frame.width(), frame.height());
  const int half = bs / 2;
  auto sub_mean = [&](int x0, int y0) {
    double s = 0.0;
    for (int y = y0; y < y0 + half; ++y) {
      for (int x = x0; x < x0 + half; ++x) s += luma[std::size_t(y) * w + x];
    }
    return s / (half * half);
  };

  std::vector<double> out(kEhdLength, 0.0);
  for (int sy = 0; sy < 4; ++sy) {
    const int y_lo = sy * frame.height() / 4;
    const int y_hi = (sy + 1) * frame.height() / 4;
    for (int sx = 0; sx < 4; ++sx) {
      const int x_lo = sx * w / 4;
      const int x_hi = (sx + 1) * w / 4;
      const int nbx = (x_hi - x_lo) / bs;
      const int nby = (y_hi - y_lo) / bs;
      if (nbx == 0 || nby == 0) {
        fail(ErrorKind::Size, "EHD subimage too small for a " +
                                  std::to_string(bs) + "-pixel block");
      }
      double* hist = &out[std::size_t(sy * 4 + sx) * kEdgeTypes];
      for (int by = 0; by < nby; ++by) {
        for (int bx = 0; bx < nbx; ++bx) {
          const int x0 = x_lo + bx * bs;
          const int y0 = y_lo + by * bs;
          const auto resp = edge_responses(sub_mean(x0, y0), sub_mean(x0 + half, y0),
                                           sub_mean(x0, y0 + half),
                                           sub_mean(x0 + half, y0 + half));
          const auto best = std::max_element(resp.begin(), resp.end());
          if (*best >= kEdgeThreshold) hist[best - resp.begin()] += 1.0;
        }
      }
      const double blocks = double(nbx) * double(nby);
      for (int e = 0; e < kEdgeTypes; ++e) hist[e] /= blocks;
    }
  }
  return FeatureVector(FeatureKind::Ehd, std::move(out));
}

FeatureVector mpeg7_all(const FrameBuffer& frame) {
  std::vector<double> out;
  out.reserve(kMpeg7Length);
  for (const auto& part : {scd(frame), csd(frame), cld(frame), ehd(frame), htd(frame)}) {
    out.insert(out.end(), part.values().begin(), part.values().end());
  }
  return FeatureVector(FeatureKind::Mpeg7All, std::move(out));
}

}  // namespace mise
