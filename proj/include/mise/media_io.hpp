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

// Frame containers, Y4M / PPM parsing and the color conversions used by the
// descriptors.

#ifndef MISE_MEDIA_IO_HPP
#define MISE_MEDIA_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace mise {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

struct Hsv {
  double h = 0.0;  // degrees, [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

struct YCbCr {
  double y = 0.0;
  double cb = 0.0;
  double cr = 0.0;
};

/// One decoded frame: row-major interleaved 8-bit RGB.
class FrameBuffer {
 public:
  FrameBuffer() = default;
  FrameBuffer(int width, int height);
  FrameBuffer(int width, int height, Rgb fill);
  FrameBuffer(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return width_ == 0 || height_ == 0; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  Rgb at(int x, int y) const noexcept {
    const std::size_t i = index(x, y);
    return {pixels_[i], pixels_[i + 1], pixels_[i + 2]};
  }
  void set(int x, int y, Rgb c) noexcept {
    const std::size_t i = index(x, y);
    pixels_[i] = c.r;
    pixels_[i + 1] = c.g;
    pixels_[i + 2] = c.b;
  }

  std::span<const std::uint8_t> bytes() const noexcept { return pixels_; }

  bool operator==(const FrameBuffer&) const = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct FrameStream {
  std::vector<FrameBuffer> frames;
  double frame_rate = 0.0;  // informational

  int width() const noexcept { return frames.empty() ? 0 : frames.front().width(); }
  int height() const noexcept { return frames.empty() ? 0 : frames.front().height(); }
};

enum class ChromaFormat { k420, k422, k444 };

FrameStream parse_y4m(std::span<const std::uint8_t> bytes);
FrameBuffer parse_ppm(std::span<const std::uint8_t> bytes);

/// Writers; Y4M output uses BT.601 full-range with rounding, so a Y4M round
/// trip is lossy while a PPM round trip is exact.
std::vector<std::uint8_t> write_y4m(const FrameStream& stream,
                                    ChromaFormat chroma = ChromaFormat::k444);
std::vector<std::uint8_t> write_ppm(const FrameBuffer& frame);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Loads a `.y4m` file, or a directory of `.ppm` frames taken in filename
/// order.
FrameStream load_video(const std::filesystem::path& path);

Hsv rgb_to_hsv(Rgb pixel) noexcept;
Rgb hsv_to_rgb(const Hsv& hsv) noexcept;
YCbCr rgb_to_ycbcr(Rgb pixel) noexcept;
YCbCr rgb_to_ycbcr(double r, double g, double b) noexcept;
Rgb ycbcr_to_rgb(const YCbCr& ycc) noexcept;

/// BT.601 luma of every pixel, row-major.
std::vector<double> luma_plane(const FrameBuffer& frame);

}  // namespace mise

#endif  // MISE_MEDIA_IO_HPP
