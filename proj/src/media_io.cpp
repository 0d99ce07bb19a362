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

#include "mise/media_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string_view>

#include "mise/error.hpp"

namespace mise {

namespace fs = std::filesystem;

FrameBuffer::FrameBuffer(int width, int height)
    : FrameBuffer(width, height, Rgb{}) {}

FrameBuffer::FrameBuffer(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    fail(ErrorKind::Dimension, "negative frame dimensions");
  }
  pixels_.resize(pixel_count() * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

FrameBuffer::FrameBuffer(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width < 0 || height < 0 || pixels_.size() != pixel_count() * 3) {
    fail(ErrorKind::Dimension,
         "pixel buffer of " + std::to_string(pixels_.size()) +
             " bytes does not match " + std::to_string(width) + "x" +
             std::to_string(height) + "x3");
  }
}

namespace {

std::uint8_t clamp_round(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

struct Y4mHeader {
  int width = 0;
  int height = 0;
  double frame_rate = 0.0;
  ChromaFormat chroma = ChromaFormat::k420;
};

ChromaFormat parse_chroma_tag(std::string_view tag, std::size_t offset) {
  if (tag.starts_with("420")) return ChromaFormat::k420;
  if (tag == "422") return ChromaFormat::k422;
  if (tag == "444") return ChromaFormat::k444;
  fail(ErrorKind::Format, "unsupported Y4M chroma tag 'C" + std::string(tag) +
                              "' at byte " + std::to_string(offset));
}

std::pair<int, int> chroma_dims(ChromaFormat chroma, int w, int h) {
  switch (chroma) {
    case ChromaFormat::k420: return {(w + 1) / 2, (h + 1) / 2};
    case ChromaFormat::k422: return {(w + 1) / 2, h};
    case ChromaFormat::k444: return {w, h};
  }
  return {w, h};
}

std::optional<int> parse_positive(std::string_view text) {
  if (text.empty()) return std::nullopt;
  long value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
    if (value > (1 << 20)) return std::nullopt;
  }
  if (value <= 0) return std::nullopt;
  return static_cast<int>(value);
}

}  // namespace

FrameStream parse_y4m(std::span<const std::uint8_t> bytes) {
  constexpr std::string_view kSignature = "YUV4MPEG2";
  const std::string_view data(reinterpret_cast<const char*>(bytes.data()),
                              bytes.size());
  if (!data.starts_with(kSignature) || data.size() == kSignature.size() ||
      (data[kSignature.size()] != ' ' && data[kSignature.size()] != '\n')) {
    fail(ErrorKind::Format, "missing YUV4MPEG2 signature at byte 0");
  }
  const std::size_t header_end = data.find('\n');
  if (header_end == std::string_view::npos) {
    fail(ErrorKind::Format, "unterminated Y4M header at byte " +
                                std::to_string(data.size()));
  }

  Y4mHeader header;
  std::size_t pos = kSignature.size();
  while (pos < header_end) {
    if (data[pos] == ' ') {
      ++pos;
      continue;
    }
    const std::size_t end = std::min(data.find(' ', pos), header_end);
    const std::string_view token = data.substr(pos, end - pos);
    const std::string_view value = token.substr(1);
    switch (token.front()) {
      case 'W':
      case 'H': {
        auto v = parse_positive(value);
        if (!v) {
          fail(ErrorKind::Format, "bad Y4M dimension tag '" +
                                      std::string(token) + "' at byte " +
                                      std::to_string(pos));
        }
        (token.front() == 'W' ? header.width : header.height) = *v;
        break;
      }
      case 'F': {
        const auto colon = value.find(':');
        auto num = parse_positive(value.substr(0, colon));
        auto den = colon == std::string_view::npos
                       ? std::optional<int>{}
                       : parse_positive(value.substr(colon + 1));
        if (num && den) header.frame_rate = double(*num) / double(*den);
        break;
      }
      case 'C':
        header.chroma = parse_chroma_tag(value, pos);
        break;
      default:
        break;  // I, A, X and unknown tags carry no pixel semantics
    }
    pos = end;
  }
  if (header.width == 0 || header.height == 0) {
    fail(ErrorKind::Format, "Y4M header lacks W/H tags (byte " +
                                std::to_string(header_end) + ")");
  }

  const auto [cw, ch] = chroma_dims(header.chroma, header.width, header.height);
  const std::size_t luma_size =
      static_cast<std::size_t>(header.width) * header.height;
  const std::size_t chroma_size = static_cast<std::size_t>(cw) * ch;
  const std::size_t payload = luma_size + 2 * chroma_size;
  const int xshift = cw == header.width ? 0 : 1;
  const int yshift = ch == header.height ? 0 : 1;

  FrameStream stream;
  stream.frame_rate = header.frame_rate;
  pos = header_end + 1;
  while (pos < data.size()) {
    const std::size_t frame_index = stream.frames.size();
    if (!data.substr(pos).starts_with("FRAME")) {
      fail(ErrorKind::Format, "expected FRAME marker at byte " +
                                  std::to_string(pos));
    }
    const std::size_t eol = data.find('\n', pos);
    if (eol == std::string_view::npos) {
      fail(ErrorKind::Truncation,
           "truncated FRAME header for frame " + std::to_string(frame_index));
    }
    pos = eol + 1;
    if (data.size() - pos < payload) {
      fail(ErrorKind::Truncation,
           "truncated payload for frame " + std::to_string(frame_index) +
               ": need " + std::to_string(payload) + " bytes, have " +
               std::to_string(data.size() - pos));
    }
    const std::uint8_t* yp = bytes.data() + pos;
    const std::uint8_t* up = yp + luma_size;
    const std::uint8_t* vp = up + chroma_size;
    FrameBuffer frame(header.width, header.height);
    for (int y = 0; y < header.height; ++y) {
      for (int x = 0; x < header.width; ++x) {
        const std::size_t ci =
            static_cast<std::size_t>(y >> yshift) * cw + (x >> xshift);
        frame.set(x, y, ycbcr_to_rgb({double(yp[std::size_t(y) * header.width + x]),
                                      double(up[ci]), double(vp[ci])}));
      }
    }
    stream.frames.push_back(std::move(frame));
    pos += payload;
  }
  return stream;
}

std::vector<std::uint8_t> write_y4m(const FrameStream& stream,
                                    ChromaFormat chroma) {
  const int w = stream.width();
  const int h = stream.height();
  if (w == 0 || h == 0) {
    fail(ErrorKind::EmptyInput, "cannot write a Y4M stream without frames");
  }
  const char* tag = chroma == ChromaFormat::k420   ? "420jpeg"
                    : chroma == ChromaFormat::k422 ? "422"
                                                   : "444";
  int rate = static_cast<int>(std::lround(stream.frame_rate));
  if (rate <= 0) rate = 25;
  std::ostringstream head;
  head << "YUV4MPEG2 W" << w << " H" << h << " F" << rate << ":1 Ip A1:1 C"
       << tag << "\n";
  const std::string text = head.str();
  std::vector<std::uint8_t> out(text.begin(), text.end());

  const auto [cw, ch] = chroma_dims(chroma, w, h);
  const int bx = w / cw + (w % cw != 0);
  const int by = h / ch + (h % ch != 0);
  for (const FrameBuffer& frame : stream.frames) {
    if (frame.width() != w || frame.height() != h) {
      fail(ErrorKind::Dimension, "frames of a stream must share dimensions");
    }
    constexpr std::string_view kMarker = "FRAME\n";
    out.insert(out.end(), kMarker.begin(), kMarker.end());
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        out.push_back(clamp_round(rgb_to_ycbcr(frame.at(x, y)).y));
      }
    }
    std::vector<std::uint8_t> cb(std::size_t(cw) * ch), cr(std::size_t(cw) * ch);
    for (int cy = 0; cy < ch; ++cy) {
      for (int cx = 0; cx < cw; ++cx) {
        double sb = 0.0, sr = 0.0;
        int n = 0;
        for (int dy = 0; dy < by; ++dy) {
          for (int dx = 0; dx < bx; ++dx) {
            const int x = cx * bx + dx;
            const int y = cy * by + dy;
            if (x >= w || y >= h) continue;
            const YCbCr c = rgb_to_ycbcr(frame.at(x, y));
            sb += c.cb;
            sr += c.cr;
            ++n;
          }
        }
        cb[std::size_t(cy) * cw + cx] = clamp_round(sb / n);
        cr[std::size_t(cy) * cw + cx] = clamp_round(sr / n);
      }
    }
    out.insert(out.end(), cb.begin(), cb.end());
    out.insert(out.end(), cr.begin(), cr.end());
  }
  return out;
}

FrameBuffer parse_ppm(std::span<const std::uint8_t> bytes) {
  std::size_t pos = 0;
  auto skip_space_and_comments = [&] {
    while (pos < bytes.size()) {
      const char c = static_cast<char>(bytes[pos]);
      if (c == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_number = [&](const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos;
    long value = 0;
    while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
      value = value * 10 + (bytes[pos] - '0');
      if (value > (1L << 24)) break;
      ++pos;
    }
    if (pos == start) {
      fail(ErrorKind::Format, std::string("expected PPM ") + what +
                                  " at byte " + std::to_string(start));
    }
    return value;
  };

  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    fail(ErrorKind::Format, "missing P6 signature at byte 0");
  }
  pos = 2;
  const long width = read_number("width");
  const long height = read_number("height");
  const long maxval = read_number("maxval");
  if (maxval != 255) {
    fail(ErrorKind::UnsupportedDepth,
         "PPM maxval " + std::to_string(maxval) + " unsupported (need 255)");
  }
  if (width <= 0 || height <= 0) {
    fail(ErrorKind::Format, "PPM dimensions must be positive");
  }
  if (pos >= bytes.size()) {
    fail(ErrorKind::Truncation, "PPM ends before pixel payload");
  }
  ++pos;  // exactly one whitespace byte after maxval
  const std::size_t need = static_cast<std::size_t>(width) * height * 3;
  if (bytes.size() - pos < need) {
    fail(ErrorKind::Truncation, "PPM payload has " +
                                    std::to_string(bytes.size() - pos) +
                                    " bytes, expected " + std::to_string(need));
  }
  std::vector<std::uint8_t> pixels(bytes.begin() + pos,
                                   bytes.begin() + pos + need);
  return FrameBuffer(static_cast<int>(width), static_cast<int>(height),
                     std::move(pixels));
}

std::vector<std::uint8_t> write_ppm(const FrameBuffer& frame) {
  const std::string head = "P6\n" + std::to_string(frame.width()) + " " +
                           std::to_string(frame.height()) + "\n255\n";
  std::vector<std::uint8_t> out(head.begin(), head.end());
  out.insert(out.end(), frame.bytes().begin(), frame.bytes().end());
  return out;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "short write to " + path.string());
}

void write_file(const fs::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                             text.size()));
}

FrameStream load_video(const fs::path& path) {
  if (fs::is_directory(path)) {
    std::vector<fs::path> frames;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
        frames.push_back(entry.path());
      }
    }
    std::sort(frames.begin(), frames.end());
    FrameStream stream;
    for (const auto& f : frames) {
      stream.frames.push_back(parse_ppm(read_file(f)));
      if (stream.frames.back().width() != stream.frames.front().width() ||
          stream.frames.back().height() != stream.frames.front().height()) {
        fail(ErrorKind::Dimension, "frame " + f.string() +
                                       " differs in size from the first frame");
      }
    }
    return stream;
  }
  const auto bytes = read_file(path);
  if (path.extension() == ".ppm") {
    FrameStream stream;
    stream.frames.push_back(parse_ppm(bytes));
    return stream;
  }
  return parse_y4m(bytes);
}

Hsv rgb_to_hsv(Rgb pixel) noexcept {
  const double r = pixel.r / 255.0;
  const double g = pixel.g / 255.0;
  const double b = pixel.b / 255.0;
  const double max = std::max({r, g, b});
  const double min = std::min({r, g, b});
  const double delta = max - min;
  Hsv out;
  out.v = max;
  out.s = max > 0.0 ? delta / max : 0.0;
  if (delta <= 0.0) return out;  // achromatic: hue fixed at 0
  double h;
  if (pixel.r >= pixel.g && pixel.r >= pixel.b) {
    h = 60.0 * std::fmod((g - b) / delta + 6.0, 6.0);
  } else if (pixel.g >= pixel.b) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

Rgb hsv_to_rgb(const Hsv& hsv) noexcept {
  const double c = hsv.v * hsv.s;
  const double hp = std::fmod(hsv.h, 360.0) / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp)) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = hsv.v - c;
  return {clamp_round((r + m) * 255.0), clamp_round((g + m) * 255.0),
          clamp_round((b + m) * 255.0)};
}

YCbCr rgb_to_ycbcr(double r, double g, double b) noexcept {
  return {0.299 * r + 0.587 * g + 0.114 * b,
          128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b,
          128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b};
}

YCbCr rgb_to_ycbcr(Rgb pixel) noexcept {
  return rgb_to_ycbcr(pixel.r, pixel.g, pixel.b);
}

Rgb ycbcr_to_rgb(const YCbCr& ycc) noexcept {
  const double cb = ycc.cb - 128.0;
  const double cr = ycc.cr - 128.0;
  return {clamp_round(ycc.y + 1.402 * cr),
          clamp_round(ycc.y - 0.344136 * cb - 0.714136 * cr),
          clamp_round(ycc.y + 1.772 * cb)};
}

std::vector<double> luma_plane(const FrameBuffer& frame) {
  std::vector<double> out(frame.pixel_count());
  const auto px = frame.bytes();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * px[3 * i] + 0.587 * px[3 * i + 1] + 0.114 * px[3 * i + 2];
  }
  return out;
}

}  // namespace mise
