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

// Homogeneous texture: a polar Gabor bank applied in the frequency domain.
// Radial centers are octave spaced starting at 3/4 of Nyquist, with
// half-peak bandwidths that make neighbouring scales touch; orientations
// are 30 degrees apart with a 30 degree half-peak angular width.

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "mise/error.hpp"
#include "mise/mpeg7.hpp"

namespace mise {

namespace mpeg7_detail {

namespace {
const double kFwhmToSigma = 1.0 / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

GaborChannel gabor_channel(int scale, int orientation) noexcept {
  const double octave = std::ldexp(1.0, -scale);
  // Normalized units have Nyquist = 1, i.e. 0.5 cycles/pixel.
  const double center = 0.75 * octave * 0.5;
  const double bandwidth = 0.5 * octave * 0.5;
  return {center, 30.0 * orientation, bandwidth * kFwhmToSigma,
          30.0 * kFwhmToSigma};
}

double gabor_response(const GaborChannel& ch, double fx, double fy) noexcept {
  const double rho = std::hypot(fx, fy);
  if (rho == 0.0) return 0.0;
  double theta = std::atan2(fy, fx) * 180.0 / std::numbers::pi;
  // Real images have symmetric spectra; orientation is taken modulo 180.
  double d = std::fmod(theta - ch.orientation_deg, 180.0);
  if (d < -90.0) d += 180.0;
  if (d > 90.0) d -= 180.0;
  const double dr = rho - ch.center_frequency;
  return std::exp(-dr * dr / (2 * ch.radial_sigma * ch.radial_sigma)) *
         std::exp(-d * d / (2 * ch.angular_sigma_deg * ch.angular_sigma_deg));
}

}  // namespace mpeg7_detail

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(p);
  }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

}  // namespace

using namespace mpeg7_detail;

FeatureVector htd(const FrameBuffer& frame) {
  const int w = frame.width();
  const int h = frame.height();
  if (w < kHtdMinSide || h < kHtdMinSide) {
    fail(ErrorKind::Size, "HTD needs at least 32x32 pixels, got " +
                              std::to_string(w) + "x" + std::to_string(h));
  }
  const auto luma = luma_plane(frame);
  const std::size_t n = luma.size();
  const double mean = std::accumulate(luma.begin(), luma.end(), 0.0) / n;
  double var = 0.0;
  for (double v : luma) var += (v - mean) * (v - mean);
  const double stddev = std::sqrt(var / n);

  const int wc = w / 2 + 1;  // r2c half spectrum along x
  const std::size_t nc = std::size_t(h) * wc;
  auto spatial = fftw_buffer<double>(n);
  auto spectrum = fftw_buffer<fftw_complex>(nc);
  auto filtered = fftw_buffer<fftw_complex>(nc);
  Plan forward, backward;
  {
    std::lock_guard lock(planner_mutex());
    forward.reset(fftw_plan_dft_r2c_2d(h, w, spatial.get(), spectrum.get(),
                                       FFTW_ESTIMATE));
    backward.reset(fftw_plan_dft_c2r_2d(h, w, filtered.get(), spatial.get(),
                                        FFTW_ESTIMATE));
  }
  std::copy(luma.begin(), luma.end(), spatial.get());
  fftw_execute(forward.get());

  std::vector<double> energies(kHtdScales * kHtdOrientations);
  std::vector<double> deviations(energies.size());
  for (int s = 0; s < kHtdScales; ++s) {
    for (int r = 0; r < kHtdOrientations; ++r) {
      const GaborChannel ch = gabor_channel(s, r);
      for (int ky = 0; ky < h; ++ky) {
        const double fy = double(ky <= h / 2 ? ky : ky - h) / h;
        for (int kx = 0; kx < wc; ++kx) {
          const double fx = double(kx) / w;
          const double g = gabor_response(ch, fx, fy);
          const std::size_t i = std::size_t(ky) * wc + kx;
          filtered[i][0] = spectrum[i][0] * g;
          filtered[i][1] = spectrum[i][1] * g;
        }
      }
      fftw_execute(backward.get());
      // The bank is symmetric in frequency, so responses are real.
      double sum = 0.0, sum_sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = spatial[i] / double(n);
        const double p = v * v;
        sum += p;
        sum_sq += p * p;
      }
      const double m = sum / n;
      const double sd = std::sqrt(std::max(0.0, sum_sq / n - m * m));
      const int k = s * kHtdOrientations + r;
      energies[k] = std::log1p(m);
      deviations[k] = std::log1p(sd);
    }
  }

  std::vector<double> out;
  out.reserve(kHtdLength);
  out.push_back(mean);
  out.push_back(stddev);
  out.insert(out.end(), energies.begin(), energies.end());
  out.insert(out.end(), deviations.begin(), deviations.end());
  return FeatureVector(FeatureKind::Htd, std::move(out));
}

}  // namespace mise
