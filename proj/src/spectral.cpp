/**
 * Copyright 2026 The drcinv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "drcinv/spectral.h"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace drc {

Matrix Matrix::Multiply(const Matrix& other) const {
  Matrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(r, k);
      if (a == 0.0) continue;
      const double* src = &other.data_[k * other.cols_];
      double* dst = &out.data_[r * other.cols_];
      for (std::size_t c = 0; c < other.cols_; ++c) dst[c] += a * src[c];
    }
  }
  return out;
}

void ValidateSpectralConfig(const SpectralConfig& cfg, int sample_rate) {
  const auto fail = [](const char* what) {
    throw Error(ErrorCode::kInvalidConfig, what);
  };
  if (cfg.fft_size < 2 || (cfg.fft_size & (cfg.fft_size - 1)) != 0) {
    fail("fft_size must be a power of two");
  }
  if (cfg.hop_size == 0 || cfg.hop_size > cfg.fft_size) {
    fail("hop_size must be in (0, fft_size]");
  }
  if (cfg.n_mels < 1) fail("n_mels must be >= 1");
  if (sample_rate <= 0) fail("sample rate must be positive");
  const double fmax = cfg.resolved_fmax(sample_rate);
  if (!(cfg.fmin >= 0.0) || !(cfg.fmin < fmax)) fail("need 0 <= fmin < fmax");
  if (!(cfg.log_floor >= 0.0)) fail("log_floor must be non-negative");
}

std::vector<double> HannWindow(std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
  }
  return w;
}

namespace {

constexpr double kMelLinearStep = 200.0 / 3.0;
constexpr double kMelLogStartHz = 1000.0;
constexpr double kMelLogStart = kMelLogStartHz / kMelLinearStep;
const double kMelLogStep = std::log(6.4) / 27.0;

// FFTW planning is not thread-safe; execution on fresh arrays is.
class R2cPlanCache {
 public:
  static fftw_plan Get(std::size_t n) {
    static R2cPlanCache cache;
    std::lock_guard<std::mutex> lock(cache.mu_);
    auto it = cache.plans_.find(n);
    if (it != cache.plans_.end()) return it->second;
    auto* in = fftw_alloc_real(n);
    auto* out = fftw_alloc_complex(n / 2 + 1);
    fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    cache.plans_.emplace(n, plan);
    return plan;
  }

 private:
  ~R2cPlanCache() {
    for (auto& [_, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mu_;
  std::map<std::size_t, fftw_plan> plans_;
};

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

} // namespace

double HzToMel(double hz) {
  if (hz < kMelLogStartHz) return hz / kMelLinearStep;
  return kMelLogStart + std::log(hz / kMelLogStartHz) / kMelLogStep;
}

double MelToHz(double mel) {
  if (mel < kMelLogStart) return mel * kMelLinearStep;
  return kMelLogStartHz * std::exp(kMelLogStep * (mel - kMelLogStart));
}

Matrix StftMagnitude(const AudioClip& clip, const SpectralConfig& cfg) {
  ValidateSpectralConfig(cfg, clip.sample_rate_hz);
  const std::size_t n_fft = cfg.fft_size;
  const std::size_t len = clip.size();
  if (len < n_fft) {
    throw Error(ErrorCode::kClipTooShort, "clip shorter than fft_size");
  }

  const std::size_t bins = n_fft / 2 + 1;
  const std::size_t frames = 1 + len / cfg.hop_size;
  const auto pad = static_cast<std::ptrdiff_t>(n_fft / 2);
  const auto n = static_cast<std::ptrdiff_t>(len);
  const auto window = HannWindow(n_fft);

  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n_fft));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(bins));
  const fftw_plan plan = R2cPlanCache::Get(n_fft);

  Matrix mag(bins, frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(t * cfg.hop_size) - pad;
    for (std::size_t k = 0; k < n_fft; ++k) {
      std::ptrdiff_t j = start + static_cast<std::ptrdiff_t>(k);
      if (j < 0) j = -j;
      if (j >= n) j = 2 * (n - 1) - j;
      in.get()[k] = clip.samples[static_cast<std::size_t>(j)] * window[k];
    }
    fftw_execute_dft_r2c(plan, in.get(), out.get());
    for (std::size_t b = 0; b < bins; ++b) {
      mag(b, t) = std::hypot(out.get()[b][0], out.get()[b][1]);
    }
  }
  return mag;
}

Matrix MelFilterbank(const SpectralConfig& cfg, int sample_rate) {
  ValidateSpectralConfig(cfg, sample_rate);
  const std::size_t bins = cfg.fft_size / 2 + 1;
  const std::size_t n_mels = cfg.n_mels;

  const double mel_lo = HzToMel(cfg.fmin);
  const double mel_hi = HzToMel(cfg.resolved_fmax(sample_rate));
  std::vector<double> edges(n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));
  }

  Matrix fb(n_mels, bins);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    const double norm = 2.0 / (hi - lo);
    for (std::size_t b = 0; b < bins; ++b) {
      const double hz = static_cast<double>(b) * sample_rate / cfg.fft_size;
      const double rising = (hz - lo) / (mid - lo);
      const double falling = (hi - hz) / (hi - mid);
      fb(m, b) = norm * std::max(0.0, std::min(rising, falling));
    }
  }
  return fb;
}

Matrix MelSpectrogram(const AudioClip& clip, const SpectralConfig& cfg) {
  return MelFilterbank(cfg, clip.sample_rate_hz).Multiply(StftMagnitude(clip, cfg));
}

} // namespace drc
