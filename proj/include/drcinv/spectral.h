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

#ifndef DRCINV_SPECTRAL_H_
#define DRCINV_SPECTRAL_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "drcinv/core.h"

namespace drc {

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<double>& data() const { return data_; }

  // this (rows x k) * other (k x cols)
  Matrix Multiply(const Matrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct SpectralConfig {
  std::size_t fft_size = 2048;
  std::size_t hop_size = 512;
  std::size_t n_mels = 128;
  double fmin = 0.0;
  std::optional<double> fmax; // defaults to the Nyquist frequency
  double log_floor = 1e-10;

  double resolved_fmax(int sample_rate) const {
    return fmax.value_or(sample_rate / 2.0);
  }
};

// Throws kInvalidConfig.
void ValidateSpectralConfig(const SpectralConfig& cfg, int sample_rate);

// Periodic Hann window of the given length.
std::vector<double> HannWindow(std::size_t length);

// Slaney mel scale (linear below 1 kHz, logarithmic above).
double HzToMel(double hz);
double MelToHz(double mel);

// Centred STFT magnitude, (fft_size/2 + 1) x (1 + N/hop), reflection padded.
// Throws kClipTooShort when the clip is shorter than fft_size.
Matrix StftMagnitude(const AudioClip& clip, const SpectralConfig& cfg);

// Area-normalised triangular filters, n_mels x (fft_size/2 + 1).
Matrix MelFilterbank(const SpectralConfig& cfg, int sample_rate);

// filterbank * |STFT|
Matrix MelSpectrogram(const AudioClip& clip, const SpectralConfig& cfg);

} // namespace drc

#endif // DRCINV_SPECTRAL_H_
