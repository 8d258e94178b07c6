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

#ifndef DRCINV_METRICS_H_
#define DRCINV_METRICS_H_

#include <ostream>

#include "drcinv/core.h"
#include "drcinv/spectral.h"

namespace drc {

// Reported instead of +inf for (numerically) perfect reconstructions.
inline constexpr double kSiSdrCapDb = 200.0;

struct MetricReport {
  double mse = 0.0;
  double mel_l2 = 0.0;
  double si_sdr_db = 0.0; // -inf for an orthogonal estimate
};

double Rms(const AudioClip& clip);

// Divides by the clip RMS. Throws kSilentClip when RMS < 1e-12.
AudioClip RmsNormalize(const AudioClip& clip);

// Mean squared error. Throws kLengthMismatch / kRateMismatch.
double Mse(const AudioClip& estimate, const AudioClip& reference);

// Scale-invariant SDR in dB, capped at kSiSdrCapDb. Returns -inf when the
// estimate has no projection on the reference. Throws kZeroReference.
double SiSdr(const AudioClip& estimate, const AudioClip& reference);

// L2 distance between natural-log mel magnitude spectrograms.
double MelL2(const AudioClip& estimate, const AudioClip& reference,
             const SpectralConfig& cfg = {});
// Same distance when the reference mel spectrogram is already known.
double MelL2(const Matrix& estimate_mel, const Matrix& reference_mel, double log_floor);

// RMS-normalises both clips, then computes all three metrics.
MetricReport Evaluate(const AudioClip& estimate, const AudioClip& reference,
                      const SpectralConfig& cfg = {});

// {"mse":..,"mel_l2":..,"si_sdr_db":..}; -inf is written as the string "-inf".
void WriteMetricReportJson(const MetricReport& report, std::ostream& out);

} // namespace drc

#endif // DRCINV_METRICS_H_
