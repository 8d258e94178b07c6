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

#include "drcinv/metrics.h"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace drc {

namespace {

void CheckPair(const AudioClip& a, const AudioClip& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "clip lengths differ: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  if (a.sample_rate_hz != b.sample_rate_hz) {
    throw Error(ErrorCode::kRateMismatch, "clip sample rates differ");
  }
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

} // namespace

double Rms(const AudioClip& clip) {
  if (clip.empty()) return 0.0;
  return std::sqrt(Dot(clip.samples, clip.samples) / clip.size());
}

AudioClip RmsNormalize(const AudioClip& clip) {
  const double rms = Rms(clip);
  if (!(rms >= 1e-12)) {
    throw Error(ErrorCode::kSilentClip, "cannot RMS-normalise a silent clip");
  }
  AudioClip out = clip;
  for (double& s : out.samples) s /= rms;
  return out;
}

double Mse(const AudioClip& estimate, const AudioClip& reference) {
  CheckPair(estimate, reference);
  if (estimate.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double d = estimate.samples[i] - reference.samples[i];
    acc += d * d;
  }
  return acc / estimate.size();
}

double SiSdr(const AudioClip& estimate, const AudioClip& reference) {
  CheckPair(estimate, reference);
  const double ref_energy = Dot(reference.samples, reference.samples);
  if (!(ref_energy > 0.0)) {
    throw Error(ErrorCode::kZeroReference, "SI-SDR reference is all zeros");
  }
  const double cross = Dot(estimate.samples, reference.samples);
  const double est_energy = Dot(estimate.samples, estimate.samples);
  if (std::abs(cross) <= 1e-15 * std::sqrt(est_energy * ref_energy)) {
    return -std::numeric_limits<double>::infinity();
  }
  const double alpha = cross / ref_energy;
  double target = 0.0;
  double residual = 0.0;
  for (std::size_t i = 0; i < estimate.size(); ++i) {
    const double s = alpha * reference.samples[i];
    const double e = estimate.samples[i] - s;
    target += s * s;
    residual += e * e;
  }
  if (std::sqrt(residual) < 1e-20 * std::sqrt(target)) return kSiSdrCapDb;
  return std::min(kSiSdrCapDb, 10.0 * std::log10(target / residual));
}

double MelL2(const Matrix& estimate_mel, const Matrix& reference_mel, double log_floor) {
  if (estimate_mel.rows() != reference_mel.rows() ||
      estimate_mel.cols() != reference_mel.cols()) {
    throw Error(ErrorCode::kLengthMismatch, "mel spectrogram shapes differ");
  }
  double acc = 0.0;
  const auto& a = estimate_mel.data();
  const auto& b = reference_mel.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::log(std::abs(a[i]) + log_floor) - std::log(std::abs(b[i]) + log_floor);
    acc += d * d;
  }
  return std::sqrt(acc);
}

double MelL2(const AudioClip& estimate, const AudioClip& reference,
             const SpectralConfig& cfg) {
  CheckPair(estimate, reference);
  return MelL2(MelSpectrogram(estimate, cfg), MelSpectrogram(reference, cfg), cfg.log_floor);
}

MetricReport Evaluate(const AudioClip& estimate, const AudioClip& reference,
                      const SpectralConfig& cfg) {
  CheckPair(estimate, reference);
  const AudioClip est = RmsNormalize(estimate);
  const AudioClip ref = RmsNormalize(reference);
  return {Mse(est, ref), MelL2(est, ref, cfg), SiSdr(est, ref)};
}

void WriteMetricReportJson(const MetricReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  j["mse"] = report.mse;
  j["mel_l2"] = report.mel_l2;
  if (std::isinf(report.si_sdr_db) && report.si_sdr_db < 0) {
    j["si_sdr_db"] = "-inf";
  } else {
    j["si_sdr_db"] = report.si_sdr_db;
  }
  out << j.dump(2) << '\n';
}

} // namespace drc
