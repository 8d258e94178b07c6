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

#ifndef DRCINV_COMPRESSOR_H_
#define DRCINV_COMPRESSOR_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "drcinv/core.h"

namespace drc {

enum class Branch : std::uint8_t { kAttack, kRelease };

std::string_view BranchName(Branch b);

// One-pole smoothing coefficient 1 - exp(-2.2 / (fs * tau)).
double SmoothingCoefficient(double tau_s, double fs);

// Everything the per-sample recursions need, resolved once per clip.
struct ModelCoefficients {
  double beta_att, beta_rel;   // envelope smoothing
  double gamma_att, gamma_rel; // gain smoothing
  double threshold;            // l
  double exponent;             // S
  double kappa;                // l^S
  int p;

  static ModelCoefficients From(const DrcParams& params, double fs);

  double beta(Branch b) const { return b == Branch::kAttack ? beta_att : beta_rel; }
  double gamma(Branch b) const { return b == Branch::kAttack ? gamma_att : gamma_rel; }
};

inline double PowP(double x, int p) { return p == 2 ? x * x : x; }
inline double RootP(double x, int p) { return p == 2 ? std::sqrt(x) : x; }

struct CompressorState {
  double v_prev = 0.0;
  double g_prev = 1.0;
};

struct EnvelopeStep {
  double v;
  Branch branch;
};

struct GainStep {
  double g;
  Branch branch;
};

// Level detector. Attack when x_abs strictly exceeds the previous envelope.
EnvelopeStep EnvelopeUpdate(double x_abs, double v_prev, const ModelCoefficients& c);
EnvelopeStep EnvelopeUpdate(double x_abs, double v_prev, const DrcParams& params, double fs);

// Static curve: (l/v)^S above threshold, 1 otherwise.
double CompressionFactor(double v, const ModelCoefficients& c);
double CompressionFactor(double v, const DrcParams& params);

// Gain smoother. Attack when f strictly exceeds the previous gain.
GainStep GainUpdate(double f, double g_prev, const ModelCoefficients& c);
GainStep GainUpdate(double f, double g_prev, const DrcParams& params, double fs);

struct TraceRecord {
  double v;
  double f;
  double g;
  Branch beta_branch;
  Branch gamma_branch;
};

using CompressorTrace = std::vector<TraceRecord>;

// Full forward step for one sample: envelope, static curve, gain.
TraceRecord ForwardStep(double x_abs, const CompressorState& state,
                        const ModelCoefficients& c);

struct CompressResult {
  AudioClip output;
  std::optional<CompressorTrace> trace;
};

// y[n] = x[n] * g[n], starting from v[-1] = 0, g[-1] = 1.
CompressResult Compress(const AudioClip& input, const DrcParams& params,
                        bool with_trace = false);

// CSV with header n,v,f,g,beta_branch,gamma_branch.
void WriteTraceCsv(const CompressorTrace& trace, std::ostream& out);

} // namespace drc

#endif // DRCINV_COMPRESSOR_H_
