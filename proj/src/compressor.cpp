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

#include "drcinv/compressor.h"

#include <cstdio>

namespace drc {

std::string_view BranchName(Branch b) {
  return b == Branch::kAttack ? "attack" : "release";
}

double SmoothingCoefficient(double tau_s, double fs) {
  if (!(tau_s > 0.0) || !(fs > 0.0)) {
    throw Error(ErrorCode::kNonPositiveInput,
                "smoothing coefficient needs tau > 0 and fs > 0");
  }
  return -std::expm1(-2.2 / (fs * tau_s));
}

ModelCoefficients ModelCoefficients::From(const DrcParams& params, double fs) {
  const DerivedConstants d = ComputeDerivedConstants(params);
  ModelCoefficients c;
  c.beta_att = SmoothingCoefficient(params.tau_v_att_s, fs);
  c.beta_rel = SmoothingCoefficient(params.tau_v_rel_s, fs);
  c.gamma_att = SmoothingCoefficient(params.tau_g_att_s, fs);
  c.gamma_rel = SmoothingCoefficient(params.tau_g_rel_s, fs);
  c.threshold = d.linear_threshold;
  c.exponent = d.exponent;
  c.kappa = d.kappa;
  c.p = params.p();
  return c;
}

EnvelopeStep EnvelopeUpdate(double x_abs, double v_prev, const ModelCoefficients& c) {
  const Branch branch = x_abs > v_prev ? Branch::kAttack : Branch::kRelease;
  const double beta = c.beta(branch);
  const double vp = beta * PowP(x_abs, c.p) + (1.0 - beta) * PowP(v_prev, c.p);
  return {RootP(vp, c.p), branch};
}

EnvelopeStep EnvelopeUpdate(double x_abs, double v_prev, const DrcParams& params,
                            double fs) {
  return EnvelopeUpdate(x_abs, v_prev, ModelCoefficients::From(params, fs));
}

double CompressionFactor(double v, const ModelCoefficients& c) {
  if (v > c.threshold) return std::pow(c.threshold / v, c.exponent);
  return 1.0;
}

double CompressionFactor(double v, const DrcParams& params) {
  const DerivedConstants d = ComputeDerivedConstants(params);
  if (v > d.linear_threshold) return std::pow(d.linear_threshold / v, d.exponent);
  return 1.0;
}

GainStep GainUpdate(double f, double g_prev, const ModelCoefficients& c) {
  const Branch branch = f > g_prev ? Branch::kAttack : Branch::kRelease;
  const double gamma = c.gamma(branch);
  return {gamma * f + (1.0 - gamma) * g_prev, branch};
}

GainStep GainUpdate(double f, double g_prev, const DrcParams& params, double fs) {
  return GainUpdate(f, g_prev, ModelCoefficients::From(params, fs));
}

TraceRecord ForwardStep(double x_abs, const CompressorState& state,
                        const ModelCoefficients& c) {
  const EnvelopeStep env = EnvelopeUpdate(x_abs, state.v_prev, c);
  const double f = CompressionFactor(env.v, c);
  const GainStep gain = GainUpdate(f, state.g_prev, c);
  return {env.v, f, gain.g, env.branch, gain.branch};
}

CompressResult Compress(const AudioClip& input, const DrcParams& params,
                        bool with_trace) {
  ValidateClip(input);
  const auto c = ModelCoefficients::From(params, input.sample_rate_hz);

  CompressResult result;
  result.output.sample_rate_hz = input.sample_rate_hz;
  result.output.samples.resize(input.size());
  if (with_trace) {
    result.trace.emplace();
    result.trace->reserve(input.size());
  }

  CompressorState state;
  for (std::size_t n = 0; n < input.size(); ++n) {
    const double x = input.samples[n];
    const TraceRecord rec = ForwardStep(std::abs(x), state, c);
    result.output.samples[n] = x * rec.g;
    state = {rec.v, rec.g};
    if (with_trace) result.trace->push_back(rec);
  }
  return result;
}

void WriteTraceCsv(const CompressorTrace& trace, std::ostream& out) {
  out << "n,v,f,g,beta_branch,gamma_branch\n";
  char buf[160];
  for (std::size_t n = 0; n < trace.size(); ++n) {
    const auto& r = trace[n];
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,", n, r.v, r.f, r.g);
    out << buf << BranchName(r.beta_branch) << ',' << BranchName(r.gamma_branch) << '\n';
  }
}

} // namespace drc
