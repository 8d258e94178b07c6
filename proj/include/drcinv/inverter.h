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

#ifndef DRCINV_INVERTER_H_
#define DRCINV_INVERTER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "drcinv/compressor.h"
#include "drcinv/core.h"
#include "drcinv/solvers.h"

namespace drc {

// Above-threshold residual of the compressed sample for a candidate envelope v:
//
//   (gamma * kappa * v^-S + (1 - gamma) * g_prev)^p * (v^p - (1 - beta) * v_prev^p)
//       - beta * y_abs^p
//
// It vanishes exactly when running the forward model from (v_prev, g_prev)
// with the given branch coefficients lands on envelope v and output |y|.
// Strictly increasing in v for v > 0.
double CharacteristicFunction(double v, double v_prev, double g_prev, double y_abs,
                              const ModelCoefficients& c, double beta, double gamma);
double CharacteristicFunction(double v, double v_prev, double g_prev, double y_abs,
                              const DrcParams& params, double fs, double beta,
                              double gamma);

// Value and analytic derivative with respect to v.
ResidualEval CharacteristicEval(double v, double v_prev, double g_prev, double y_abs,
                                const ModelCoefficients& c, double beta, double gamma);

enum class Regime : std::uint8_t {
  kSilent,     // y == 0
  kBelow,      // pass-through regime, no root finding
  kAbove,      // accepted root of the characteristic function
  kDegenerate, // no consistent hypothesis; fell back to y / g_prev
};

struct SampleDiagnostic {
  Regime regime = Regime::kSilent;
  double root = 0.0;     // accepted envelope root (kAbove only)
  double residual = 0.0; // |xi| at the accepted root
  int iterations = 0;    // summed over all hypotheses tried
  int consistent = 0;    // number of self-consistent hypotheses
};

struct InvertStep {
  double x;
  CompressorState state;
  SampleDiagnostic diag;
};

struct InversionOptions {
  SolverKind solver = SolverKind::kHybridLeastSquares;
  SolverOptions solver_options;
};

// Recovers one input sample from the compressed sample and the state left by
// the previous one. Tries the pass-through regime first, then every
// (envelope, gain) branch pair above threshold.
InvertStep InvertSample(double y, const CompressorState& state,
                        const ModelCoefficients& c, const InversionOptions& opt);
InvertStep InvertSample(double y, const CompressorState& state,
                        const DrcParams& params, double fs,
                        const InversionOptions& opt);

struct InversionDiagnostics {
  std::size_t degenerate_count = 0;
  double max_residual = 0.0;
  std::size_t branch_ambiguity_count = 0;
  std::size_t solver_iterations_total = 0;
  std::size_t samples = 0;
  std::size_t root_count = 0; // samples resolved above threshold
  double residual_sum = 0.0;

  double degenerate_rate() const {
    return samples ? static_cast<double>(degenerate_count) / samples : 0.0;
  }
  double mean_residual() const {
    return root_count ? residual_sum / root_count : 0.0;
  }
};

// Per-sample recovered state, for comparison against a forward trace.
struct InversionTrace {
  std::vector<double> v;
  std::vector<double> g;
  std::vector<SampleDiagnostic> samples;
};

struct InvertResult {
  AudioClip output;
  InversionDiagnostics diagnostics;
  std::optional<InversionTrace> trace;
};

InvertResult Invert(const AudioClip& compressed, const DrcParams& params,
                    const InversionOptions& opt = {}, bool with_trace = false);

// JSON object with degenerate_count, max_residual, branch_ambiguity_count,
// solver_iterations_total and samples.
void WriteDiagnosticsJson(const InversionDiagnostics& diag, std::ostream& out);

} // namespace drc

#endif // DRCINV_INVERTER_H_
