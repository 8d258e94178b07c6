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

#include "drcinv/inverter.h"

#include <array>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace drc {

std::string_view SolverName(SolverKind kind) {
  return kind == SolverKind::kNewtonRaphson ? "newton" : "hybrid";
}

std::optional<SolverKind> ParseSolverKind(std::string_view name) {
  if (name == "newton") return SolverKind::kNewtonRaphson;
  if (name == "hybrid") return SolverKind::kHybridLeastSquares;
  return std::nullopt;
}

double CharacteristicFunction(double v, double v_prev, double g_prev, double y_abs,
                              const ModelCoefficients& c, double beta, double gamma) {
  const double gain = gamma * c.kappa * std::pow(v, -c.exponent) + (1.0 - gamma) * g_prev;
  const double env = PowP(v, c.p) - (1.0 - beta) * PowP(v_prev, c.p);
  return PowP(gain, c.p) * env - beta * PowP(y_abs, c.p);
}

double CharacteristicFunction(double v, double v_prev, double g_prev, double y_abs,
                              const DrcParams& params, double fs, double beta,
                              double gamma) {
  return CharacteristicFunction(v, v_prev, g_prev, y_abs,
                                ModelCoefficients::From(params, fs), beta, gamma);
}

ResidualEval CharacteristicEval(double v, double v_prev, double g_prev, double y_abs,
                                const ModelCoefficients& c, double beta, double gamma) {
  const double vs = std::pow(v, -c.exponent);
  const double gain = gamma * c.kappa * vs + (1.0 - gamma) * g_prev;
  const double dgain = -c.exponent * gamma * c.kappa * vs / v;
  const double env = PowP(v, c.p) - (1.0 - beta) * PowP(v_prev, c.p);
  const double denv = c.p == 2 ? 2.0 * v : 1.0;
  const double gain_p = PowP(gain, c.p);
  const double dgain_p = c.p == 2 ? 2.0 * gain * dgain : dgain;
  return {gain_p * env - beta * PowP(y_abs, c.p), dgain_p * env + gain_p * denv};
}

namespace {

constexpr double kBoundarySlack = 1e-9;
constexpr double kThresholdOffset = 1e-9;

struct Hypothesis {
  Branch beta_branch;
  Branch gamma_branch;
};

// Fixed preference order used to break exact residual ties.
constexpr std::array<Hypothesis, 4> kHypotheses = {{
    {Branch::kAttack, Branch::kAttack},
    {Branch::kAttack, Branch::kRelease},
    {Branch::kRelease, Branch::kAttack},
    {Branch::kRelease, Branch::kRelease},
}};

struct Candidate {
  double root;
  double x_abs;
  double residual;
  bool strict;
};

// Whether `branch` is the one the forward rule would pick for lhs vs rhs.
// Returns 2 for an exact match, 1 when only within the boundary slack, 0 otherwise.
int BranchAgreement(Branch branch, double lhs, double rhs) {
  const bool attack = lhs > rhs;
  if ((branch == Branch::kAttack) == attack) return 2;
  if (std::abs(lhs - rhs) <= kBoundarySlack * std::max(std::abs(lhs), std::abs(rhs))) {
    return 1;
  }
  return 0;
}

SolveResult Solve(SolverKind kind, double v_prev, double g_prev, double y_abs,
                  const ModelCoefficients& c, double beta, double gamma, double v_init,
                  const SolverOptions& opt) {
  auto fn = [&](double v) {
    return CharacteristicEval(v, v_prev, g_prev, y_abs, c, beta, gamma);
  };
  return kind == SolverKind::kNewtonRaphson ? SolveNewton(fn, v_init, opt)
                                            : SolveHybrid(fn, v_init, opt);
}

} // namespace

InvertStep InvertSample(double y, const CompressorState& state,
                        const ModelCoefficients& c, const InversionOptions& opt) {
  InvertStep out{};
  const double y_abs = std::abs(y);

  if (y == 0.0) {
    const TraceRecord rec = ForwardStep(0.0, state, c);
    out.x = 0.0;
    out.state = {rec.v, rec.g};
    out.diag.regime = Regime::kSilent;
    return out;
  }

  // Pass-through regime: f = 1, so the gain recursion needs no root.
  for (Branch gb : {Branch::kAttack, Branch::kRelease}) {
    if (BranchAgreement(gb, 1.0, state.g_prev) != 2) continue;
    const double g = c.gamma(gb) + (1.0 - c.gamma(gb)) * state.g_prev;
    const double x_abs = y_abs / g;
    const EnvelopeStep env = EnvelopeUpdate(x_abs, state.v_prev, c);
    if (env.v <= c.threshold) {
      out.x = y / g;
      out.state = {env.v, g};
      out.diag.regime = Regime::kBelow;
      out.diag.consistent = 1;
      return out;
    }
  }

  const double v_init = std::max(state.v_prev, c.threshold * (1.0 + kThresholdOffset));
  const double v_prev_p = PowP(state.v_prev, c.p);

  std::array<std::optional<Candidate>, kHypotheses.size()> candidates;
  for (std::size_t h = 0; h < kHypotheses.size(); ++h) {
    const double beta = c.beta(kHypotheses[h].beta_branch);
    const double gamma = c.gamma(kHypotheses[h].gamma_branch);
    const SolveResult r = Solve(opt.solver, state.v_prev, state.g_prev, y_abs, c, beta,
                                gamma, v_init, opt.solver_options);
    out.diag.iterations += r.iterations;
    if (!r.converged() || !(r.v > c.threshold)) continue;

    const double root_p = PowP(r.v, c.p);
    double radicand = (root_p - (1.0 - beta) * v_prev_p) / beta;
    if (radicand < 0.0) {
      if (radicand < -kBoundarySlack * root_p / beta) continue;
      radicand = 0.0;
    }
    const double x_abs = RootP(radicand, c.p);
    const double f = c.kappa * std::pow(r.v, -c.exponent);

    const int beta_ok = BranchAgreement(kHypotheses[h].beta_branch, x_abs, state.v_prev);
    const int gamma_ok = BranchAgreement(kHypotheses[h].gamma_branch, f, state.g_prev);
    if (beta_ok == 0 || gamma_ok == 0) continue;
    candidates[h] = Candidate{r.v, x_abs, std::abs(r.residual),
                              beta_ok == 2 && gamma_ok == 2};
  }

  int strict_count = 0;
  for (const auto& cand : candidates) {
    if (cand && cand->strict) ++strict_count;
  }

  const Candidate* chosen = nullptr;
  for (const auto& cand : candidates) {
    if (!cand) continue;
    // Exactly consistent hypotheses win over ones only within the slack.
    if (strict_count > 0 && !cand->strict) continue;
    if (chosen == nullptr || cand->residual < chosen->residual) chosen = &*cand;
  }

  if (chosen == nullptr) {
    const double x = y / state.g_prev;
    const TraceRecord rec = ForwardStep(std::abs(x), state, c);
    out.x = x;
    out.state = {rec.v, rec.g};
    out.diag.regime = Regime::kDegenerate;
    return out;
  }

  // Re-derive the gain through the forward recursion so the state carried to
  // the next sample is exactly what the compressor would have produced.
  const TraceRecord rec = ForwardStep(chosen->x_abs, state, c);
  out.x = y / rec.g;
  out.state = {rec.v, rec.g};
  out.diag.regime = Regime::kAbove;
  out.diag.root = chosen->root;
  out.diag.residual = chosen->residual;
  out.diag.consistent = strict_count > 0 ? strict_count : 1;
  return out;
}

InvertStep InvertSample(double y, const CompressorState& state,
                        const DrcParams& params, double fs,
                        const InversionOptions& opt) {
  return InvertSample(y, state, ModelCoefficients::From(params, fs), opt);
}

InvertResult Invert(const AudioClip& compressed, const DrcParams& params,
                    const InversionOptions& opt, bool with_trace) {
  ValidateClip(compressed);
  const auto c = ModelCoefficients::From(params, compressed.sample_rate_hz);

  InvertResult result;
  result.output.sample_rate_hz = compressed.sample_rate_hz;
  result.output.samples.resize(compressed.size());
  if (with_trace) {
    result.trace.emplace();
    result.trace->v.reserve(compressed.size());
    result.trace->g.reserve(compressed.size());
    result.trace->samples.reserve(compressed.size());
  }

  InversionDiagnostics& diag = result.diagnostics;
  diag.samples = compressed.size();
  CompressorState state;
  for (std::size_t n = 0; n < compressed.size(); ++n) {
    const InvertStep step = InvertSample(compressed.samples[n], state, c, opt);
    result.output.samples[n] = step.x;
    state = step.state;

    diag.solver_iterations_total += static_cast<std::size_t>(step.diag.iterations);
    if (step.diag.regime == Regime::kDegenerate) ++diag.degenerate_count;
    if (step.diag.consistent > 1) ++diag.branch_ambiguity_count;
    if (step.diag.regime == Regime::kAbove) {
      ++diag.root_count;
      diag.residual_sum += step.diag.residual;
      diag.max_residual = std::max(diag.max_residual, step.diag.residual);
    }
    if (with_trace) {
      result.trace->v.push_back(state.v_prev);
      result.trace->g.push_back(state.g_prev);
      result.trace->samples.push_back(step.diag);
    }
  }
  return result;
}

void WriteDiagnosticsJson(const InversionDiagnostics& diag, std::ostream& out) {
  nlohmann::ordered_json j;
  j["degenerate_count"] = diag.degenerate_count;
  j["max_residual"] = diag.max_residual;
  j["branch_ambiguity_count"] = diag.branch_ambiguity_count;
  j["solver_iterations_total"] = diag.solver_iterations_total;
  j["samples"] = diag.samples;
  out << j.dump(2) << '\n';
}

} // namespace drc
