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

#ifndef DRCINV_SOLVERS_H_
#define DRCINV_SOLVERS_H_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>

namespace drc {

// Scalar root finders for strictly positive unknowns. Both take a callable
// returning ResidualEval (value and analytic derivative) at a point v > 0.

enum class SolverKind { kNewtonRaphson, kHybridLeastSquares };

std::string_view SolverName(SolverKind kind);
// Accepts "newton" and "hybrid".
std::optional<SolverKind> ParseSolverKind(std::string_view name);

struct ResidualEval {
  double value;
  double derivative;
};

struct SolverOptions {
  double tol = 1e-12;       // on |f(v)|
  int max_iter = 100;
  double v_floor = 1e-12;   // iterates never go below this
  double step_rtol = 1e-12; // Newton correction must also be this small relative to v
};

enum class SolveStatus { kConverged, kNoConvergence };

struct SolveResult {
  double v;
  int iterations;
  double residual; // f(v), signed
  SolveStatus status;

  bool converged() const { return status == SolveStatus::kConverged; }
};

namespace internal {

inline bool Accepted(const ResidualEval& e, double v, const SolverOptions& opt) {
  if (!(std::abs(e.value) <= opt.tol)) return false;
  if (e.value == 0.0) return true;
  if (e.derivative == 0.0) return false;
  return std::abs(e.value / e.derivative) <= opt.step_rtol * v;
}

struct Best {
  double v;
  double residual;

  void Offer(double cand_v, double cand_r) {
    if (std::abs(cand_r) < std::abs(residual)) {
      v = cand_v;
      residual = cand_r;
    }
  }
};

} // namespace internal

// Plain Newton-Raphson with iterates clamped at v_floor. On failure the
// result carries the best point seen.
template <class F>
SolveResult SolveNewton(F&& f, double v_init, const SolverOptions& opt = {}) {
  double v = std::max(v_init, opt.v_floor);
  ResidualEval e = f(v);
  internal::Best best{v, e.value};

  for (int it = 0; it < opt.max_iter; ++it) {
    if (!std::isfinite(e.value) || !std::isfinite(e.derivative)) break;
    if (internal::Accepted(e, v, opt)) {
      return {v, it, e.value, SolveStatus::kConverged};
    }
    if (std::abs(e.derivative) < 1e-300) break;

    double next = v - e.value / e.derivative;
    if (!(next > opt.v_floor)) {
      if (v == opt.v_floor) break; // pinned at the clamp
      next = opt.v_floor;
    }
    v = next;
    e = f(v);
    best.Offer(v, e.value);
  }
  if (std::isfinite(e.value) && internal::Accepted(e, v, opt)) {
    return {v, opt.max_iter, e.value, SolveStatus::kConverged};
  }
  return {best.v, opt.max_iter, best.residual, SolveStatus::kNoConvergence};
}

// Trust-region (dogleg) minimisation of f(v)^2 / 2. In one dimension the
// Newton step and the steepest-descent step share a direction, so the dogleg
// step is the Newton step truncated to the trust radius. The radius expands
// or contracts with the ratio of actual to predicted reduction, and a step
// never shrinks v by more than a factor of ten.
template <class F>
SolveResult SolveHybrid(F&& f, double v_init, const SolverOptions& opt = {}) {
  constexpr double kInitialRadiusFactor = 100.0;
  constexpr double kMaxShrink = 0.1;

  double v = std::max(v_init, opt.v_floor);
  ResidualEval e = f(v);
  internal::Best best{v, e.value};
  double radius = kInitialRadiusFactor * v;
  int it = 0;

  for (; it < opt.max_iter; ++it) {
    if (!std::isfinite(e.value) || !std::isfinite(e.derivative)) break;
    if (internal::Accepted(e, v, opt)) {
      return {v, it, e.value, SolveStatus::kConverged};
    }
    if (std::abs(e.derivative) < 1e-300) break;

    const double newton = -e.value / e.derivative;
    double step = std::abs(newton) <= radius ? newton : std::copysign(radius, newton);
    const double lower = std::max(opt.v_floor, kMaxShrink * v);
    const double trial = std::max(v + step, lower);
    step = trial - v;
    if (step == 0.0) break;

    const ResidualEval et = f(trial);
    const double f0 = e.value * e.value;
    const double linear = e.value + e.derivative * step;
    const double predicted = f0 - linear * linear;
    const double actual = std::isfinite(et.value) ? f0 - et.value * et.value : -1.0;
    const double rho = predicted > 0.0 ? actual / predicted : (actual > 0.0 ? 1.0 : -1.0);

    if (rho < 0.1) {
      radius = 0.5 * std::abs(step);
    } else if (rho >= 0.5) {
      radius = std::max(radius, 2.0 * std::abs(step));
    }

    if (actual > 0.0 && rho >= 1e-4) {
      v = trial;
      e = et;
      best.Offer(v, e.value);
    } else if (radius <= 1e-15 * v) {
      break;
    }
  }
  if (std::isfinite(e.value) && internal::Accepted(e, v, opt)) {
    return {v, it, e.value, SolveStatus::kConverged};
  }
  return {best.v, it, best.residual, SolveStatus::kNoConvergence};
}

} // namespace drc

#endif // DRCINV_SOLVERS_H_
