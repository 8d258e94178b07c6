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

#include "drcinv/analysis.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <tuple>

#include <json.hpp>

#include "drcinv/compressor.h"
#include "drcinv/metrics.h"
#include "drcinv/parallel.h"

namespace drc {

std::vector<NamedProfile> CatalogProfiles(const ProfileCatalog& catalog) {
  std::vector<NamedProfile> out;
  for (const CatalogEntry* e : catalog.Profiles()) out.push_back({e->label, *e->params});
  return out;
}

std::string_view ParamLabel(ParamName p) {
  switch (p) {
    case ParamName::kThreshold: return "L";
    case ParamName::kRatio: return "R";
    case ParamName::kTauVAtt: return "tau_v_att";
    case ParamName::kTauVRel: return "tau_v_rel";
    case ParamName::kTauGAtt: return "tau_g_att";
    case ParamName::kTauGRel: return "tau_g_rel";
  }
  return "?";
}

std::vector<double> PerturbationDeltas(int steps, double range_frac) {
  if (steps < 2 || !(range_frac > 0.0) || !(range_frac <= 0.5)) {
    throw Error(ErrorCode::kInvalidConfig, "sweep needs steps >= 2 and 0 < range <= 0.5");
  }
  std::vector<double> deltas(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    deltas[static_cast<std::size_t>(i)] = -range_frac + 2.0 * range_frac * i / (steps - 1);
  }
  // Odd grids hit the centre exactly rather than at rounding distance from it.
  if (steps % 2 == 1) deltas[static_cast<std::size_t>(steps / 2)] = 0.0;
  return deltas;
}

PerturbedParams Perturb(const DrcParams& params, ParamName which, double delta) {
  DrcParams p = params;
  const double scale = 1.0 + delta;
  bool clamped = false;
  switch (which) {
    case ParamName::kThreshold:
      p.threshold_db *= scale;
      if (p.threshold_db > 0.0) {
        p.threshold_db = 0.0;
        clamped = true;
      }
      break;
    case ParamName::kRatio:
      p.ratio *= scale;
      if (p.ratio < 1.0) {
        p.ratio = 1.0;
        clamped = true;
      }
      break;
    case ParamName::kTauVAtt: p.tau_v_att_s *= scale; break;
    case ParamName::kTauVRel: p.tau_v_rel_s *= scale; break;
    case ParamName::kTauGAtt: p.tau_g_att_s *= scale; break;
    case ParamName::kTauGRel: p.tau_g_rel_s *= scale; break;
  }
  return {ValidateParams(p), clamped};
}

namespace {

struct SweepReference {
  AudioClip compressed;
  Matrix mel;                // of the RMS-normalised reference reconstruction
  AudioClip normalized;      // RMS-normalised reference reconstruction
  bool ok = false;
};

} // namespace

SweepResult PerturbationSweep(const std::vector<NamedClip>& clips,
                              const std::vector<NamedProfile>& profiles,
                              const SweepOptions& options) {
  const auto deltas = PerturbationDeltas(options.steps, options.range_frac);
  const std::size_t n_groups = clips.size() * profiles.size();
  const std::size_t per_group = kAllParams.size() * deltas.size();

  std::vector<SweepReference> refs(n_groups);
  ParallelFor(n_groups, options.workers, [&](std::size_t g) {
    const auto& clip = clips[g / profiles.size()].clip;
    const auto& params = profiles[g % profiles.size()].params;
    SweepReference& ref = refs[g];
    try {
      ref.compressed = Compress(clip, params).output;
      ref.normalized = RmsNormalize(Invert(ref.compressed, params, options.inversion).output);
      ref.mel = MelSpectrogram(ref.normalized, options.spectral);
      ref.ok = true;
    } catch (const std::exception&) {
      ref.ok = false;
    }
  });

  SweepResult result;
  result.rows.resize(n_groups * per_group);
  ParallelFor(result.rows.size(), options.workers, [&](std::size_t i) {
    const std::size_t g = i / per_group;
    const std::size_t k = i % per_group;
    const ParamName param = kAllParams[k / deltas.size()];
    const double delta = deltas[k % deltas.size()];
    const NamedProfile& profile = profiles[g % profiles.size()];

    SweepRow& row = result.rows[i];
    row.profile = profile.label;
    row.param = param;
    row.delta = delta;
    row.clip = clips[g / profiles.size()].id;
    row.mse = row.mel_l2 = std::numeric_limits<double>::quiet_NaN();
    row.status = RowStatus::kFailed;

    const SweepReference& ref = refs[g];
    if (!ref.ok) return;
    try {
      const PerturbedParams perturbed = Perturb(profile.params, param, delta);
      const AudioClip estimate =
          RmsNormalize(Invert(ref.compressed, perturbed.params, options.inversion).output);
      row.mse = Mse(estimate, ref.normalized);
      row.mel_l2 = MelL2(MelSpectrogram(estimate, options.spectral), ref.mel,
                         options.spectral.log_floor);
      row.status = perturbed.clamped ? RowStatus::kClamped : RowStatus::kOk;
    } catch (const std::exception&) {
      row.status = RowStatus::kFailed;
    }
  });
  return result;
}

void WriteSweepCsv(const SweepResult& sweep, std::ostream& out) {
  out << "profile,param,delta,clip,mse,mel_l2\n";
  char buf[128];
  for (const auto& row : sweep.rows) {
    std::snprintf(buf, sizeof(buf), ",%.6f,", row.delta);
    out << row.profile << ',' << ParamLabel(row.param) << buf << row.clip;
    std::snprintf(buf, sizeof(buf), ",%.12g,%.12g\n", row.mse, row.mel_l2);
    out << buf;
  }
}

namespace {

double Quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

} // namespace

BoxStats ComputeBoxStats(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "box statistics of an empty list");
  std::sort(values.begin(), values.end());
  BoxStats s{};
  s.median = Quantile(values, 0.5);
  s.q1 = Quantile(values, 0.25);
  s.q3 = Quantile(values, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = s.q1;
  s.whisker_high = s.q3;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      ++s.outlier_count;
      continue;
    }
    s.whisker_low = std::min(s.whisker_low, v);
    s.whisker_high = std::max(s.whisker_high, v);
  }
  return s;
}

std::vector<BoxSummaryRow> SummarizeSweep(const SweepResult& sweep) {
  std::vector<BoxSummaryRow> out;
  for (ParamName p : kAllParams) {
    std::vector<double> mse, mel;
    for (const auto& row : sweep.rows) {
      if (row.param != p || row.status == RowStatus::kFailed) continue;
      mse.push_back(row.mse);
      mel.push_back(row.mel_l2);
    }
    if (mse.empty()) continue;
    out.push_back({p, "mse", ComputeBoxStats(std::move(mse))});
    out.push_back({p, "mel_l2", ComputeBoxStats(std::move(mel))});
  }
  return out;
}

void WriteBoxSummaryCsv(const std::vector<BoxSummaryRow>& rows, std::ostream& out) {
  out << "param,metric,median,q1,q3,wlow,whigh,outliers\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), ",%.12g,%.12g,%.12g,%.12g,%.12g,%zu\n", r.stats.median,
                  r.stats.q1, r.stats.q3, r.stats.whisker_low, r.stats.whisker_high,
                  r.stats.outlier_count);
    out << ParamLabel(r.param) << ',' << r.metric << buf;
  }
}

std::array<SolverReport, 2> SolverBenchmark(const std::vector<NamedClip>& clips,
                                            const std::vector<NamedProfile>& profiles,
                                            const BenchmarkOptions& options) {
  if (clips.empty() || profiles.empty()) {
    throw Error(ErrorCode::kEmptyInput, "solver benchmark needs clips and profiles");
  }
  const std::size_t n_cells = clips.size() * profiles.size();
  std::vector<AudioClip> compressed(n_cells);
  std::vector<AudioClip> references(n_cells);
  ParallelFor(n_cells, options.workers, [&](std::size_t i) {
    const auto& clip = clips[i / profiles.size()].clip;
    compressed[i] = Compress(clip, profiles[i % profiles.size()].params).output;
    references[i] = RmsNormalize(clip);
  });

  std::array<SolverReport, 2> reports;
  const std::array<SolverKind, 2> kinds = {SolverKind::kNewtonRaphson,
                                           SolverKind::kHybridLeastSquares};
  for (std::size_t s = 0; s < kinds.size(); ++s) {
    InversionOptions inv;
    inv.solver = kinds[s];
    inv.solver_options = options.solver_options;

    std::vector<InversionDiagnostics> diags(n_cells);
    std::vector<double> mse(n_cells);
    const auto start = std::chrono::steady_clock::now();
    ParallelFor(n_cells, options.workers, [&](std::size_t i) {
      InvertResult r = Invert(compressed[i], profiles[i % profiles.size()].params, inv);
      diags[i] = r.diagnostics;
      mse[i] = Mse(RmsNormalize(r.output), references[i]);
    });
    const auto stop = std::chrono::steady_clock::now();

    SolverReport& rep = reports[s];
    rep.solver = kinds[s];
    rep.total_wall_time_s = std::chrono::duration<double>(stop - start).count();
    rep.clips = n_cells;
    std::size_t degenerate = 0, samples = 0, roots = 0;
    double residual_sum = 0.0, mse_sum = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i) {
      degenerate += diags[i].degenerate_count;
      samples += diags[i].samples;
      roots += diags[i].root_count;
      residual_sum += diags[i].residual_sum;
      mse_sum += mse[i];
    }
    rep.mean_mse = mse_sum / static_cast<double>(n_cells);
    rep.mean_residual = roots ? residual_sum / static_cast<double>(roots) : 0.0;
    rep.degenerate_rate = samples ? static_cast<double>(degenerate) / samples : 0.0;
    rep.cell_mse = std::move(mse);
  }
  return reports;
}

void WriteSolverReportJson(const std::array<SolverReport, 2>& reports, std::ostream& out) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["solver"] = std::string(SolverName(r.solver));
    j["total_wall_time_s"] = r.total_wall_time_s;
    j["mean_mse"] = r.mean_mse;
    j["mean_residual"] = r.mean_residual;
    j["degenerate_rate"] = r.degenerate_rate;
    j["clips"] = r.clips;
    arr.push_back(j);
  }
  nlohmann::ordered_json doc;
  doc["solvers"] = arr;
  if (reports[1].total_wall_time_s > 0.0) {
    doc["wall_time_ratio_newton_over_hybrid"] =
        reports[0].total_wall_time_s / reports[1].total_wall_time_s;
  }
  out << doc.dump(2) << '\n';
}

IdentificationReport IdentifyProfile(const AudioClip& y, const ProfileCatalog& catalog,
                                     const InversionOptions& options, unsigned workers) {
  const auto profiles = CatalogProfiles(catalog);
  if (profiles.empty()) {
    throw Error(ErrorCode::kEmptyCatalog, "catalog holds no compression profiles");
  }

  std::vector<InversionDiagnostics> diags(profiles.size());
  std::vector<double> leave_passthrough(profiles.size(), 0.0);
  ParallelFor(profiles.size(), workers, [&](std::size_t i) {
    InvertResult r = Invert(y, profiles[i].params, options, /*with_trace=*/true);
    diags[i] = r.diagnostics;
    std::size_t left = 0;
    for (const auto& s : r.trace->samples) {
      if (s.regime == Regime::kAbove || s.regime == Regime::kDegenerate) ++left;
    }
    leave_passthrough[i] = y.empty() ? 0.0 : static_cast<double>(left) / y.size();
  });

  std::size_t permissive = 0;
  for (std::size_t i = 1; i < profiles.size(); ++i) {
    if (profiles[i].params.threshold_db > profiles[permissive].params.threshold_db) {
      permissive = i;
    }
  }

  IdentificationReport report;
  for (const auto& entry : catalog.entries()) {
    if (entry.is_neutral()) {
      report.ranking.push_back({entry.label, leave_passthrough[permissive], 0.0, 0.0});
    }
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    report.ranking.push_back({profiles[i].label, diags[i].degenerate_rate(),
                              diags[i].max_residual, diags[i].mean_residual()});
  }
  const auto key = [](const IdentificationEntry& e) {
    return std::make_tuple(e.degenerate_rate, e.mean_residual);
  };
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  report.indeterminate =
      report.ranking.size() > 1 && key(report.ranking[0]) == key(report.ranking[1]);
  return report;
}

void WriteIdentificationJson(const IdentificationReport& report, std::ostream& out) {
  nlohmann::ordered_json ranking = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.ranking.size(); ++i) {
    const auto& e = report.ranking[i];
    nlohmann::ordered_json j;
    j["rank"] = i + 1;
    j["label"] = e.label;
    j["degenerate_rate"] = e.degenerate_rate;
    j["max_residual"] = e.max_residual;
    j["mean_residual"] = e.mean_residual;
    ranking.push_back(j);
  }
  nlohmann::ordered_json doc;
  doc["ranking"] = ranking;
  doc["indeterminate"] = report.indeterminate;
  out << doc.dump(2) << '\n';
}

} // namespace drc
