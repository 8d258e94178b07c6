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

#ifndef DRCINV_ANALYSIS_H_
#define DRCINV_ANALYSIS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "drcinv/core.h"
#include "drcinv/inverter.h"
#include "drcinv/spectral.h"

namespace drc {

struct NamedClip {
  std::string id;
  AudioClip clip;
};

struct NamedProfile {
  std::string label;
  DrcParams params;
};

// Non-neutral entries of a catalog, in order.
std::vector<NamedProfile> CatalogProfiles(const ProfileCatalog& catalog);

// ---------------------------------------------------------------------------
// Parameter sensitivity sweep

enum class ParamName { kThreshold, kRatio, kTauVAtt, kTauVRel, kTauGAtt, kTauGRel };

inline constexpr std::array<ParamName, 6> kAllParams = {
    ParamName::kThreshold, ParamName::kRatio,   ParamName::kTauVAtt,
    ParamName::kTauVRel,   ParamName::kTauGAtt, ParamName::kTauGRel};

// "L", "R", "tau_v_att", "tau_v_rel", "tau_g_att", "tau_g_rel"
std::string_view ParamLabel(ParamName p);

// `steps` equally spaced relative offsets on [-range_frac, +range_frac],
// endpoints included.
std::vector<double> PerturbationDeltas(int steps, double range_frac);

struct PerturbedParams {
  DrcParams params;
  bool clamped; // ratio floored at 1 or threshold capped at 0 dBFS
};

// Scales one parameter by (1 + delta).
PerturbedParams Perturb(const DrcParams& params, ParamName which, double delta);

enum class RowStatus { kOk, kClamped, kFailed };

struct SweepRow {
  std::string profile;
  ParamName param;
  double delta;
  std::string clip;
  double mse;
  double mel_l2;
  RowStatus status;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

struct SweepOptions {
  int steps = 10;
  double range_frac = 0.5;
  SpectralConfig spectral;
  InversionOptions inversion;
  unsigned workers = 1;
};

// For every clip x profile: compress with the true parameters, reconstruct
// with the true parameters (the reference), then reconstruct once per
// (parameter, delta) with that single parameter perturbed. Errors are the
// RMS-normalised MSE and log-mel L2 against the reference reconstruction.
SweepResult PerturbationSweep(const std::vector<NamedClip>& clips,
                              const std::vector<NamedProfile>& profiles,
                              const SweepOptions& options = {});

// header: profile,param,delta,clip,mse,mel_l2 (failed rows carry nan)
void WriteSweepCsv(const SweepResult& sweep, std::ostream& out);

// ---------------------------------------------------------------------------
// Box-plot statistics

struct BoxStats {
  double median;
  double q1;
  double q3;
  double whisker_low;
  double whisker_high;
  std::size_t outlier_count;
};

// Linear-interpolation quartiles; whiskers at the most extreme data within
// 1.5 IQR of the quartiles. Throws kEmptyInput.
BoxStats ComputeBoxStats(std::vector<double> values);

struct BoxSummaryRow {
  ParamName param;
  std::string metric; // "mse" or "mel_l2"
  BoxStats stats;
};

// One row per (parameter, metric) over all successful sweep rows.
std::vector<BoxSummaryRow> SummarizeSweep(const SweepResult& sweep);

// header: param,metric,median,q1,q3,wlow,whigh,outliers
void WriteBoxSummaryCsv(const std::vector<BoxSummaryRow>& rows, std::ostream& out);

// ---------------------------------------------------------------------------
// Solver benchmark

struct SolverReport {
  SolverKind solver;
  double total_wall_time_s = 0.0;
  double mean_mse = 0.0;      // RMS-normalised, averaged over clip x profile
  double mean_residual = 0.0; // over all accepted roots
  double degenerate_rate = 0.0;
  std::size_t clips = 0;      // clip x profile cells
  std::vector<double> cell_mse;
};

struct BenchmarkOptions {
  SolverOptions solver_options;
  unsigned workers = 1;
};

// Compresses every clip with every profile, then times the inversion with
// each solver (one solver at a time). Returns {newton, hybrid}.
std::array<SolverReport, 2> SolverBenchmark(const std::vector<NamedClip>& clips,
                                            const std::vector<NamedProfile>& profiles,
                                            const BenchmarkOptions& options = {});

void WriteSolverReportJson(const std::array<SolverReport, 2>& reports, std::ostream& out);

// ---------------------------------------------------------------------------
// Inversion-consistency profile ranking

struct IdentificationEntry {
  std::string label;
  double degenerate_rate;
  double max_residual;
  double mean_residual;
};

struct IdentificationReport {
  std::vector<IdentificationEntry> ranking; // rank 1 first
  bool indeterminate = false; // best key shared by more than one label
};

// Inverts y under every profile and ranks labels by (degenerate_rate,
// mean_residual). The neutral label is scored by the fraction of samples that
// leave the pass-through regime under the highest-threshold profile.
// Throws kEmptyCatalog when the catalog has no profiles.
IdentificationReport IdentifyProfile(const AudioClip& y, const ProfileCatalog& catalog,
                                     const InversionOptions& options = {},
                                     unsigned workers = 1);

void WriteIdentificationJson(const IdentificationReport& report, std::ostream& out);

} // namespace drc

#endif // DRCINV_ANALYSIS_H_
