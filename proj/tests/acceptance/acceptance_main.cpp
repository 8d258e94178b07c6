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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "drcinv/analysis.h"
#include "drcinv/compressor.h"
#include "drcinv/corpus.h"
#include "drcinv/inverter.h"
#include "drcinv/metrics.h"
#include "drcinv/parallel.h"
#include "drcinv/wav.h"
#include "support/oracles.h"
#include "support/signals.h"

namespace {

using namespace drc;
namespace t = drc::testing;
namespace fs = std::filesystem;

// Pinned tolerances.
constexpr double kRoundTripMse = 1e-5;
constexpr double kRootAgreement = 1e-8;
constexpr double kTraceResidual = 1e-9;
constexpr double kSiSdrTol = 1e-6;
constexpr double kEvaluateRelTol = 1e-9;
constexpr double kSnrTolDb = 0.5;
constexpr double kSensitivityFactor = 10.0;

constexpr std::size_t kCorpusClips = 20;
constexpr double kClipSecs = 1.0;
constexpr double kFs = 44100.0;

int g_failures = 0;

void Report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string Fmt(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

struct Cell {
  AudioClip compressed;
  CompressorTrace trace;
  AudioClip reference; // RMS-normalised original
  double mse[2] = {0, 0};
  InversionTrace inv[2];
  double wall[2] = {0, 0};
};

struct Corpus {
  std::vector<NamedClip> clips;
  std::vector<NamedProfile> profiles;
  std::vector<Cell> cells; // clip-major
};

Corpus BuildRoundTrips(unsigned workers) {
  Corpus c;
  c.clips = t::MusicCorpus(kCorpusClips, kClipSecs);
  c.profiles = CatalogProfiles(BuiltinCatalog("small"));
  c.cells.resize(c.clips.size() * c.profiles.size());
  const SolverKind kinds[2] = {SolverKind::kNewtonRaphson, SolverKind::kHybridLeastSquares};
  ParallelFor(c.cells.size(), workers, [&](std::size_t i) {
    Cell& cell = c.cells[i];
    const AudioClip& x = c.clips[i / c.profiles.size()].clip;
    const DrcParams& q = c.profiles[i % c.profiles.size()].params;
    auto fwd = Compress(x, q, true);
    cell.compressed = std::move(fwd.output);
    cell.trace = std::move(*fwd.trace);
    cell.reference = RmsNormalize(x);
    for (int s = 0; s < 2; ++s) {
      InversionOptions opt;
      opt.solver = kinds[s];
      const auto start = std::chrono::steady_clock::now();
      auto r = Invert(cell.compressed, q, opt, true);
      cell.wall[s] = Seconds(start);
      cell.mse[s] = Mse(RmsNormalize(r.output), cell.reference);
      cell.inv[s] = std::move(*r.trace);
    }
  });
  return c;
}

void Criterion1(const Corpus& c) {
  double sum = 0.0, worst = 0.0;
  for (const auto& cell : c.cells) {
    sum += cell.mse[1];
    worst = std::max(worst, cell.mse[1]);
  }
  const double mean = sum / static_cast<double>(c.cells.size());
  Report(1, "round-trip fidelity", mean <= kRoundTripMse,
         Fmt("hybrid mean_mse=%.3e (max cell %.3e) over %zu clip x profile cells, bound %.0e",
             mean, worst, c.cells.size(), kRoundTripMse));
}

void Criterion2(const Corpus& c) {
  double sum[2] = {0, 0}, wall[2] = {0, 0};
  double max_dev = 0.0;
  std::size_t compared = 0;
  for (const auto& cell : c.cells) {
    for (int s = 0; s < 2; ++s) {
      sum[s] += cell.mse[s];
      wall[s] += cell.wall[s];
    }
    for (std::size_t n = 0; n < cell.inv[0].samples.size(); ++n) {
      const auto& a = cell.inv[0].samples[n];
      const auto& b = cell.inv[1].samples[n];
      if (a.regime != Regime::kAbove || b.regime != Regime::kAbove) continue;
      max_dev = std::max(max_dev, std::abs(a.root - b.root) / std::max(1.0, a.root));
      ++compared;
    }
  }
  const double n = static_cast<double>(c.cells.size());
  const double newton = sum[0] / n, hybrid = sum[1] / n;
  const bool pass = hybrid <= newton && max_dev <= kRootAgreement && compared > 0;
  Report(2, "solver comparison", pass,
         Fmt("mean_mse hybrid=%.6e newton=%.6e; max root deviation %.3e over %zu samples "
             "(bound %.0e); wall newton/hybrid=%.3f (%.2fs / %.2fs, not asserted)",
             hybrid, newton, max_dev, compared, kRootAgreement, wall[0] / wall[1], wall[0],
             wall[1]));
}

void Criterion3(const Corpus& c) {
  double worst_lib = 0.0, worst_oracle = 0.0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    const Cell& cell = c.cells[i];
    const DrcParams& q = c.profiles[i % c.profiles.size()].params;
    const auto coef = ModelCoefficients::From(q, kFs);
    const double l = q.linear_threshold();
    for (std::size_t n = 0; n < cell.trace.size(); ++n) {
      const TraceRecord& r = cell.trace[n];
      if (!(r.v > l)) continue;
      const double v_prev = n ? cell.trace[n - 1].v : 0.0;
      const double g_prev = n ? cell.trace[n - 1].g : 1.0;
      const double y_abs = std::abs(cell.compressed.samples[n]);
      const double lib = CharacteristicFunction(r.v, v_prev, g_prev, y_abs, coef,
                                                coef.beta(r.beta_branch), coef.gamma(r.gamma_branch));
      const double orc = t::OracleResidual(q, kFs, r, v_prev, g_prev, y_abs);
      worst_lib = std::max(worst_lib, std::abs(lib));
      worst_oracle = std::max(worst_oracle, std::abs(orc));
      ++checked;
    }
  }
  Report(3, "characteristic-function oracle",
         checked > 0 && worst_lib < kTraceResidual && worst_oracle < kTraceResidual,
         Fmt("max |xi| library=%.3e independent=%.3e over %zu above-threshold samples, bound %.0e",
             worst_lib, worst_oracle, checked, kTraceResidual));
}

void Criterion4(const Corpus& c, unsigned workers) {
  const auto start = std::chrono::steady_clock::now();
  SweepOptions opt;
  opt.steps = 10;
  opt.range_frac = 0.5;
  opt.workers = workers;
  const auto sweep = PerturbationSweep(c.clips, c.profiles, opt);
  std::size_t failed = 0;
  for (const auto& row : sweep.rows) failed += row.status == RowStatus::kFailed;

  std::map<ParamName, double> mse, mel;
  for (const auto& s : SummarizeSweep(sweep)) {
    (s.metric == "mse" ? mse : mel)[s.param] = s.stats.median;
  }
  const ParamName timing[] = {ParamName::kTauVAtt, ParamName::kTauVRel, ParamName::kTauGAtt,
                              ParamName::kTauGRel};
  bool pass = mse.size() == 6 && failed == 0;
  double max_timing = 0.0;
  if (pass) {
    pass = mse[ParamName::kThreshold] > mse[ParamName::kRatio];
    for (ParamName p : timing) {
      max_timing = std::max(max_timing, mse[p]);
      pass = pass && mse[ParamName::kRatio] > mse[p];
      pass = pass && mse[ParamName::kThreshold] >= kSensitivityFactor * mse[p];
    }
  }
  std::string detail = Fmt("%zu rows (%zu failed); median mse", sweep.rows.size(), failed);
  for (ParamName p : kAllParams) {
    detail += Fmt(" %s=%.3e", std::string(ParamLabel(p)).c_str(), mse[p]);
  }
  detail += "; median mel_l2";
  for (ParamName p : kAllParams) {
    detail += Fmt(" %s=%.3f", std::string(ParamLabel(p)).c_str(), mel[p]);
  }
  detail += Fmt("; L / max timing = %.1f (need >= %.0f); %.1fs",
                max_timing > 0 ? mse[ParamName::kThreshold] / max_timing
                               : std::numeric_limits<double>::infinity(),
                kSensitivityFactor, Seconds(start));
  Report(4, "sensitivity ordering", pass, detail);
}

void Criterion5() {
  const AudioClip x = t::MusicLike(4242, 1.0);
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char* what) {
    if (!ok) failed.push_back(what);
  };

  check(Mse(x, x) == 0.0, "mse(x,x)=0");

  AudioClip noisy = x;
  AudioClip e = t::WhiteNoise(17, 1.0, kClipSecs);
  auto dot = [](const AudioClip& a, const AudioClip& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.samples[i] * b.samples[i];
    return acc;
  };
  const double proj = dot(e, x) / dot(x, x);
  for (std::size_t i = 0; i < e.size(); ++i) e.samples[i] -= proj * x.samples[i];
  const double scale = std::sqrt(dot(x, x) / 10.0 / dot(e, e));
  for (std::size_t i = 0; i < e.size(); ++i) noisy.samples[i] += scale * e.samples[i];

  const double base = SiSdr(noisy, x);
  double worst_scale = 0.0;
  for (double k : {1e-3, 0.25, 4.0, 1e3}) {
    AudioClip s = noisy;
    for (double& v : s.samples) v *= k;
    worst_scale = std::max(worst_scale, std::abs(SiSdr(s, x) - base));
  }
  check(worst_scale <= kSiSdrTol, "si_sdr scale invariance");
  check(std::abs(base - 10.0) <= kSiSdrTol, "si_sdr orthogonal noise = 10 dB");
  check(MelL2(x, x) == 0.0, "mel_l2(x,x)=0");

  const auto ref = Evaluate(noisy, x);
  AudioClip a = noisy, b = x;
  for (double& v : a.samples) v *= 3.3;
  for (double& v : b.samples) v *= 0.07;
  const auto scaled = Evaluate(a, b);
  auto rel = [](double u, double v) { return std::abs(u - v) / std::max(std::abs(v), 1e-300); };
  const double worst_eval =
      std::max({rel(scaled.mse, ref.mse), rel(scaled.mel_l2, ref.mel_l2), rel(scaled.si_sdr_db, ref.si_sdr_db)});
  check(worst_eval <= kEvaluateRelTol, "evaluate rescaling invariance");

  std::string detail = Fmt("si_sdr=%.9f dB, scale drift %.2e dB, evaluate rel drift %.2e",
                           base, worst_scale, worst_eval);
  for (const auto& f : failed) detail += "; failed: " + f;
  Report(5, "metric identities", failed.empty(), detail);
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void Criterion6(unsigned workers) {
  const fs::path root = fs::temp_directory_path() / "drcinv_acceptance_dataset";
  fs::remove_all(root);
  std::vector<std::string> failed;

  // One retained chunk per catalog.
  fs::create_directories(root / "one");
  WriteAudio(t::MusicLike(1, 5.0), root / "one" / "song.wav");
  DatasetOptions opt;
  opt.workers = workers;
  std::size_t counts[2] = {0, 0};
  const char* names[2] = {"small", "large"};
  for (int k = 0; k < 2; ++k) {
    const auto r = BuildDataset(root / "one", BuiltinCatalog(names[k]), root / names[k], opt);
    counts[k] = r.manifest.size();
  }
  if (counts[0] != 6) failed.push_back("small catalog outputs");
  if (counts[1] != 31) failed.push_back("large catalog outputs");

  // Gate boundary at -30 dBFS.
  const auto quiet = ChunkAndGate(t::Constant(std::pow(10.0, -31.0 / 20.0), 5.0), 5.0, -30.0);
  const auto loud = ChunkAndGate(t::Constant(std::pow(10.0, -29.0 / 20.0), 5.0), 5.0, -30.0);
  if (!quiet.empty()) failed.push_back("-31 dBFS chunk kept");
  if (loud.size() != 1) failed.push_back("-29 dBFS chunk dropped");

  // Byte-identical manifests and outputs across re-runs.
  fs::create_directories(root / "multi" / "sub");
  WriteAudio(t::MusicLike(2, 11.0), root / "multi" / "b.wav");
  WriteAudio(t::MusicLike(3, 6.0), root / "multi" / "sub" / "a.wav");
  WriteAudio(t::Constant(std::pow(10.0, -31.0 / 20.0), 5.0), root / "multi" / "quiet.wav");
  std::string manifests[2];
  std::vector<std::string> outputs[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path out = root / ("rerun" + std::to_string(run));
    const auto r = BuildDataset(root / "multi", BuiltinCatalog("small"), out, opt);
    std::ostringstream m;
    WriteManifestCsv(r.manifest, m);
    // Compare paths relative to the run's output directory.
    std::string text = m.str();
    const std::string prefix = out.string();
    for (std::size_t pos; (pos = text.find(prefix)) != std::string::npos;) text.replace(pos, prefix.size(), "OUT");
    manifests[run] = text;
    for (const auto& e : r.manifest) outputs[run].push_back(Slurp(e.output_path));
  }
  const std::size_t rows = outputs[0].size();
  if (manifests[0] != manifests[1] || outputs[0] != outputs[1]) failed.push_back("re-run differs");
  if (rows != 6 * 3) failed.push_back("unexpected retained chunk count");

  std::string detail = Fmt("outputs small=%zu large=%zu; gate -31 kept %zu, -29 kept %zu; "
                           "re-run manifest %zu rows identical=%s",
                           counts[0], counts[1], quiet.size(), loud.size(), rows,
                           manifests[0] == manifests[1] ? "yes" : "no");
  for (const auto& f : failed) detail += "; failed: " + f;
  Report(6, "dataset pipeline", failed.empty(), detail);
  fs::remove_all(root);
}

void Criterion7() {
  const AudioClip x = RmsNormalize(t::Sine(440.0, 1.0, 5.0));
  const AudioClip y = InjectNoiseAtSnr(x, 20.0, 20240101);
  double ps = 0.0, pn = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ps += x.samples[i] * x.samples[i];
    pn += (y.samples[i] - x.samples[i]) * (y.samples[i] - x.samples[i]);
  }
  const double snr = 10.0 * std::log10(ps / pn);
  const SnrSchedule sched;
  const double e0 = SnrAtEpoch(sched, 0), e20 = SnrAtEpoch(sched, 20),
               e10k = SnrAtEpoch(sched, 10000);
  const bool pass = std::abs(snr - 20.0) <= kSnrTolDb && e0 == 65.0 && e20 == 60.0 && e10k == 20.0;
  Report(7, "augmentation", pass,
         Fmt("measured SNR %.4f dB for 20 dB request (+-%.1f); schedule 0/20/10000 -> %g/%g/%g",
             snr, kSnrTolDb, e0, e20, e10k));
}

void Criterion8(const Corpus& c, unsigned workers) {
  const ProfileCatalog cat = BuiltinCatalog("small");
  const double tol = SolverOptions{}.tol;
  std::vector<IdentificationReport> reports(c.cells.size());
  ParallelFor(c.cells.size(), workers, [&](std::size_t i) {
    reports[i] = IdentifyProfile(c.cells[i].compressed, cat);
  });
  std::size_t consistent = 0, rank1 = 0, indeterminate = 0;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    const std::string& truth = c.profiles[i % c.profiles.size()].label;
    for (const auto& e : reports[i].ranking) {
      if (e.label == truth && e.degenerate_rate == 0.0 && e.max_residual <= tol) ++consistent;
    }
    if (!reports[i].ranking.empty() && reports[i].ranking[0].label == truth) ++rank1;
    indeterminate += reports[i].indeterminate;
  }
  const double n = static_cast<double>(c.cells.size());
  Report(8, "identification diagnostics", consistent == c.cells.size(),
         Fmt("true profile consistent (degenerate_rate=0, max_residual<=%.0e) on %zu/%zu clips; "
             "rank-1 accuracy %.1f%% (reported only), indeterminate %zu",
             tol, consistent, c.cells.size(), 100.0 * rank1 / n, indeterminate));
}

} // namespace

int main() {
  const unsigned workers = WorkerCount();
  const auto start = std::chrono::steady_clock::now();

  const Corpus corpus = BuildRoundTrips(workers);
  Criterion1(corpus);
  Criterion2(corpus);
  Criterion3(corpus);
  Criterion4(corpus, workers);
  Criterion5();
  Criterion6(workers);
  Criterion7();
  Criterion8(corpus, workers);

  std::printf("%d of 8 criteria failed; total %.1fs with %u worker(s)\n", g_failures,
              Seconds(start), workers);
  return g_failures == 0 ? 0 : 1;
}
