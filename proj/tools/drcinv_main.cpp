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

// drcinv: compress, invert and evaluate dynamic range compression.
//
// Exit codes: 0 success, 1 usage error, 2 processing error.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drcinv/analysis.h"
#include "drcinv/compressor.h"
#include "drcinv/core.h"
#include "drcinv/corpus.h"
#include "drcinv/inverter.h"
#include "drcinv/metrics.h"
#include "drcinv/parallel.h"
#include "drcinv/wav.h"

namespace {

using namespace drc;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::uint64_t seed = 0;
  std::string solver = "hybrid";
  double tol = 1e-12;
};

InversionOptions MakeInversionOptions(const GlobalFlags& g) {
  InversionOptions opt;
  const auto kind = ParseSolverKind(g.solver);
  if (!kind) throw UsageError("--solver: expected newton or hybrid, got '" + g.solver + "'");
  if (!(g.tol > 0.0)) throw UsageError("--tol: must be positive");
  opt.solver = *kind;
  opt.solver_options.tol = g.tol;
  return opt;
}

// --profile looks in the small catalog, then the large one. With --params the
// label selects an entry of that file, or the file must hold a single profile.
DrcParams ResolveProfile(const std::string& label, const std::string& params_file) {
  if (!params_file.empty()) {
    ProfileCatalog cat;
    try {
      cat = LoadCatalogFile(params_file);
    } catch (const Error& e) {
      throw UsageError(std::string("--params: ") + e.what());
    }
    const auto profiles = cat.Profiles();
    if (label.empty()) {
      if (profiles.size() != 1) {
        throw UsageError("--params: file holds " + std::to_string(profiles.size()) +
                         " profiles; select one with --profile");
      }
      return *profiles[0]->params;
    }
    const CatalogEntry* e = cat.Find(label);
    if (!e || e->is_neutral()) throw UsageError("--profile: unknown profile label '" + label + "'");
    return *e->params;
  }
  if (label.empty()) throw UsageError("one of --profile or --params is required");
  for (const char* name : {"small", "large"}) {
    const ProfileCatalog cat = BuiltinCatalog(name);
    const CatalogEntry* e = cat.Find(label);
    if (e && !e->is_neutral()) return *e->params;
  }
  throw UsageError("--profile: unknown profile label '" + label + "'");
}

ProfileCatalog ResolveCatalogFlag(const std::string& value) {
  try {
    return ResolveCatalog(value);
  } catch (const Error& e) {
    throw UsageError(std::string("--catalog: ") + e.what());
  }
}

SampleFormat ParseFormat(const std::string& s) {
  if (s == "float32") return SampleFormat::kFloat32;
  if (s == "pcm16") return SampleFormat::kPcm16;
  throw UsageError("--format: expected float32 or pcm16, got '" + s + "'");
}

// Runs `fn` with a stream bound to `path`, or stdout when the path is empty.
void WithOutput(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path + " for writing");
  fn(out);
  if (!out) throw Error(ErrorCode::kIoError, "write to " + path + " failed");
}

void WarnClipped(const WriteReport& rep, const std::string& path) {
  if (rep.clipped_samples) {
    std::fprintf(stderr, "warning: %zu samples clipped to full scale in %s\n",
                 rep.clipped_samples, path.c_str());
  }
}

// Chunks every WAV below `dir` into clip_secs pieces above the gate, in path
// order, stopping after max_clips (0 = no limit).
std::vector<NamedClip> LoadCorpus(const std::string& dir, double clip_secs, double gate_db,
                                  std::size_t max_clips) {
  if (!std::filesystem::is_directory(dir)) throw UsageError("--corpus: not a directory: " + dir);
  std::vector<NamedClip> clips;
  for (const auto& path : ListWavFiles(dir)) {
    const AudioClip clip = ReadAudio(path);
    const auto chunks = ChunkAndGate(clip, clip_secs, gate_db);
    const std::string rel = std::filesystem::relative(path, dir).generic_string();
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      if (max_clips && clips.size() >= max_clips) return clips;
      clips.push_back({rel + "#" + std::to_string(i), chunks[i].clip});
    }
  }
  if (clips.empty()) throw Error(ErrorCode::kEmptyInput, "no usable clips under " + dir);
  return clips;
}

std::vector<NamedProfile> ProfilesOf(const ProfileCatalog& cat) {
  auto profiles = CatalogProfiles(cat);
  if (profiles.empty()) throw UsageError("--catalog: no compression profiles");
  return profiles;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversible dynamic range compression toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Random seed for stochastic steps")->capture_default_str();
  app.add_option("--solver", g.solver, "Root finder: newton or hybrid")
      ->check(CLI::IsMember({"newton", "hybrid"}))
      ->capture_default_str();
  app.add_option("--tol", g.tol, "Residual tolerance of the root finder")->capture_default_str();
  app.fallthrough();

  std::function<void()> action;

  // compress
  struct {
    std::string profile, params, input, output, trace, format = "float32";
  } c;
  auto* compress = app.add_subcommand("compress", "Apply a compression profile to a WAV file");
  compress->add_option("--profile", c.profile, "Built-in profile label (A-E, 1-30)");
  compress->add_option("--params", c.params, "JSON profile file");
  compress->add_option("--input", c.input, "Input WAV")->required();
  compress->add_option("--output", c.output, "Output WAV")->required();
  compress->add_option("--trace", c.trace, "Per-sample state trace CSV");
  compress->add_option("--format", c.format, "Output sample format: float32 or pcm16")
      ->capture_default_str();
  compress->callback([&] {
    action = [&] {
      const DrcParams params = ResolveProfile(c.profile, c.params);
      const SampleFormat fmt = ParseFormat(c.format);
      const auto r = Compress(ReadAudio(c.input), params, !c.trace.empty());
      WarnClipped(WriteAudio(r.output, c.output, fmt), c.output);
      if (!c.trace.empty()) WithOutput(c.trace, [&](std::ostream& o) { WriteTraceCsv(*r.trace, o); });
    };
  });

  // invert
  struct {
    std::string profile, params, input, output, diagnostics, format = "float32";
  } inv;
  auto* invert = app.add_subcommand("invert", "Recover the uncompressed signal from a compressed WAV");
  invert->add_option("--profile", inv.profile, "Built-in profile label (A-E, 1-30)");
  invert->add_option("--params", inv.params, "JSON profile file");
  invert->add_option("--input", inv.input, "Compressed WAV")->required();
  invert->add_option("--output", inv.output, "Reconstructed WAV")->required();
  invert->add_option("--diagnostics", inv.diagnostics, "Inversion diagnostics JSON");
  invert->add_option("--format", inv.format, "Output sample format: float32 or pcm16")
      ->capture_default_str();
  invert->callback([&] {
    action = [&] {
      const DrcParams params = ResolveProfile(inv.profile, inv.params);
      const SampleFormat fmt = ParseFormat(inv.format);
      const InversionOptions opt = MakeInversionOptions(g);
      const auto r = Invert(ReadAudio(inv.input), params, opt);
      WarnClipped(WriteAudio(r.output, inv.output, fmt), inv.output);
      if (!inv.diagnostics.empty()) {
        WithOutput(inv.diagnostics, [&](std::ostream& o) { WriteDiagnosticsJson(r.diagnostics, o); });
      }
    };
  });

  // eval
  struct {
    std::string ref, est, report;
  } ev;
  auto* eval = app.add_subcommand("eval", "Compare a reconstruction against a reference");
  eval->add_option("--ref", ev.ref, "Reference WAV")->required();
  eval->add_option("--est", ev.est, "Estimate WAV")->required();
  eval->add_option("--report", ev.report, "Metric report JSON (default: stdout)");
  eval->callback([&] {
    action = [&] {
      const auto rep = Evaluate(ReadAudio(ev.est), ReadAudio(ev.ref));
      WithOutput(ev.report, [&](std::ostream& o) { WriteMetricReportJson(rep, o); });
    };
  });

  // dataset build
  struct {
    std::string input_dir, catalog = "small", out_dir, manifest;
    double chunk_secs = 5.0, gate_db = -30.0;
  } ds;
  auto* dataset = app.add_subcommand("dataset", "Dataset construction");
  dataset->require_subcommand(1);
  auto* build = dataset->add_subcommand("build", "Chunk, gate and compress a WAV corpus");
  build->add_option("--input-dir", ds.input_dir, "Directory of source WAV files")->required();
  build->add_option("--catalog", ds.catalog, "small, large or a JSON profile file")
      ->capture_default_str();
  build->add_option("--chunk-secs", ds.chunk_secs, "Chunk length in seconds")->capture_default_str();
  build->add_option("--gate-db", ds.gate_db, "Discard chunks below this RMS level (dBFS)")
      ->capture_default_str();
  build->add_option("--out-dir", ds.out_dir, "Output directory")->required();
  build->add_option("--manifest", ds.manifest, "Manifest CSV (default: stdout)");
  build->callback([&] {
    action = [&] {
      if (!(ds.chunk_secs > 0.0)) throw UsageError("--chunk-secs: must be positive");
      if (!std::filesystem::is_directory(ds.input_dir)) {
        throw UsageError("--input-dir: not a directory: " + ds.input_dir);
      }
      const ProfileCatalog cat = ResolveCatalogFlag(ds.catalog);
      DatasetOptions opt;
      opt.chunk_secs = ds.chunk_secs;
      opt.gate_dbfs = ds.gate_db;
      opt.workers = WorkerCount();
      const auto r = BuildDataset(ds.input_dir, cat, ds.out_dir, opt);
      WithOutput(ds.manifest, [&](std::ostream& o) { WriteManifestCsv(r.manifest, o); });
      for (const auto& e : r.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
      if (!r.errors.empty()) throw Error(ErrorCode::kIoError, "some source files failed");
    };
  });

  // augment
  struct {
    std::string input, output;
    std::optional<double> snr_db;
    int epoch = 0;
  } au;
  auto* augment = app.add_subcommand("augment", "Add Gaussian noise at a target SNR");
  augment->add_option("--input", au.input, "Input WAV");
  augment->add_option("--snr-db", au.snr_db, "Target signal-to-noise ratio in dB");
  augment->add_option("--output", au.output, "Output WAV");
  augment->require_subcommand(0, 1);
  auto* schedule = augment->add_subcommand("schedule", "Print the curriculum SNR for an epoch");
  schedule->add_option("--epoch", au.epoch, "Training epoch (>= 0)")->required();
  schedule->callback([&] {
    action = [&] {
      if (au.epoch < 0) throw UsageError("--epoch: must be >= 0");
      std::printf("%g\n", SnrAtEpoch(SnrSchedule{}, au.epoch));
    };
  });
  augment->callback([&] {
    if (schedule->parsed()) return;
    action = [&] {
      if (au.input.empty()) throw UsageError("--input is required");
      if (au.output.empty()) throw UsageError("--output is required");
      if (!au.snr_db) throw UsageError("--snr-db is required");
      const AudioClip noisy = InjectNoiseAtSnr(ReadAudio(au.input), *au.snr_db, g.seed);
      WriteAudio(noisy, au.output);
    };
  });

  // sweep
  struct {
    std::string corpus, catalog = "small", out, summary;
    int steps = 10;
    double range = 0.5, clip_secs = 1.0, gate_db = -30.0;
    std::size_t max_clips = 0;
  } sw;
  auto* sweep = app.add_subcommand("sweep", "Parameter sensitivity sweep");
  sweep->add_option("--corpus", sw.corpus, "Directory of WAV files")->required();
  sweep->add_option("--catalog", sw.catalog, "small, large or a JSON profile file")
      ->capture_default_str();
  sweep->add_option("--steps", sw.steps, "Perturbations per parameter")->capture_default_str();
  sweep->add_option("--range", sw.range, "Relative perturbation range")->capture_default_str();
  sweep->add_option("--out", sw.out, "Sweep CSV (default: stdout)");
  sweep->add_option("--summary", sw.summary, "Box-plot summary CSV");
  sweep->add_option("--clip-secs", sw.clip_secs, "Clip length cut from the corpus")
      ->capture_default_str();
  sweep->add_option("--gate-db", sw.gate_db, "Skip clips below this RMS level (dBFS)")
      ->capture_default_str();
  sweep->add_option("--max-clips", sw.max_clips, "Use at most this many clips (0 = all)")
      ->capture_default_str();
  sweep->callback([&] {
    action = [&] {
      if (sw.steps < 2) throw UsageError("--steps: must be >= 2");
      if (!(sw.range > 0.0 && sw.range <= 0.5)) throw UsageError("--range: must be in (0, 0.5]");
      if (!(sw.clip_secs > 0.0)) throw UsageError("--clip-secs: must be positive");
      const auto profiles = ProfilesOf(ResolveCatalogFlag(sw.catalog));
      SweepOptions opt;
      opt.steps = sw.steps;
      opt.range_frac = sw.range;
      opt.inversion = MakeInversionOptions(g);
      opt.workers = WorkerCount();
      const auto clips = LoadCorpus(sw.corpus, sw.clip_secs, sw.gate_db, sw.max_clips);
      const auto result = PerturbationSweep(clips, profiles, opt);
      WithOutput(sw.out, [&](std::ostream& o) { WriteSweepCsv(result, o); });
      if (!sw.summary.empty()) {
        WithOutput(sw.summary,
                   [&](std::ostream& o) { WriteBoxSummaryCsv(SummarizeSweep(result), o); });
      }
    };
  });

  // bench solvers
  struct {
    std::string corpus, catalog = "small", out;
    double clip_secs = 5.0, gate_db = -30.0;
    std::size_t max_clips = 0;
  } bn;
  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  auto* solvers = bench->add_subcommand("solvers", "Time and score both root finders");
  solvers->add_option("--corpus", bn.corpus, "Directory of WAV files")->required();
  solvers->add_option("--catalog", bn.catalog, "small, large or a JSON profile file")
      ->capture_default_str();
  solvers->add_option("--out", bn.out, "Report JSON (default: stdout)");
  solvers->add_option("--clip-secs", bn.clip_secs, "Clip length cut from the corpus")
      ->capture_default_str();
  solvers->add_option("--gate-db", bn.gate_db, "Skip clips below this RMS level (dBFS)")
      ->capture_default_str();
  solvers->add_option("--max-clips", bn.max_clips, "Use at most this many clips (0 = all)")
      ->capture_default_str();
  solvers->callback([&] {
    action = [&] {
      if (!(bn.clip_secs > 0.0)) throw UsageError("--clip-secs: must be positive");
      const auto profiles = ProfilesOf(ResolveCatalogFlag(bn.catalog));
      BenchmarkOptions opt;
      opt.solver_options = MakeInversionOptions(g).solver_options;
      opt.workers = WorkerCount();
      const auto clips = LoadCorpus(bn.corpus, bn.clip_secs, bn.gate_db, bn.max_clips);
      const auto reports = SolverBenchmark(clips, profiles, opt);
      WithOutput(bn.out, [&](std::ostream& o) { WriteSolverReportJson(reports, o); });
    };
  });

  // identify
  struct {
    std::string input, catalog = "small", out;
  } id;
  auto* identify = app.add_subcommand("identify", "Rank catalog profiles by inversion consistency");
  identify->add_option("--input", id.input, "Compressed WAV")->required();
  identify->add_option("--catalog", id.catalog, "small, large or a JSON profile file")
      ->capture_default_str();
  identify->add_option("--out", id.out, "Ranking JSON (default: stdout)");
  identify->callback([&] {
    action = [&] {
      const ProfileCatalog cat = ResolveCatalogFlag(id.catalog);
      const InversionOptions opt = MakeInversionOptions(g);
      const auto report = IdentifyProfile(ReadAudio(id.input), cat, opt, WorkerCount());
      WithOutput(id.out, [&](std::ostream& o) { WriteIdentificationJson(report, o); });
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    MakeInversionOptions(g); // validate global flags before any processing
    if (action) action();
    return 0;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "usage error: %s: %s\n", e.field().c_str(), e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", std::string(ErrorCodeName(e.code())).c_str(),
                 e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
