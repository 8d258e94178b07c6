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

#include "drcinv/corpus.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <tuple>

#include "drcinv/compressor.h"
#include "drcinv/metrics.h"
#include "drcinv/parallel.h"
#include "drcinv/wav.h"

namespace drc {

namespace fs = std::filesystem;

double RmsDbfs(const AudioClip& clip) {
  const double rms = Rms(clip);
  if (rms <= 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(rms);
}

std::vector<Chunk> ChunkAndGate(const AudioClip& clip, double chunk_secs, double gate_dbfs) {
  if (!(chunk_secs > 0.0)) {
    throw Error(ErrorCode::kNonPositiveInput, "chunk length must be positive");
  }
  const auto len = static_cast<std::size_t>(std::floor(chunk_secs * clip.sample_rate_hz));
  std::vector<Chunk> chunks;
  if (len == 0) return chunks;
  for (std::size_t off = 0; off + len <= clip.size(); off += len) {
    Chunk c;
    c.offset_samples = off;
    c.clip.sample_rate_hz = clip.sample_rate_hz;
    c.clip.samples.assign(clip.samples.begin() + static_cast<std::ptrdiff_t>(off),
                          clip.samples.begin() + static_cast<std::ptrdiff_t>(off + len));
    c.rms_dbfs = RmsDbfs(c.clip);
    if (c.rms_dbfs >= gate_dbfs) chunks.push_back(std::move(c));
  }
  return chunks;
}

std::vector<fs::path> ListWavFiles(const fs::path& input_dir) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (!fs::is_directory(input_dir, ec)) return files;
  for (const auto& entry : fs::recursive_directory_iterator(input_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
    return a.lexically_relative(input_dir).generic_string() <
           b.lexically_relative(input_dir).generic_string();
  });
  return files;
}

namespace {

std::string OutputStem(const fs::path& source, const fs::path& input_dir) {
  fs::path rel = source.lexically_relative(input_dir);
  rel.replace_extension();
  std::string stem = rel.generic_string();
  std::replace(stem.begin(), stem.end(), '/', '_');
  return stem;
}

} // namespace

DatasetResult BuildDataset(const fs::path& input_dir, const ProfileCatalog& catalog,
                           const fs::path& out_dir, const DatasetOptions& options) {
  const auto sources = ListWavFiles(input_dir);
  DatasetResult result;
  if (sources.empty()) return result;
  fs::create_directories(out_dir);

  std::vector<std::vector<ChunkManifestEntry>> per_source(sources.size());
  std::vector<std::string> per_source_error(sources.size());

  ParallelFor(sources.size(), options.workers, [&](std::size_t i) {
    try {
      const AudioClip clip = ReadAudio(sources[i]);
      const auto chunks = ChunkAndGate(clip, options.chunk_secs, options.gate_dbfs);
      const std::string stem = OutputStem(sources[i], input_dir);
      for (std::size_t ci = 0; ci < chunks.size(); ++ci) {
        for (const auto& entry : catalog.entries()) {
          char name[64];
          std::snprintf(name, sizeof(name), "_c%04zu_", ci);
          const fs::path out = out_dir / (stem + name + entry.label + ".wav");
          const AudioClip rendered =
              entry.is_neutral() ? chunks[ci].clip : Compress(chunks[ci].clip, *entry.params).output;
          WriteAudio(rendered, out, SampleFormat::kFloat32);
          per_source[i].push_back({sources[i].generic_string(), ci, chunks[ci].offset_samples,
                                   entry.label, out.generic_string(), chunks[ci].rms_dbfs});
        }
      }
    } catch (const std::exception& e) {
      per_source[i].clear();
      per_source_error[i] = sources[i].generic_string() + ": " + e.what();
    }
  });

  for (std::size_t i = 0; i < sources.size(); ++i) {
    for (auto& row : per_source[i]) result.manifest.push_back(std::move(row));
    if (!per_source_error[i].empty()) result.errors.push_back(per_source_error[i]);
  }
  return result;
}

void WriteManifestCsv(const std::vector<ChunkManifestEntry>& manifest, std::ostream& out) {
  out << "source,chunk_index,offset_samples,label,output_path,rms_dbfs\n";
  char level[64];
  for (const auto& row : manifest) {
    std::snprintf(level, sizeof(level), "%.6f", row.rms_dbfs);
    out << row.source_path << ',' << row.chunk_index << ',' << row.offset_samples << ','
        << row.label << ',' << row.output_path << ',' << level << '\n';
  }
}

AudioClip InjectNoiseAtSnr(const AudioClip& clip, double snr_db, std::uint64_t seed) {
  ValidateClip(clip);
  const double rms = Rms(clip);
  if (!(rms >= 1e-12)) {
    throw Error(ErrorCode::kSilentClip, "cannot set an SNR against a silent clip");
  }
  const double variance = rms * rms / std::pow(10.0, snr_db / 10.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(variance));
  AudioClip out = clip;
  for (double& s : out.samples) s += noise(rng);
  return out;
}

void ValidateSnrSchedule(const SnrSchedule& s) {
  if (!(s.start_db >= s.floor_db) || !(s.step_db > 0.0) || s.epochs_per_step < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "SNR schedule needs start >= floor, step > 0, epochs_per_step >= 1");
  }
}

double SnrAtEpoch(const SnrSchedule& schedule, int epoch) {
  ValidateSnrSchedule(schedule);
  if (epoch < 0) throw Error(ErrorCode::kNonPositiveInput, "epoch must be >= 0");
  const int steps = epoch / schedule.epochs_per_step;
  return std::max(schedule.floor_db, schedule.start_db - schedule.step_db * steps);
}

} // namespace drc
