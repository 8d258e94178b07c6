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

#ifndef DRCINV_CORPUS_H_
#define DRCINV_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "drcinv/core.h"

namespace drc {

// RMS level relative to full scale 1.0; -inf for silence.
double RmsDbfs(const AudioClip& clip);

struct Chunk {
  std::size_t offset_samples;
  AudioClip clip;
  double rms_dbfs;
};

// Consecutive, non-overlapping chunks of floor(chunk_secs * fs) samples from
// offset 0. The trailing remainder is dropped, as is any chunk whose RMS level
// is below gate_dbfs.
std::vector<Chunk> ChunkAndGate(const AudioClip& clip, double chunk_secs, double gate_dbfs);

struct ChunkManifestEntry {
  std::string source_path;
  std::size_t chunk_index;
  std::size_t offset_samples;
  std::string label;
  std::string output_path;
  double rms_dbfs; // level of the source chunk
};

struct DatasetOptions {
  double chunk_secs = 5.0;
  double gate_dbfs = -30.0;
  unsigned workers = 1;
};

struct DatasetResult {
  std::vector<ChunkManifestEntry> manifest;
  std::vector<std::string> errors; // one line per failed source file
};

// All *.wav files below input_dir in lexicographic order of their relative
// path. Missing directories yield an empty list.
std::vector<std::filesystem::path> ListWavFiles(const std::filesystem::path& input_dir);

// Chunks every source file and writes one float32 WAV per (chunk, catalog
// entry): the neutral entry writes the chunk unchanged, every profile its
// compressed version. Failures are collected per source file.
DatasetResult BuildDataset(const std::filesystem::path& input_dir,
                           const ProfileCatalog& catalog,
                           const std::filesystem::path& out_dir,
                           const DatasetOptions& options = {});

// header: source,chunk_index,offset_samples,label,output_path,rms_dbfs
void WriteManifestCsv(const std::vector<ChunkManifestEntry>& manifest, std::ostream& out);

// Adds zero-mean Gaussian noise with variance P / 10^(snr/10), P the mean
// power of the clip. Deterministic for a given seed. Throws kSilentClip.
AudioClip InjectNoiseAtSnr(const AudioClip& clip, double snr_db, std::uint64_t seed);

// Curriculum: start_db lowered by step_db every epochs_per_step, never below floor_db.
struct SnrSchedule {
  double start_db = 65.0;
  double step_db = 5.0;
  int epochs_per_step = 20;
  double floor_db = 20.0;
};

void ValidateSnrSchedule(const SnrSchedule& schedule);
double SnrAtEpoch(const SnrSchedule& schedule, int epoch);

} // namespace drc

#endif // DRCINV_CORPUS_H_
