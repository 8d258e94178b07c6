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

#ifndef DRCINV_WAV_H_
#define DRCINV_WAV_H_

#include <cstddef>
#include <filesystem>
#include <string_view>

#include "drcinv/core.h"

namespace drc {

enum class SampleFormat { kPcm16, kFloat32 };

// Reads a RIFF/WAVE file (integer PCM 8/16/24/32 bit, IEEE float 32/64 bit,
// plain or extensible header) into a mono double-precision clip. Channels are
// averaged.
AudioClip ReadAudio(const std::filesystem::path& path);
AudioClip DecodeWav(std::string_view bytes);

struct WriteReport {
  std::size_t clipped_samples = 0; // |x| > 1 clamped to full scale (pcm16 only)
};

WriteReport WriteAudio(const AudioClip& clip, const std::filesystem::path& path,
                       SampleFormat format = SampleFormat::kFloat32);

} // namespace drc

#endif // DRCINV_WAV_H_
