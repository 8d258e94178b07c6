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

#include "drcinv/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace drc {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t ReadU32(const char* p) {
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t ReadU16(const char* p) {
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

double DecodeSample(const char* p, std::uint16_t format, std::uint16_t bits) {
  const auto* b = reinterpret_cast<const unsigned char*>(p);
  if (format == kFormatFloat) {
    if (bits == 32) return std::bit_cast<float>(ReadU32(p));
    std::uint64_t u = ReadU32(p) | (static_cast<std::uint64_t>(ReadU32(p + 4)) << 32);
    return std::bit_cast<double>(u);
  }
  switch (bits) {
    case 8: return (static_cast<int>(b[0]) - 128) / 128.0;
    case 16: return static_cast<std::int16_t>(ReadU16(p)) / 32768.0;
    case 24: {
      std::int32_t v = b[0] | (b[1] << 8) | (b[2] << 16);
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default: return static_cast<std::int32_t>(ReadU32(p)) / 2147483648.0;
  }
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutU16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

} // namespace

AudioClip DecodeWav(std::string_view bytes) {
  if (bytes.size() < 12) throw Error(ErrorCode::kCorruptFile, "file too short for a WAV header");
  if (bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    throw Error(ErrorCode::kUnsupportedFormat, "not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(pos, 4);
    const std::uint32_t size = ReadU32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (id == "fmt ") {
      if (size < 16 || body + size > bytes.size()) {
        throw Error(ErrorCode::kCorruptFile, "truncated fmt chunk");
      }
      const char* f = bytes.data() + body;
      format = ReadU16(f);
      channels = ReadU16(f + 2);
      rate = ReadU32(f + 4);
      block_align = ReadU16(f + 12);
      bits = ReadU16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw Error(ErrorCode::kCorruptFile, "truncated extensible fmt chunk");
        format = ReadU16(f + 24); // first two bytes of the sub-format GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw Error(ErrorCode::kCorruptFile, "data chunk before fmt chunk");
      if (body + size > bytes.size()) {
        throw Error(ErrorCode::kCorruptFile, "data chunk runs past end of file");
      }
      const bool pcm_ok = format == kFormatPcm &&
                          (bits == 8 || bits == 16 || bits == 24 || bits == 32);
      const bool float_ok = format == kFormatFloat && (bits == 32 || bits == 64);
      if (!pcm_ok && !float_ok) {
        throw Error(ErrorCode::kUnsupportedFormat,
                    "unsupported WAV encoding (format " + std::to_string(format) +
                        ", " + std::to_string(bits) + " bits)");
      }
      if (channels == 0 || rate == 0 || block_align != channels * (bits / 8)) {
        throw Error(ErrorCode::kCorruptFile, "inconsistent fmt chunk");
      }
      const std::size_t frames = size / block_align;
      AudioClip clip;
      clip.sample_rate_hz = static_cast<int>(rate);
      clip.samples.resize(frames);
      const std::size_t width = bits / 8;
      for (std::size_t i = 0; i < frames; ++i) {
        const char* frame = bytes.data() + body + i * block_align;
        double acc = 0.0;
        for (std::size_t ch = 0; ch < channels; ++ch) {
          acc += DecodeSample(frame + ch * width, format, bits);
        }
        clip.samples[i] = acc / channels;
      }
      return clip;
    }
    pos = body + size + (size & 1);
  }
  throw Error(ErrorCode::kCorruptFile, "no data chunk");
}

AudioClip ReadAudio(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileNotFound, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return DecodeWav(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

WriteReport WriteAudio(const AudioClip& clip, const std::filesystem::path& path,
                       SampleFormat format) {
  ValidateClip(clip);
  const bool pcm = format == SampleFormat::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint16_t block_align = bits / 8;
  const auto data_size = static_cast<std::uint32_t>(clip.size() * block_align);

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  PutU32(out, 36 + data_size);
  out += "WAVEfmt ";
  PutU32(out, 16);
  PutU16(out, pcm ? kFormatPcm : kFormatFloat);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  PutU32(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * block_align);
  PutU16(out, block_align);
  PutU16(out, bits);
  out += "data";
  PutU32(out, data_size);

  WriteReport report;
  for (double s : clip.samples) {
    if (pcm) {
      if (std::abs(s) > 1.0) ++report.clipped_samples;
      const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
      PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      PutU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
  return report;
}

} // namespace drc
