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

// Seeded synthetic test material shared by the unit and acceptance suites.

#ifndef DRCINV_TESTS_SIGNALS_H_
#define DRCINV_TESTS_SIGNALS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "drcinv/analysis.h"
#include "drcinv/core.h"

namespace drc::testing {

inline AudioClip Constant(double value, double secs, int fs = 44100) {
  AudioClip c;
  c.sample_rate_hz = fs;
  c.samples.assign(static_cast<std::size_t>(std::llround(secs * fs)), value);
  return c;
}

inline AudioClip Sine(double freq_hz, double amplitude, double secs, int fs = 44100) {
  AudioClip c;
  c.sample_rate_hz = fs;
  c.samples.resize(static_cast<std::size_t>(std::llround(secs * fs)));
  for (std::size_t n = 0; n < c.samples.size(); ++n) {
    c.samples[n] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * n / fs);
  }
  return c;
}

inline AudioClip WhiteNoise(std::uint64_t seed, double stddev, double secs, int fs = 44100) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, stddev);
  AudioClip c;
  c.sample_rate_hz = fs;
  c.samples.resize(static_cast<std::size_t>(std::llround(secs * fs)));
  for (double& s : c.samples) s = dist(rng);
  return c;
}

inline AudioClip UniformNoise(std::uint64_t seed, double secs, int fs = 44100) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  AudioClip c;
  c.sample_rate_hz = fs;
  c.samples.resize(static_cast<std::size_t>(std::llround(secs * fs)));
  for (double& s : c.samples) s = dist(rng);
  return c;
}

// Music-like material: a few partials under a piecewise loudness contour that
// moves between quiet (about -45 dBFS) and loud passages, plus decaying noise
// bursts. Peak-normalised to 0.9.
inline AudioClip MusicLike(std::uint64_t seed, double secs = 1.0, int fs = 44100) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<std::size_t>(std::llround(secs * fs));

  struct Partial { double freq, amp, phase; };
  std::vector<Partial> partials;
  const int n_partials = 3 + static_cast<int>(unit(rng) * 3);
  for (int i = 0; i < n_partials; ++i) {
    partials.push_back({80.0 + 1900.0 * unit(rng), 0.2 + 0.8 * unit(rng),
                        2.0 * std::numbers::pi * unit(rng)});
  }

  // Loudness contour: segments of 50-250 ms with levels in [-45, 0] dB,
  // linearly interpolated.
  std::vector<double> contour(n);
  std::size_t pos = 0;
  double level = std::pow(10.0, (-45.0 + 45.0 * unit(rng)) / 20.0);
  while (pos < n) {
    const auto seg = static_cast<std::size_t>((0.05 + 0.2 * unit(rng)) * fs);
    const double next = std::pow(10.0, (-45.0 + 45.0 * unit(rng)) / 20.0);
    for (std::size_t k = 0; k < seg && pos < n; ++k, ++pos) {
      contour[pos] = level + (next - level) * k / seg;
    }
    level = next;
  }

  AudioClip c;
  c.sample_rate_hz = fs;
  c.samples.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& p : partials) {
      s += p.amp * std::sin(2.0 * std::numbers::pi * p.freq * i / fs + p.phase);
    }
    c.samples[i] = s * contour[i];
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  const int bursts = 2 + static_cast<int>(unit(rng) * 3);
  for (int b = 0; b < bursts; ++b) {
    const auto start = static_cast<std::size_t>(unit(rng) * n);
    const double amp = 0.3 + 0.7 * unit(rng);
    const double decay = 0.01 + 0.05 * unit(rng);
    for (std::size_t i = start; i < n && i < start + static_cast<std::size_t>(0.15 * fs); ++i) {
      c.samples[i] += amp * std::exp(-static_cast<double>(i - start) / (decay * fs)) * gauss(rng);
    }
  }

  double peak = 0.0;
  for (double s : c.samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.0) {
    for (double& s : c.samples) s *= 0.9 / peak;
  }
  return c;
}

inline std::vector<NamedClip> MusicCorpus(std::size_t count, double secs,
                                          std::uint64_t base_seed = 1000) {
  std::vector<NamedClip> clips;
  for (std::size_t i = 0; i < count; ++i) {
    clips.push_back({"clip" + std::to_string(i), MusicLike(base_seed + i, secs)});
  }
  return clips;
}

} // namespace drc::testing

#endif // DRCINV_TESTS_SIGNALS_H_
