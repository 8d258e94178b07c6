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

#ifndef DRCINV_CORE_H_
#define DRCINV_CORE_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drcinv/error.h"

namespace drc {

// Level detector of the envelope follower. The numeric value is the exponent
// used in the envelope recursion.
enum class Detector : int { kPeak = 1, kRms = 2 };

inline int DetectorExponent(Detector d) { return static_cast<int>(d); }

struct DerivedConstants {
  double linear_threshold; // l = 10^(L/20)
  double exponent;         // S = 1 - 1/R
  double kappa;            // l^S
};

// The seven compressor parameters. Time constants are held in seconds.
struct DrcParams {
  double threshold_db = 0.0;
  double ratio = 1.0;
  double tau_v_att_s = 0.005;
  double tau_v_rel_s = 0.005;
  double tau_g_att_s = 0.005;
  double tau_g_rel_s = 0.005;
  Detector detector = Detector::kRms;

  // Builds a parameter set from table-style millisecond values.
  static DrcParams FromMilliseconds(double threshold_db, double ratio,
                                    double tau_v_att_ms, double tau_v_rel_ms,
                                    double tau_g_att_ms, double tau_g_rel_ms,
                                    Detector detector = Detector::kRms);

  double linear_threshold() const;
  double exponent() const;
  double kappa() const;
  int p() const { return DetectorExponent(detector); }

  bool operator==(const DrcParams&) const = default;
};

// Throws ValidationError naming the first offending field.
DrcParams ValidateParams(const DrcParams& raw);

DerivedConstants ComputeDerivedConstants(const DrcParams& params);

struct AudioClip {
  std::vector<double> samples;
  int sample_rate_hz = 44100;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// Throws on a non-positive rate or non-finite samples.
void ValidateClip(const AudioClip& clip);

inline constexpr std::string_view kNeutralLabel = "0";

struct CatalogEntry {
  std::string label;
  std::optional<DrcParams> params; // empty for the neutral entry

  bool is_neutral() const { return !params.has_value(); }
};

// Ordered set of labelled profiles. Always starts with the neutral entry.
class ProfileCatalog {
 public:
  ProfileCatalog();
  // Entries are appended after the neutral one; labels must be unique and
  // must not reuse the neutral label.
  explicit ProfileCatalog(std::vector<std::pair<std::string, DrcParams>> profiles);

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  const CatalogEntry* Find(std::string_view label) const;
  // Throws kUnknownProfile when the label is absent or neutral.
  const DrcParams& Params(std::string_view label) const;

  // Profiles only, in catalog order.
  std::vector<const CatalogEntry*> Profiles() const;

 private:
  std::vector<CatalogEntry> entries_;
};

// "small" (neutral + A..E) or "large" (neutral + 1..30).
ProfileCatalog BuiltinCatalog(std::string_view name);

// Parses the JSON profile list format (millisecond time constants).
ProfileCatalog ParseCatalogJson(std::string_view text);
ProfileCatalog LoadCatalogFile(const std::filesystem::path& path);
// Resolves a builtin name or a path to a profile file.
ProfileCatalog ResolveCatalog(std::string_view name_or_path);

} // namespace drc

#endif // DRCINV_CORE_H_
