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

#include "drcinv/core.h"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace drc {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonPositiveTimeConstant: return "NonPositiveTimeConstant";
    case ErrorCode::kRatioBelowOne: return "RatioBelowOne";
    case ErrorCode::kInvalidDetector: return "InvalidDetector";
    case ErrorCode::kPositiveThreshold: return "PositiveThreshold";
    case ErrorCode::kUnknownCatalog: return "UnknownCatalog";
    case ErrorCode::kUnknownProfile: return "UnknownProfile";
    case ErrorCode::kInvalidProfileFile: return "InvalidProfileFile";
    case ErrorCode::kNonPositiveInput: return "NonPositiveInput";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kSilentClip: return "SilentClip";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kRateMismatch: return "RateMismatch";
    case ErrorCode::kZeroReference: return "ZeroReference";
    case ErrorCode::kClipTooShort: return "ClipTooShort";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyCatalog: return "EmptyCatalog";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kCorruptFile: return "CorruptFile";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

DrcParams DrcParams::FromMilliseconds(double threshold_db, double ratio,
                                      double tau_v_att_ms, double tau_v_rel_ms,
                                      double tau_g_att_ms, double tau_g_rel_ms,
                                      Detector detector) {
  DrcParams p;
  p.threshold_db = threshold_db;
  p.ratio = ratio;
  p.tau_v_att_s = tau_v_att_ms * 1e-3;
  p.tau_v_rel_s = tau_v_rel_ms * 1e-3;
  p.tau_g_att_s = tau_g_att_ms * 1e-3;
  p.tau_g_rel_s = tau_g_rel_ms * 1e-3;
  p.detector = detector;
  return p;
}

double DrcParams::linear_threshold() const {
  return std::pow(10.0, threshold_db / 20.0);
}

double DrcParams::exponent() const { return 1.0 - 1.0 / ratio; }

double DrcParams::kappa() const {
  return std::pow(linear_threshold(), exponent());
}

DrcParams ValidateParams(const DrcParams& raw) {
  const std::array<std::pair<const char*, double>, 4> taus = {{
      {"tau_v_att", raw.tau_v_att_s},
      {"tau_v_rel", raw.tau_v_rel_s},
      {"tau_g_att", raw.tau_g_att_s},
      {"tau_g_rel", raw.tau_g_rel_s},
  }};
  for (const auto& [name, value] : taus) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ValidationError(ErrorCode::kNonPositiveTimeConstant, name,
                            std::string(name) + " must be a positive finite time constant");
    }
  }
  if (!(raw.ratio >= 1.0) || !std::isfinite(raw.ratio)) {
    throw ValidationError(ErrorCode::kRatioBelowOne, "ratio",
                          "ratio must be >= 1, got " + std::to_string(raw.ratio));
  }
  if (raw.detector != Detector::kPeak && raw.detector != Detector::kRms) {
    throw ValidationError(ErrorCode::kInvalidDetector, "detector",
                          "detector must be 1 (peak) or 2 (rms), got " +
                              std::to_string(static_cast<int>(raw.detector)));
  }
  if (!(raw.threshold_db <= 0.0) || !std::isfinite(raw.threshold_db)) {
    throw ValidationError(ErrorCode::kPositiveThreshold, "threshold_db",
                          "threshold must be <= 0 dBFS, got " +
                              std::to_string(raw.threshold_db));
  }
  return raw;
}

DerivedConstants ComputeDerivedConstants(const DrcParams& params) {
  const DrcParams p = ValidateParams(params);
  const double l = p.linear_threshold();
  const double s = p.exponent();
  return {l, s, std::pow(l, s)};
}

void ValidateClip(const AudioClip& clip) {
  if (clip.sample_rate_hz <= 0) {
    throw Error(ErrorCode::kNonPositiveInput, "sample rate must be positive");
  }
  for (double s : clip.samples) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNonPositiveInput, "clip contains non-finite samples");
    }
  }
}

ProfileCatalog::ProfileCatalog() {
  entries_.push_back({std::string(kNeutralLabel), std::nullopt});
}

ProfileCatalog::ProfileCatalog(std::vector<std::pair<std::string, DrcParams>> profiles)
    : ProfileCatalog() {
  std::set<std::string> seen{std::string(kNeutralLabel)};
  for (auto& [label, params] : profiles) {
    if (label.empty() || !seen.insert(label).second) {
      throw Error(ErrorCode::kInvalidProfileFile,
                  "duplicate or reserved profile label '" + label + "'");
    }
    entries_.push_back({std::move(label), ValidateParams(params)});
  }
}

const CatalogEntry* ProfileCatalog::Find(std::string_view label) const {
  for (const auto& e : entries_) {
    if (e.label == label) return &e;
  }
  return nullptr;
}

const DrcParams& ProfileCatalog::Params(std::string_view label) const {
  const CatalogEntry* e = Find(label);
  if (e == nullptr || e->is_neutral()) {
    throw Error(ErrorCode::kUnknownProfile,
                "unknown profile label '" + std::string(label) + "'");
  }
  return *e->params;
}

std::vector<const CatalogEntry*> ProfileCatalog::Profiles() const {
  std::vector<const CatalogEntry*> out;
  for (const auto& e : entries_) {
    if (!e.is_neutral()) out.push_back(&e);
  }
  return out;
}

namespace {

struct TableRow {
  const char* label;
  double threshold_db, ratio, tv_att, tv_rel, tg_att, tg_rel;
};

// Threshold (dBFS), ratio, then time constants in ms.
constexpr std::array<TableRow, 5> kSmallProfiles = {{
    {"A", -32.0, 3.0, 5.0, 5.0, 13.0, 435.0},
    {"B", -19.9, 1.8, 5.0, 5.0, 11.0, 49.0},
    {"C", -24.4, 3.2, 5.0, 5.0, 5.8, 112.0},
    {"D", -26.3, 7.3, 5.0, 5.0, 9.0, 705.0},
    {"E", -38.0, 4.9, 5.0, 5.0, 13.1, 257.0},
}};

constexpr std::array<TableRow, 30> kLargeProfiles = {{
    {"1", -30.6, 2.3, 73.9, 20.3, 451.5, 1153.6},
    {"2", -55.9, 12.1, 25.4, 50.9, 54.1, 1274.5},
    {"3", -55.1, 13.4, 43.3, 76.4, 354.6, 468.4},
    {"4", -39.6, 13.1, 66.2, 10.1, 325.5, 1435.7},
    {"5", -31.4, 12.3, 99.4, 91.7, 160.7, 790.8},
    {"6", -60.0, 15.0, 130.0, 89.2, 393.4, 1758.2},
    {"7", -47.8, 5.4, 50.9, 84.1, 403.1, 1677.6},
    {"8", -46.9, 4.9, 48.4, 66.2, 257.7, 1516.3},
    {"9", -45.3, 2.5, 89.2, 114.7, 344.9, 1234.2},
    {"10", -26.5, 10.8, 114.7, 68.8, 209.2, 145.9},
    {"11", -43.7, 8.4, 35.6, 107.0, 432.1, 750.5},
    {"12", -20.8, 6.5, 84.1, 101.9, 500.0, 347.4},
    {"13", -22.4, 11.3, 124.9, 63.7, 364.3, 831.1},
    {"14", -40.4, 10.0, 112.1, 99.4, 374.0, 1355.1},
    {"15", -52.7, 4.4, 104.5, 35.6, 199.5, 1919.4},
    {"16", -51.8, 2.0, 117.2, 117.2, 277.0, 549.0},
    {"17", -38.0, 5.2, 5.0, 40.7, 296.4, 1717.9},
    {"18", -51.0, 3.3, 28.0, 127.4, 170.4, 669.9},
    {"19", -29.8, 9.2, 33.1, 56.0, 131.6, 1959.7},
    {"20", -29.0, 11.8, 45.8, 81.5, 412.8, 992.3},
    {"21", -28.2, 5.7, 10.1, 17.8, 34.7, 428.1},
    {"22", -50.2, 12.6, 22.9, 122.3, 83.2, 1395.4},
    {"23", -23.3, 12.9, 12.7, 7.6, 112.2, 25.0},
    {"24", -44.5, 7.8, 15.2, 86.6, 306.1, 1838.8},
    {"25", -46.1, 11.0, 122.3, 12.7, 189.8, 1113.3},
    {"26", -56.7, 2.8, 94.3, 28.0, 102.6, 186.2},
    {"27", -24.9, 10.5, 38.2, 43.3, 335.2, 226.5},
    {"28", -48.6, 8.9, 107.0, 104.5, 25.0, 1798.5},
    {"29", -49.4, 10.2, 127.4, 71.3, 92.9, 508.7},
    {"30", -24.1, 14.2, 81.5, 58.6, 180.1, 871.4},
}};

template <std::size_t N>
ProfileCatalog FromTable(const std::array<TableRow, N>& rows) {
  std::vector<std::pair<std::string, DrcParams>> profiles;
  profiles.reserve(N);
  for (const auto& r : rows) {
    profiles.emplace_back(r.label,
                          DrcParams::FromMilliseconds(r.threshold_db, r.ratio, r.tv_att,
                                                      r.tv_rel, r.tg_att, r.tg_rel,
                                                      Detector::kRms));
  }
  return ProfileCatalog(std::move(profiles));
}

} // namespace

ProfileCatalog BuiltinCatalog(std::string_view name) {
  if (name == "small") return FromTable(kSmallProfiles);
  if (name == "large") return FromTable(kLargeProfiles);
  throw Error(ErrorCode::kUnknownCatalog,
              "unknown catalog '" + std::string(name) + "' (expected small or large)");
}

ProfileCatalog ParseCatalogJson(std::string_view text) {
  using nlohmann::json;
  static const std::set<std::string> kFields = {
      "label", "threshold_db", "ratio", "tau_v_att_ms",
      "tau_v_rel_ms", "tau_g_att_ms", "tau_g_rel_ms", "detector"};

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidProfileFile, std::string("malformed profile JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw Error(ErrorCode::kInvalidProfileFile, "profile file must hold a JSON array");
  }

  std::vector<std::pair<std::string, DrcParams>> profiles;
  for (const auto& obj : doc) {
    if (!obj.is_object()) {
      throw Error(ErrorCode::kInvalidProfileFile, "profile entries must be objects");
    }
    for (const auto& [key, _] : obj.items()) {
      if (!kFields.count(key)) {
        throw Error(ErrorCode::kInvalidProfileFile, "unknown profile field '" + key + "'");
      }
    }
    for (const auto& key : kFields) {
      if (!obj.contains(key)) {
        throw Error(ErrorCode::kInvalidProfileFile, "missing profile field '" + key + "'");
      }
    }
    try {
      auto params = DrcParams::FromMilliseconds(
          obj.at("threshold_db").get<double>(), obj.at("ratio").get<double>(),
          obj.at("tau_v_att_ms").get<double>(), obj.at("tau_v_rel_ms").get<double>(),
          obj.at("tau_g_att_ms").get<double>(), obj.at("tau_g_rel_ms").get<double>(),
          static_cast<Detector>(obj.at("detector").get<int>()));
      profiles.emplace_back(obj.at("label").get<std::string>(), params);
    } catch (const json::type_error& e) {
      throw Error(ErrorCode::kInvalidProfileFile, std::string("bad profile field type: ") + e.what());
    }
  }
  return ProfileCatalog(std::move(profiles));
}

ProfileCatalog LoadCatalogFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, "cannot open profile file " + path.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseCatalogJson(ss.str());
}

ProfileCatalog ResolveCatalog(std::string_view name_or_path) {
  if (name_or_path == "small" || name_or_path == "large") {
    return BuiltinCatalog(name_or_path);
  }
  if (std::filesystem::exists(std::filesystem::path(name_or_path))) {
    return LoadCatalogFile(std::filesystem::path(name_or_path));
  }
  return BuiltinCatalog(name_or_path); // throws UnknownCatalog
}

} // namespace drc
