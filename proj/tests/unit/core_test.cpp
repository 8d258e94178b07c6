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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

using namespace drc;

namespace {

DrcParams ProfileA() { return DrcParams::FromMilliseconds(-32, 3.0, 5, 5, 13, 435); }

template <class Fn>
ValidationError CatchValidation(Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ValidationError";
  return ValidationError(ErrorCode::kIoError, "", "");
}

} // namespace

TEST(ValidateParams, AcceptsTableProfile) {
  const DrcParams p = ValidateParams(ProfileA());
  EXPECT_DOUBLE_EQ(p.threshold_db, -32.0);
  EXPECT_DOUBLE_EQ(p.tau_g_rel_s, 0.435);
  EXPECT_EQ(p.detector, Detector::kRms);
}

TEST(ValidateParams, RejectsRatioBelowOne) {
  DrcParams p = ProfileA();
  p.ratio = 0.5;
  const auto e = CatchValidation([&] { ValidateParams(p); });
  EXPECT_EQ(e.code(), ErrorCode::kRatioBelowOne);
  EXPECT_EQ(e.field(), "ratio");
}

TEST(ValidateParams, RejectsZeroTimeConstant) {
  DrcParams p = ProfileA();
  p.tau_g_rel_s = 0.0;
  const auto e = CatchValidation([&] { ValidateParams(p); });
  EXPECT_EQ(e.code(), ErrorCode::kNonPositiveTimeConstant);
  EXPECT_EQ(e.field(), "tau_g_rel");
}

TEST(ValidateParams, RejectsBadDetectorAndPositiveThreshold) {
  DrcParams p = ProfileA();
  p.detector = static_cast<Detector>(3);
  EXPECT_EQ(CatchValidation([&] { ValidateParams(p); }).code(), ErrorCode::kInvalidDetector);

  p = ProfileA();
  p.threshold_db = 0.5;
  EXPECT_EQ(CatchValidation([&] { ValidateParams(p); }).code(), ErrorCode::kPositiveThreshold);

  p.threshold_db = 0.0; // analytic boundary is allowed
  EXPECT_NO_THROW(ValidateParams(p));
}

TEST(BuiltinCatalog, SmallHasNeutralPlusFiveProfiles) {
  const auto cat = BuiltinCatalog("small");
  ASSERT_EQ(cat.size(), 6u);
  EXPECT_TRUE(cat.entries()[0].is_neutral());
  EXPECT_EQ(cat.entries()[0].label, "0");

  const std::vector<std::string> labels = {"0", "A", "B", "C", "D", "E"};
  for (std::size_t i = 0; i < labels.size(); ++i) EXPECT_EQ(cat.entries()[i].label, labels[i]);

  const DrcParams& d = cat.Params("D");
  EXPECT_DOUBLE_EQ(d.ratio, 7.3);
  EXPECT_DOUBLE_EQ(d.tau_g_rel_s, 0.705);
  EXPECT_DOUBLE_EQ(d.threshold_db, -26.3);
  EXPECT_DOUBLE_EQ(d.tau_g_att_s, 0.009);
  for (const auto* e : cat.Profiles()) {
    EXPECT_DOUBLE_EQ(e->params->tau_v_att_s, 0.005);
    EXPECT_DOUBLE_EQ(e->params->tau_v_rel_s, 0.005);
    EXPECT_EQ(e->params->detector, Detector::kRms);
  }
}

TEST(BuiltinCatalog, LargeHasThirtyRmsProfiles) {
  const auto cat = BuiltinCatalog("large");
  ASSERT_EQ(cat.size(), 31u);
  const DrcParams& p1 = cat.Params("1");
  EXPECT_DOUBLE_EQ(p1.threshold_db, -30.6);
  EXPECT_DOUBLE_EQ(p1.ratio, 2.3);
  EXPECT_NEAR(p1.tau_v_att_s, 0.0739, 1e-15);
  EXPECT_NEAR(p1.tau_v_rel_s, 0.0203, 1e-15);
  EXPECT_NEAR(p1.tau_g_att_s, 0.4515, 1e-15);
  EXPECT_NEAR(p1.tau_g_rel_s, 1.1536, 1e-15);

  const DrcParams& p30 = cat.Params("30");
  EXPECT_DOUBLE_EQ(p30.threshold_db, -24.1);
  EXPECT_DOUBLE_EQ(p30.ratio, 14.2);
  for (const auto* e : cat.Profiles()) EXPECT_EQ(e->params->detector, Detector::kRms);
}

TEST(BuiltinCatalog, EveryProfileValidatesAndLabelsAreUnique) {
  for (const char* name : {"small", "large"}) {
    const auto cat = BuiltinCatalog(name);
    std::set<std::string> labels;
    for (const auto& e : cat.entries()) {
      EXPECT_TRUE(labels.insert(e.label).second) << e.label;
      if (!e.is_neutral()) EXPECT_NO_THROW(ValidateParams(*e.params));
    }
  }
}

TEST(BuiltinCatalog, UnknownNameFails) {
  try {
    BuiltinCatalog("medium");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownCatalog);
  }
}

TEST(DerivedConstants, ProfileAThreshold) {
  const auto d = ComputeDerivedConstants(ProfileA());
  EXPECT_NEAR(d.linear_threshold, 0.025118864315095794, 1e-15);
  EXPECT_NEAR(d.exponent, 2.0 / 3.0, 1e-15);
  // kappa = l^S = 10^(L * S / 20) evaluated along a separate route
  const double kappa_ref = std::pow(10.0, -32.0 * (2.0 / 3.0) / 20.0);
  EXPECT_LT(std::abs(d.kappa - kappa_ref) / kappa_ref, 1e-12);
}

TEST(DerivedConstants, IdentityAndSquareRootCases) {
  auto d = ComputeDerivedConstants(DrcParams::FromMilliseconds(0, 1, 5, 5, 5, 5));
  EXPECT_EQ(d.linear_threshold, 1.0);
  EXPECT_EQ(d.exponent, 0.0);
  EXPECT_EQ(d.kappa, 1.0);

  d = ComputeDerivedConstants(DrcParams::FromMilliseconds(-20, 2, 5, 5, 5, 5));
  EXPECT_NEAR(d.linear_threshold, 0.1, 1e-15);
  EXPECT_NEAR(d.exponent, 0.5, 1e-15);
  EXPECT_NEAR(d.kappa, 0.31622776601683794, 1e-15);
}

TEST(DerivedConstants, KappaMatchesPowerAcrossCatalog) {
  const ProfileCatalog catalog = BuiltinCatalog("large");
  for (const auto* e : catalog.Profiles()) {
    const auto d = ComputeDerivedConstants(*e->params);
    const double ref = std::exp(d.exponent * std::log(d.linear_threshold));
    EXPECT_LT(std::abs(d.kappa - ref) / ref, 1e-12) << e->label;
    EXPECT_EQ(ComputeDerivedConstants(*e->params).kappa, d.kappa);
  }
}

TEST(ProfileFile, ParsesMillisecondEntries) {
  const auto cat = ParseCatalogJson(R"([
    {"label": "soft", "threshold_db": -24, "ratio": 2, "tau_v_att_ms": 5,
     "tau_v_rel_ms": 10, "tau_g_att_ms": 20, "tau_g_rel_ms": 200, "detector": 1}
  ])");
  ASSERT_EQ(cat.size(), 2u);
  const auto& p = cat.Params("soft");
  EXPECT_DOUBLE_EQ(p.tau_g_rel_s, 0.2);
  EXPECT_EQ(p.detector, Detector::kPeak);
}

TEST(ProfileFile, RejectsUnknownMissingAndDuplicateEntries) {
  const std::string base =
      R"("threshold_db": -24, "ratio": 2, "tau_v_att_ms": 5, "tau_v_rel_ms": 10,
         "tau_g_att_ms": 20, "tau_g_rel_ms": 200, "detector": 2)";
  auto code_of = [](const std::string& text) {
    try {
      ParseCatalogJson(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of("[{\"label\": \"x\", \"knee_db\": 3, " + base + "}]"),
            ErrorCode::kInvalidProfileFile);
  EXPECT_EQ(code_of(R"([{"label": "x", "ratio": 2}])"), ErrorCode::kInvalidProfileFile);
  EXPECT_EQ(code_of("[{\"label\": \"0\", " + base + "}]"), ErrorCode::kInvalidProfileFile);
  EXPECT_EQ(code_of("[{\"label\": \"x\", " + base + "}, {\"label\": \"x\", " + base + "}]"),
            ErrorCode::kInvalidProfileFile);
  EXPECT_EQ(code_of("{not json"), ErrorCode::kInvalidProfileFile);
  // Domain violations surface as validation errors
  EXPECT_EQ(code_of(R"([{"label": "x", "threshold_db": -24, "ratio": 0.5, "tau_v_att_ms": 5,
      "tau_v_rel_ms": 10, "tau_g_att_ms": 20, "tau_g_rel_ms": 200, "detector": 2}])"),
            ErrorCode::kRatioBelowOne);
}

TEST(ProfileCatalog, NeutralLabelHasNoParams) {
  const auto cat = BuiltinCatalog("small");
  ASSERT_NE(cat.Find("0"), nullptr);
  EXPECT_FALSE(cat.Find("0")->params.has_value());
  EXPECT_THROW(cat.Params("0"), Error);
  EXPECT_THROW(cat.Params("Z"), Error);
}
