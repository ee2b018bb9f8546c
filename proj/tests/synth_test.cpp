// Copyright 2026 The plapreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "plapreg/synth.hpp"

#include <gtest/gtest.h>

#include "plapreg/dataio.hpp"
#include "plapreg/error.hpp"
#include "plapreg/graph.hpp"

namespace plapreg {
namespace {

TEST(SynthTest, ShapeAndDeterminism) {
  SynthSpec spec;
  spec.n = 50;
  spec.dim = 4;
  spec.seed = 3;
  const FeatureTable a = Generate(spec);
  EXPECT_EQ(a.rows(), 50u);
  EXPECT_EQ(a.cols(), 4u);
  EXPECT_EQ(a.feature_names.front(), "x0");
  EXPECT_EQ(a.target(kSynthTarget).size(), 50);
  EXPECT_TRUE(a.has_category(kSynthGender));
  const FeatureTable b = Generate(spec);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.target(kSynthTarget), b.target(kSynthTarget));
  EXPECT_EQ(a.category(kSynthGender).values, b.category(kSynthGender).values);
  spec.seed = 4;
  EXPECT_NE(Generate(spec).features, a.features);
}

TEST(SynthTest, NoiseFreeTargets) {
  SynthSpec spec;
  spec.n = 30;
  spec.dim = 3;
  spec.noise_sd = 0.0;
  spec.target_fn = LinearCombo{{2.0, -1.0, 0.5}};
  const FeatureTable t = Generate(spec);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    EXPECT_DOUBLE_EQ(t.target(kSynthTarget)[r],
                     2.0 * t.features(r, 0) - t.features(r, 1) + 0.5 * t.features(r, 2));
  }
  spec.target_fn = SmoothNonlinear{};
  const FeatureTable s = Generate(spec);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    EXPECT_NEAR(s.target(kSynthTarget)[r],
                s.features.row(r).squaredNorm() / 3.0 + std::sin(s.features(r, 0)), 1e-12);
  }
  // Same seed, different noise level: same features.
  spec.noise_sd = 0.3;
  EXPECT_EQ(Generate(spec).features, s.features);
}

TEST(SynthTest, StructuresAndValidation) {
  SynthSpec spec;
  spec.n = 100;
  spec.dim = 3;
  spec.structure = TwoBlobs(3, 80.0, 0.5);
  const FeatureTable blobs = Generate(spec);
  EXPECT_EQ(ConnectedComponents(KnnGraph(blobs.features, 5, SelfTuningEpsilon{5})).count(), 2u);
  spec.structure = ManifoldCurve{0.0};
  const FeatureTable curve = Generate(spec);
  EXPECT_LE(curve.features.cwiseAbs().maxCoeff(), 1.0);

  SynthSpec bad;
  bad.n = 0;
  EXPECT_THROW(Generate(bad), Error);
  bad = SynthSpec{};
  bad.noise_sd = -1.0;
  EXPECT_THROW(Generate(bad), Error);
  bad = SynthSpec{};
  bad.target_fn = LinearCombo{{1.0}};
  EXPECT_THROW(Generate(bad), Error);
  bad = SynthSpec{};
  bad.structure = TwoBlobs(2, 1.0);
  EXPECT_THROW(Generate(bad), Error);
}

TEST(SynthTest, CsvRoundTrip) {
  SynthSpec spec;
  spec.n = 25;
  spec.dim = 3;
  const FeatureTable t = Generate(spec);
  const FeatureTable back = ParseCsvTable(TableToCsv(t), t.schema());
  EXPECT_EQ(back.features, t.features);
  EXPECT_EQ(back.target(kSynthTarget), t.target(kSynthTarget));
  EXPECT_EQ(back.category(kSynthGender).values, t.category(kSynthGender).values);
}

}  // namespace
}  // namespace plapreg
