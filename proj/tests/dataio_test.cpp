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
#include "plapreg/dataio.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "plapreg/csv.hpp"
#include "plapreg/error.hpp"
#include "plapreg/log.hpp"
#include "plapreg/rng.hpp"
#include "test_support.hpp"

namespace plapreg {
namespace {

using ::plapreg::testing::FreshTempDir;

Schema TwoFeatureSchema() {
  return {{"id", ColumnRole::kIgnore},
          {"a", ColumnRole::kFeature},
          {"b", ColumnRole::kFeature},
          {"ALM", ColumnRole::kTarget},
          {"gender", ColumnRole::kCategorical}};
}

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

TEST(CsvTest, QuotedFieldsAndCrlf) {
  const auto doc = csv::Parse("h1,\"h,2\"\r\n\"a \"\"q\"\"\",\"multi\nline\"\r\n");
  ASSERT_EQ(doc.header.size(), 2u);
  EXPECT_EQ(doc.header[1], "h,2");
  ASSERT_EQ(doc.rows.size(), 1u);
  EXPECT_EQ(doc.rows[0][0], "a \"q\"");
  EXPECT_EQ(doc.rows[0][1], "multi\nline");
}

TEST(CsvTest, RaggedRowIsMalformed) {
  EXPECT_EQ(CodeOf([] { csv::Parse("a,b\n1,2\n3\n"); }), ErrorCode::kMalformedCsv);
  EXPECT_EQ(CodeOf([] { csv::Parse("a\n\"open\n"); }), ErrorCode::kMalformedCsv);
}

TEST(CsvTest, EscapeOnlyWhenNeeded) {
  EXPECT_EQ(csv::EscapeField("plain"), "plain");
  EXPECT_EQ(csv::EscapeField("a,b"), "\"a,b\"");
  EXPECT_EQ(csv::EscapeField("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(SchemaTest, ParsesRoles) {
  const Schema s = ParseSchema(R"({"a":"feature","y":"Target","g":"categorical","z":"ignore"})");
  EXPECT_EQ(s.at("a"), ColumnRole::kFeature);
  EXPECT_EQ(s.at("y"), ColumnRole::kTarget);
  EXPECT_EQ(s.at("g"), ColumnRole::kCategorical);
  EXPECT_EQ(s.at("z"), ColumnRole::kIgnore);
  EXPECT_EQ(CodeOf([] { ParseSchema(R"({"a":"weird"})"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(ParseSchema(SchemaToJson(s)), s);
}

TEST(LoadCsvTest, BlankTargetCellIsMissingNotZero) {
  const std::string text =
      "id,a,b,ALM,gender\n"
      "1,1,2,10,M\n"
      "2,2,3,,F\n"
      "3,3,4,12,F\n"
      "4,4,5,13,M\n"
      "5,5,6,14,F\n";
  const FeatureTable t = ParseCsvTable(text, TwoFeatureSchema());
  ASSERT_EQ(t.rows(), 5u);
  ASSERT_EQ(t.cols(), 2u);
  EXPECT_TRUE(std::isnan(t.target("ALM")[1]));
  EXPECT_EQ(t.incomplete_rows(), std::vector<std::size_t>{1});
  EXPECT_EQ(t.missing_counts().at("ALM"), 1u);
  EXPECT_EQ(t.category("gender").values[2], "F");
}

TEST(LoadCsvTest, HeaderOnlyGivesEmptyTable) {
  const FeatureTable t = ParseCsvTable("id,a,b,ALM,gender\n", TwoFeatureSchema());
  EXPECT_EQ(t.rows(), 0u);
  EXPECT_EQ(t.cols(), 2u);
}

TEST(LoadCsvTest, MissingMarkers) {
  for (const char* marker : {"", "NA", "na", "NaN", "nan", " NA "}) {
    EXPECT_TRUE(IsMissingMarker(marker)) << marker;
  }
  EXPECT_FALSE(IsMissingMarker("0"));
}

TEST(LoadCsvTest, Errors) {
  EXPECT_EQ(CodeOf([] { ParseCsvTable("id,a,b,ALM,gender\n1,x,2,3,M\n", TwoFeatureSchema()); }),
            ErrorCode::kMalformedCsv);
  EXPECT_EQ(CodeOf([] { ParseCsvTable("id,a,b,ALM,gender\n1,1,2,3\n", TwoFeatureSchema()); }),
            ErrorCode::kMalformedCsv);
  // Schema column absent from the header.
  EXPECT_EQ(CodeOf([] { ParseCsvTable("id,a,ALM,gender\n1,1,3,M\n", TwoFeatureSchema()); }),
            ErrorCode::kUnknownColumn);
  // Header column without a role.
  EXPECT_EQ(
      CodeOf([] { ParseCsvTable("id,a,b,ALM,gender,extra\n1,1,2,3,M,0\n", TwoFeatureSchema()); }),
      ErrorCode::kUnknownColumn);
  EXPECT_EQ(CodeOf([] { LoadCsv("/nonexistent/file.csv", TwoFeatureSchema()); }),
            ErrorCode::kIoError);
}

TEST(LoadCsvTest, ShapeOf515By44) {
  Schema schema;
  std::string header;
  for (int j = 0; j < 44; ++j) {
    const std::string name = "bio" + std::to_string(j);
    schema[name] = ColumnRole::kFeature;
    header += name + ",";
  }
  schema["ALM"] = ColumnRole::kTarget;
  header += "ALM\n";
  std::string text = header;
  Rng rng(3);
  for (int i = 0; i < 515; ++i) {
    for (int j = 0; j < 44; ++j) text += std::to_string(rng.Uniform(1, 100)) + ",";
    text += std::to_string(rng.Uniform(10, 30)) + "\n";
  }
  const FeatureTable t = DropIncomplete(ParseCsvTable(text, schema));
  EXPECT_EQ(t.rows(), 515u);
  EXPECT_EQ(t.cols(), 44u);
}

FeatureTable SmallTable() {
  FeatureTable t;
  t.feature_names = {"a", "b"};
  t.features.resize(3, 2);
  t.features << 1, 10, 2, std::nan(""), 3, 30;
  t.targets.push_back({"y", Eigen::Vector3d(1, 2, 3)});
  t.categorical.push_back({"gender", {"M", "F", "F"}});
  return t;
}

TEST(DropIncompleteTest, RemovesRowsWithMissingFeature) {
  const FeatureTable out = DropIncomplete(SmallTable());
  ASSERT_EQ(out.rows(), 2u);
  EXPECT_EQ(out.features(0, 0), 1);
  EXPECT_EQ(out.features(1, 0), 3);
  EXPECT_EQ(out.category("gender").values, (std::vector<std::string>{"M", "F"}));
}

TEST(DropIncompleteTest, IdentityAndIdempotent) {
  const FeatureTable once = DropIncomplete(SmallTable());
  const FeatureTable twice = DropIncomplete(once);
  EXPECT_EQ(once.features, twice.features);
  EXPECT_EQ(once.target("y"), twice.target("y"));
}

TEST(DropIncompleteTest, AllMissingThrows) {
  FeatureTable t = SmallTable();
  t.targets[0].values.setConstant(std::nan(""));
  EXPECT_EQ(CodeOf([&] { DropIncomplete(t); }), ErrorCode::kEmptyAfterCleaning);
}

TEST(FilterDatasetTest, GenderSelection) {
  const FeatureTable t = SmallTable();
  EXPECT_EQ(FilterDataset(t, RowSelector::Equals("gender", "F")).rows(), 2u);
  EXPECT_EQ(FilterDataset(t, RowSelector::All()).rows(), 3u);
  EXPECT_EQ(FilterDataset(t, RowSelector::Equals("gender", "X")).rows(), 0u);
  EXPECT_EQ(CodeOf([&] { FilterDataset(t, RowSelector::Equals("site", "A")); }),
            ErrorCode::kUnknownColumn);
  RowSelector loose{"gender", {"f"}, true};
  EXPECT_EQ(FilterDataset(t, loose).rows(), 2u);
}

TEST(FilterDatasetTest, FemaleCountOf270OutOf515) {
  FeatureTable t;
  t.feature_names = {"a"};
  t.features = Eigen::MatrixXd::Zero(515, 1);
  t.targets.push_back({"y", Eigen::VectorXd::Ones(515)});
  CategoricalColumn g{"gender", {}};
  for (int i = 0; i < 515; ++i) g.values.push_back(i < 245 ? "M" : "F");
  t.categorical.push_back(g);
  const auto female = FilterDataset(t, RowSelector::Equals("gender", "F"));
  const auto male = FilterDataset(t, RowSelector::Equals("gender", "M"));
  EXPECT_EQ(female.rows(), 270u);
  EXPECT_EQ(male.rows() + female.rows(), t.rows());
}

TEST(ZScoreTest, PopulationMeanAndSd) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 5, 2, 5, 3, 5;
  const std::vector<std::size_t> all{0, 1, 2};
  const auto params = FitZScore(x, all);
  EXPECT_DOUBLE_EQ(params.mean[0], 2.0);
  EXPECT_NEAR(params.sd[0], 0.8164965809277260, 1e-15);
  EXPECT_EQ(params.mean[1], 5.0);
  EXPECT_EQ(params.sd[1], 0.0);

  std::vector<std::string> warnings;
  auto previous = log::SetWarningSink([&](const std::string& m) { warnings.push_back(m); });
  const Eigen::MatrixXd z = ApplyZScore(x, params, std::vector<std::string>{"a", "b"});
  log::SetWarningSink(previous);
  EXPECT_NEAR(z(0, 0), -1.2247448713915890, 1e-12);
  EXPECT_NEAR(z(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(z(2, 0), 1.2247448713915890, 1e-12);
  EXPECT_TRUE((z.col(1).array() == 0.0).all());
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("b"), std::string::npos);
}

TEST(ZScoreTest, SingleRowAndEmptyFitSet) {
  Eigen::MatrixXd x(2, 1);
  x << 4, 9;
  const std::vector<std::size_t> one{1};
  const auto params = FitZScore(x, one);
  EXPECT_EQ(params.mean[0], 9.0);
  EXPECT_EQ(params.sd[0], 0.0);
  EXPECT_EQ(CodeOf([&] { FitZScore(x, std::vector<std::size_t>{}); }), ErrorCode::kEmptyFitSet);
}

TEST(ZScoreTest, StandardizesRandomColumns) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd x = testing::RandomPoints(rng, 50, 4, 1.0 + trial) +
                              Eigen::MatrixXd::Constant(50, 4, 100.0 * trial);
    const Eigen::MatrixXd z = ApplyZScore(x, FitZScore(x));
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      const double mean = z.col(j).mean();
      const double sd = std::sqrt((z.col(j).array() - mean).square().mean());
      EXPECT_LE(std::abs(mean), 1e-10);
      EXPECT_NEAR(sd, 1.0, 1e-10);
    }
  }
}

TEST(PearsonTest, HandComputedAndSigned) {
  FeatureTable t;
  t.feature_names = {"noise", "same", "neg", "flat"};
  t.features.resize(4, 4);
  t.features << 1, 1, -1, 7,  //
      2, 3, -3, 7,            //
      3, 2, -2, 7,            //
      4, 4, -4, 7;
  t.targets.push_back({"y", Eigen::Vector4d(1, 3, 2, 4)});
  EXPECT_NEAR(PearsonCorrelation(t.features.col(0), t.target("y")), 0.8, 1e-15);

  const auto ranked = PearsonRank(t, "y", 4);
  ASSERT_EQ(ranked.size(), 4u);
  // "same" and "neg" tie at |r| = 1; column order decides.
  EXPECT_EQ(ranked[0].name, "same");
  EXPECT_NEAR(ranked[0].r, 1.0, 1e-15);
  EXPECT_EQ(ranked[1].name, "neg");
  EXPECT_NEAR(ranked[1].r, -1.0, 1e-15);
  EXPECT_EQ(ranked[2].name, "noise");
  EXPECT_EQ(ranked[3].name, "flat");
  EXPECT_EQ(ranked[3].r, 0.0);
  EXPECT_EQ(PearsonRank(t, "y", 2).size(), 2u);
}

TEST(PearsonTest, Errors) {
  FeatureTable t;
  t.feature_names = {"a"};
  t.features = Eigen::Vector3d(1, 2, 3);
  t.targets.push_back({"y", Eigen::Vector3d(5, 5, 5)});
  EXPECT_EQ(CodeOf([&] { PearsonRank(t, "y", 1); }), ErrorCode::kZeroVariance);
  EXPECT_EQ(CodeOf([&] { PearsonRank(t, "y", 2); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { PearsonRank(t, "nope", 1); }), ErrorCode::kUnknownColumn);
}

TEST(PearsonTest, InvariantUnderPositiveAffineTarget) {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    FeatureTable t;
    t.features = testing::RandomPoints(rng, 40, 6);
    for (int j = 0; j < 6; ++j) t.feature_names.push_back("f" + std::to_string(j));
    Eigen::VectorXd y = t.features.col(0) + 0.5 * t.features.col(3);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += 0.3 * rng.Normal();
    t.targets.push_back({"y", y});
    FeatureTable scaled = t;
    const double a = rng.Uniform(0.1, 10.0);
    const double b = rng.Uniform(-50, 50);
    scaled.targets[0].values = (a * y.array() + b).matrix();
    const auto r1 = PearsonRank(t, "y", 6);
    const auto r2 = PearsonRank(scaled, "y", 6);
    for (std::size_t i = 0; i < r1.size(); ++i) {
      EXPECT_EQ(r1[i].name, r2[i].name);
      EXPECT_NEAR(std::abs(r1[i].r), std::abs(r2[i].r), 1e-12);
    }
  }
}

TEST(CsvRoundTripTest, SaveThenLoad) {
  const auto dir = FreshTempDir("dataio_roundtrip");
  FeatureTable t = SmallTable();
  t.features(0, 0) = 0.1 + 0.2;  // needs 17 digits
  SaveCsv(t, dir / "t.csv");
  const FeatureTable back = LoadCsv(dir / "t.csv", t.schema());
  EXPECT_EQ(back.features(0, 0), t.features(0, 0));
  EXPECT_TRUE(std::isnan(back.features(1, 1)));
  EXPECT_EQ(back.target("y"), t.target("y"));
  EXPECT_EQ(back.category("gender").values, t.category("gender").values);
}

}  // namespace
}  // namespace plapreg
