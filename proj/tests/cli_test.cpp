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
#include "plapreg/cli.hpp"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "plapreg/csv.hpp"
#include "plapreg/dataio.hpp"
#include "plapreg/plaplace.hpp"
#include "test_support.hpp"

namespace plapreg {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "plapreg");
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::FreshTempDir(::testing::UnitTest::GetInstance()->current_test_info()->name());
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  // Synthetic dataset under <dir>/<name>; returns the data flags.
  std::vector<std::string> Synth(const std::string& name, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"synth", "--out", Path(name)};
    args.insert(args.end(), extra.begin(), extra.end());
    const RunResult r = RunCli(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return {"--input", Path(name + "/data.csv"), "--schema", Path(name + "/schema.json")};
  }

  static std::vector<std::string> Cat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  fs::path dir_;
};

TEST_F(CliTest, SynthIsByteReproducible) {
  const std::vector<std::string> spec{"--n", "100", "--dim", "5", "--seed", "7"};
  Synth("a", spec);
  Synth("b", spec);
  EXPECT_EQ(ReadFile(Path("a/data.csv")), ReadFile(Path("b/data.csv")));
  EXPECT_EQ(ReadFile(Path("a/schema.json")), ReadFile(Path("b/schema.json")));
  Synth("c", {"--n", "100", "--dim", "5", "--seed", "8"});
  EXPECT_NE(ReadFile(Path("a/data.csv")), ReadFile(Path("c/data.csv")));
}

TEST_F(CliTest, IngestSyntheticDropsNothing) {
  const auto data = Synth("s", {"--n", "120", "--dim", "4"});
  const RunResult r = RunCli(Cat({"ingest", "--out", Path("i")}, data));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = nlohmann::json::parse(ReadFile(Path("i/summary.json")));
  EXPECT_EQ(summary["rows_before"], 120);
  EXPECT_EQ(summary["rows_after"], 120);
  EXPECT_EQ(summary["datasets"]["male"].get<int>() + summary["datasets"]["female"].get<int>(),
            summary["datasets"]["combined"].get<int>());
  const auto cleaned = csv::Parse(ReadFile(Path("i/cleaned.csv")));
  EXPECT_EQ(cleaned.rows.size(), 120u);
}

TEST_F(CliTest, IngestCountsIncompleteRows) {
  WriteFileAtomic(Path("d.csv"),
                  "a,b,y,sex\n1,2,3,M\n4,,6,F\n7,8,9,M\n1,1,NA,F\n2,3,4,F\n5,6,7,M\n");
  WriteFileAtomic(Path("s.json"),
                  R"({"a":"feature","b":"feature","y":"target","sex":"categorical"})");
  const RunResult r = RunCli({"ingest", "--input", Path("d.csv"), "--schema", Path("s.json"),
                              "--out", Path("o"), "--gender-column", "sex", "--dataset", "male"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = nlohmann::json::parse(ReadFile(Path("o/summary.json")));
  EXPECT_EQ(s["rows_before"], 6);
  EXPECT_EQ(s["rows_after"], 4);
  EXPECT_EQ(s["missing_counts"]["b"], 1);
  EXPECT_EQ(s["missing_counts"]["y"], 1);
  EXPECT_EQ(s["datasets"]["male"], 3);
  EXPECT_EQ(s["datasets"]["female"], 1);
  EXPECT_EQ(s["rows_selected"], 3);
}

TEST_F(CliTest, InputErrorsExitTwo) {
  WriteFileAtomic(Path("bad.csv"), "a,b\n1,2\n3\n");
  WriteFileAtomic(Path("s.json"), R"({"a":"feature","b":"target"})");
  RunResult r = RunCli({"ingest", "--input", Path("bad.csv"), "--schema", Path("s.json"),
                        "--out", Path("o")});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_NE(r.err.find("MalformedCsv"), std::string::npos);
  EXPECT_NE(r.err.find("row"), std::string::npos);

  WriteFileAtomic(Path("extra.csv"), "a,b,mystery\n1,2,3\n");
  r = RunCli({"ingest", "--input", Path("extra.csv"), "--schema", Path("s.json"), "--out",
              Path("o")});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_NE(r.err.find("UnknownColumn"), std::string::npos);
  EXPECT_NE(r.err.find("mystery"), std::string::npos);

  r = RunCli({"eval", "--input", Path("missing.csv"), "--schema", Path("s.json"), "--out",
              Path("o")});
  EXPECT_EQ(r.code, cli::kExitInputError);
  r = RunCli({"eval", "--bogus"});
  EXPECT_EQ(r.code, cli::kExitInputError);
  r = RunCli({"synth", "--out", Path("z"), "--n", "0"});
  EXPECT_EQ(r.code, cli::kExitInputError);
  r = RunCli({"synth", "--out", Path("z"), "--n", "abc"});
  EXPECT_EQ(r.code, cli::kExitInputError);
  EXPECT_EQ(RunCli({"--help"}).code, 0);
}

TEST_F(CliTest, EvalPlaplaceFiftyEntries) {
  const auto data = Synth("s", {"--n", "100", "--dim", "3"});
  const RunResult r = RunCli(Cat({"eval", "--out", Path("e"), "--model", "plaplace", "--k", "6",
                                  "--folds", "5", "--fold-mode", "standard", "--repeats", "10"},
                                 data));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(ReadFile(Path("e/report.json")));
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc[0]["rmse"].size(), 10u);
  std::size_t entries = 0;
  for (const auto& row : doc[0]["rmse"]) entries += row.size();
  EXPECT_EQ(entries, 50u);
  EXPECT_EQ(doc[0]["config"]["k"], 6);
  EXPECT_NE(r.out.find("+-"), std::string::npos);
  const auto table = csv::Parse(ReadFile(Path("e/report.csv")));
  EXPECT_EQ(table.rows.size(), 1u);
}

TEST_F(CliTest, EvalRidgeOnNoiselessLinearData) {
  const auto data =
      Synth("s", {"--n", "150", "--dim", "4", "--target-fn", "linear", "--noise-sd", "0"});
  const RunResult r =
      RunCli(Cat({"eval", "--out", Path("e"), "--model", "ridge", "--lambda", "1e-9"}, data));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto table = csv::Parse(ReadFile(Path("e/report.csv")));
  EXPECT_LE(std::stod(table.rows[0][10]), 0.1);
  for (const char* model : {"polyridge", "lssvr"}) {
    EXPECT_EQ(RunCli(Cat({"eval", "--out", Path(model), "--model", model, "--repeats", "1"}, data)).code, 0);
  }
}

TEST_F(CliTest, EvalBadFoldCountExitsThree) {
  const auto data = Synth("s", {"--n", "40", "--dim", "2"});
  const RunResult r = RunCli(Cat({"eval", "--out", Path("e"), "--folds", "1"}, data));
  EXPECT_EQ(r.code, cli::kExitEvalError);
  EXPECT_NE(r.err.find("KOutOfRange"), std::string::npos);
}

TEST_F(CliTest, FlagsOverrideConfigOverrideDefaults) {
  const auto data = Synth("s", {"--n", "60", "--dim", "2"});
  WriteFileAtomic(Path("cfg.json"), R"({"model": "ridge", "lambda": 0.25, "repeats": 3, "fold_mode": "modified"})");
  const RunResult r = RunCli(
      Cat({"eval", "--out", Path("e"), "--config", Path("cfg.json"), "--repeats", "2"}, data));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(ReadFile(Path("e/report.json")))[0];
  EXPECT_EQ(doc["model"], "ridge");
  EXPECT_EQ(doc["params"]["lambda"], 0.25);
  EXPECT_EQ(doc["repeats"], 2);
  EXPECT_EQ(doc["fold_mode"], "modified");
  EXPECT_EQ(doc["folds"], 5);
  EXPECT_EQ(doc["config"]["repeats"], 2);
  EXPECT_EQ(doc["config"]["seed"], 0);
  WriteFileAtomic(Path("broken.json"), "{not json");
  EXPECT_EQ(RunCli(Cat({"eval", "--out", Path("e"), "--config", Path("broken.json")}, data)).code,
            cli::kExitInputError);
}

TEST_F(CliTest, SweepSingleCellAndDeterminism) {
  const auto data = Synth("s", {"--n", "80", "--dim", "3"});
  const std::vector<std::string> grid{"--grid-p", "3", "--grid-k", "8", "--grid-train-pct", "20",
                                      "--repeats", "2", "--seed", "5"};
  ASSERT_EQ(RunCli(Cat(Cat({"sweep", "--out", Path("a")}, grid), data)).code, 0);
  ASSERT_EQ(RunCli(Cat(Cat({"sweep", "--out", Path("b")}, grid), data)).code, 0);
  const auto optima = csv::Parse(ReadFile(Path("a/optima.csv")));
  ASSERT_EQ(optima.rows.size(), 1u);
  EXPECT_EQ(optima.rows[0][1], "3");
  EXPECT_EQ(optima.rows[0][2], "8");
  for (const char* file : {"sweep.csv", "optima.csv", "sweep.json"}) {
    EXPECT_EQ(ReadFile(Path(std::string("a/") + file)), ReadFile(Path(std::string("b/") + file)));
  }
}

TEST_F(CliTest, SweepDefaultGridHasOneOptimumPerTrainingPct) {
  const auto data = Synth("s", {"--n", "90", "--dim", "2"});
  const RunResult r = RunCli(Cat({"sweep", "--out", Path("d"), "--repeats", "1"}, data));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto optima = csv::Parse(ReadFile(Path("d/optima.csv")));
  ASSERT_EQ(optima.rows.size(), 7u);
  const std::vector<std::string> pcts{"5", "10", "20", "25", "33", "50", "80"};
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(optima.rows[i][0], pcts[i]);
  EXPECT_EQ(csv::Parse(ReadFile(Path("d/sweep.csv"))).rows.size(), 17u * 11u * 7u);
}

TEST_F(CliTest, AsymptoticModeWritesOneSeriesPerK) {
  const auto data = Synth("s", {"--n", "120", "--dim", "3"});
  const RunResult r = RunCli(Cat({"sweep", "--asymptotic", "--out", Path("a"), "--grid-k",
                                  "10,30,50", "--repeats", "1"},
                                 data));
  ASSERT_EQ(r.code, 0) << r.err;
  for (int k : {10, 30, 50}) {
    const auto series = csv::Parse(ReadFile(Path("a/asymptotic_k" + std::to_string(k) + ".csv")));
    EXPECT_EQ(series.rows.back()[0], "inf");
  }
  const auto doc = nlohmann::json::parse(ReadFile(Path("a/asymptotic.json")));
  EXPECT_EQ(doc["series"].size(), 3u);
  EXPECT_EQ(RunCli(Cat({"asymptotic", "--out", Path("b"), "--grid-k", "10", "--repeats", "1"}, data)).code, 0);
  EXPECT_EQ(RunCli(Cat({"asymptotic", "--out", Path("c"), "--grid-p", "2,4"}, data)).code,
            cli::kExitEvalError);
}

TEST_F(CliTest, SeparatedBlobsGiveTwoComponents) {
  const auto data = Synth("s", {"--n", "100", "--dim", "3", "--separation", "100"});
  const RunResult r = RunCli(Cat({"ingest", "--out", Path("i"), "--k", "5"}, data));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto s = nlohmann::json::parse(ReadFile(Path("i/summary.json")));
  EXPECT_EQ(s["graph"]["components"], 2);
}

TEST(CliListTest, RealAndCountLists) {
  EXPECT_EQ(cli::ParseRealList("2,2.5,inf"), (std::vector<double>{2, 2.5, kInfiniteP}));
  const auto range = cli::ParseRealList("2:0.5:10");
  ASSERT_EQ(range.size(), 17u);
  EXPECT_EQ(range.back(), 10.0);
  EXPECT_EQ(cli::ParseCountList("10:5:60").size(), 11u);
  EXPECT_EQ(cli::ParseCountList("3, 1:2:5"), (std::vector<std::size_t>{3, 1, 3, 5}));
}

}  // namespace
}  // namespace plapreg
