/* Copyright 2026 The Fluency Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "fluency/cli.h"

#include <sstream>

#include <gtest/gtest.h>

#include "fluency/dataset.h"
#include "fluency/manifest.h"
#include "fluency/metrics.h"
#include "fluency/model.h"
#include "test_util.h"

namespace fluency {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunTool(std::vector<std::string> args) {
  args.insert(args.begin(), "fluency");
  std::ostringstream out;
  std::ostringstream err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

// One small corpus and its feature file, shared by the tests below.
class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new testing::TempDir("cli");
    const std::string d = dir_->path().string();
    ASSERT_EQ(RunTool({"synth", "--out", d + "/corpus", "--balanced", "--per-class", "12",
                   "--seed", "3"}).code, kExitOk);
    ASSERT_EQ(RunTool({"extract", "--manifest", d + "/corpus/manifest.csv", "--out",
                   d + "/features.csv"}).code, kExitOk);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::string Path(const std::string& name) { return (dir_->path() / name).string(); }

  static testing::TempDir* dir_;
};

testing::TempDir* CliTest::dir_ = nullptr;

TEST_F(CliTest, BalancedSynthWritesEqualClasses) {
  const Manifest m = LoadManifest(Path("corpus/manifest.csv"));
  ASSERT_EQ(m.entries.size(), 36u);
  int counts[3] = {};
  for (const auto& e : m.entries) ++counts[ClassIndex(e.label.cls)];
  EXPECT_EQ(counts[0], 12);
  EXPECT_EQ(counts[1], 12);
  EXPECT_EQ(counts[2], 12);
}

TEST_F(CliTest, ExtractIsReproducible) {
  ASSERT_EQ(RunTool({"extract", "--manifest", Path("corpus/manifest.csv"), "--out",
                 Path("again.csv"), "--jobs", "3"}).code, kExitOk);
  EXPECT_EQ(testing::ReadFile(Path("features.csv")), testing::ReadFile(Path("again.csv")));
  const Dataset d = ReadFeatureCsv(std::filesystem::path(Path("features.csv")));
  EXPECT_EQ(d.size(), 36u);
  EXPECT_EQ(d.dimension(), 23u);
}

TEST_F(CliTest, TrainAndEvalRoundTrip) {
  for (const std::string model : {"svm", "rf"}) {
    const std::string file = Path("m_" + model + ".bin");
    const Result train = RunTool({"train", "--features", Path("features.csv"), "--model", model,
                              "--out", file, "--trees", "20"});
    ASSERT_EQ(train.code, kExitOk) << train.err;
    EXPECT_TRUE(std::filesystem::exists(file + ".log"));
    const Result eval = RunTool({"eval", "--model", file, "--features", Path("features.csv"),
                             "--out-dir", Path("eval_" + model)});
    ASSERT_EQ(eval.code, kExitOk) << eval.err;
    EXPECT_NE(eval.out.find("accuracy="), std::string::npos);
    const auto confusion = ParseConfusionCsv(
        testing::ReadFile(Path("eval_" + model + "/confusion_" + model + ".csv")));
    EXPECT_EQ(confusion.total(), 11);  // 36 rows at ratio 0.7 leave 11
  }
}

TEST_F(CliTest, ForestTrainingIsByteReproducible) {
  for (const std::string name : {"a.bin", "b.bin"}) {
    ASSERT_EQ(RunTool({"train", "--features", Path("features.csv"), "--model", "rf", "--out",
                   Path(name), "--trees", "15", "--jobs", name == "a.bin" ? "1" : "4"})
                  .code,
              kExitOk);
  }
  EXPECT_EQ(testing::ReadFile(Path("a.bin")), testing::ReadFile(Path("b.bin")));
}

TEST_F(CliTest, DimensionMismatchIsDataError) {
  ASSERT_EQ(RunTool({"extract", "--manifest", Path("corpus/manifest.csv"), "--out",
                 Path("small.csv"), "--n-mfcc", "9", "--no-extras"}).code,
            kExitOk);
  ASSERT_EQ(RunTool({"train", "--features", Path("features.csv"), "--model", "rf", "--out",
                 Path("dim.bin"), "--trees", "5"}).code,
            kExitOk);
  const Result r = RunTool({"eval", "--model", Path("dim.bin"), "--test", Path("small.csv"),
                        "--out-dir", Path("dim_eval")});
  EXPECT_EQ(r.code, kExitDataError);
  EXPECT_NE(r.err.find("23"), std::string::npos);
}

TEST_F(CliTest, SweepWritesReports) {
  const Result r = RunTool({"sweep", "--manifest", Path("corpus/manifest.csv"), "--out-dir",
                        Path("sweep"), "--models", "rf", "--nmel", "5,20", "--trees", "10"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* f : {"report.csv", "bars.csv", "confusion_rf_n5.csv", "confusion_rf_n20.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(Path(std::string("sweep/") + f))) << f;
  }
  const Result c = RunTool({"compare", "--manifest", Path("corpus/manifest.csv"), "--out-dir",
                        Path("compare"), "--models", "svm"});
  ASSERT_EQ(c.code, kExitOk) << c.err;
  EXPECT_TRUE(std::filesystem::exists(Path("compare/confusion_svm.csv")));
}

TEST(CliExitTest, UsageErrors) {
  EXPECT_EQ(RunTool({}).code, kExitUsage);
  EXPECT_EQ(RunTool({"extract", "--manifest", "m.csv", "--out", "x.csv", "--n-mfcc", "0"}).code,
            kExitUsage);
  EXPECT_EQ(RunTool({"extract", "--manifest", "m.csv", "--out", "x.csv", "--bogus"}).code,
            kExitUsage);
  EXPECT_EQ(RunTool({"train", "--features", "f.csv", "--out", "m.bin", "--model", "knn"}).code,
            kExitUsage);
  EXPECT_EQ(RunTool({"frobnicate"}).code, kExitUsage);
}

TEST(CliExitTest, HelpSucceedsForEverySubcommand) {
  EXPECT_EQ(RunTool({"--help"}).code, kExitOk);
  for (const char* sub : {"synth", "extract", "train", "eval", "sweep", "compare"}) {
    const Result r = RunTool({sub, "--help"});
    EXPECT_EQ(r.code, kExitOk) << sub;
    EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
  }
}

TEST(CliExitTest, DataErrors) {
  testing::TempDir dir("cli_err");
  { std::ofstream(dir / "blocker") << "x"; }
  EXPECT_EQ(RunTool({"synth", "--out", (dir / "blocker").string() + "/sub", "--counts", "1,1,1"})
                .code,
            kExitDataError);
  EXPECT_EQ(RunTool({"extract", "--manifest", (dir / "missing.csv").string(), "--out",
                 (dir / "f.csv").string()}).code,
            kExitDataError);
  { std::ofstream(dir / "bad.csv") << "path,speaker,label,sublevel\nx.wav,s,fluent,\n"; }
  const Result r = RunTool({"extract", "--manifest", (dir / "bad.csv").string(), "--out",
                        (dir / "f.csv").string()});
  EXPECT_EQ(r.code, kExitDataError);
  EXPECT_NE(r.err.find("row 1: unknown label 'fluent'"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace fluency
