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

#include "fluency/experiment.h"

#include <sstream>

#include <gtest/gtest.h>

#include "fluency/csv.h"
#include "test_util.h"

namespace fluency {
namespace {

// 23-column dataset shaped like extracted features: the first columns
// separate the classes, later ones are noise.
Dataset BlobDataset(int per_class, uint64_t seed) {
  std::vector<std::vector<double>> centers(3, std::vector<double>(23, 0.0));
  for (int c = 0; c < 3; ++c) {
    centers[c][0] = 2.0 * c;
    centers[c][3] = c == 1 ? 1.5 : 0.0;
    centers[c][21] = 0.5 * c;
  }
  const auto b = testing::MakeBlobs(centers, 0.6, per_class, seed);
  Dataset d;
  d.config = FeatureConfig{};
  for (size_t r = 0; r < b.x.rows; ++r) {
    Example e;
    e.source = "blob";
    e.index = static_cast<int>(r);
    e.label.cls = ClassFromIndex(b.y[r]);
    e.features.assign(b.x.row(r).begin(), b.x.row(r).end());
    d.examples.push_back(e);
  }
  return d;
}

ExperimentConfig SmallConfig() {
  ExperimentConfig c;
  c.forest.n_estimators = 10;
  c.mlp.hidden = {16, 16};
  c.mlp.epochs = 100;
  return c;
}

TEST(ExperimentTest, SweepHasOneCellPerModelAndSize) {
  const Dataset d = BlobDataset(30, 1);
  const ExperimentReport r = SweepNmel(d, SmallConfig());
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.kind, "sweep");
  ASSERT_EQ(r.cells.size(), 12u);
  const Split split = MakeSplit(d, 0.7, 42, false);
  for (const ReportCell& cell : r.cells) {
    EXPECT_FALSE(cell.extras);
    EXPECT_EQ(cell.confusion.total(), static_cast<int64_t>(split.test_indices.size()));
    EXPECT_EQ(cell.accuracy, cell.confusion.accuracy());
    EXPECT_GT(cell.accuracy, 0.5) << ModelKindName(cell.model) << " n" << cell.n_mfcc;
  }
}

TEST(ExperimentTest, CompareBaselineMatchesSweepColumn) {
  const Dataset d = BlobDataset(30, 2);
  const ExperimentConfig config = SmallConfig();
  const ExperimentReport sweep = SweepNmel(d, config);
  const ExperimentReport compare = CompareExtras(d, config);
  ASSERT_EQ(compare.cells.size(), 6u);
  for (ModelKind kind : config.models) {
    const ReportCell* base = compare.Find(kind, 20, false);
    const ReportCell* extras = compare.Find(kind, 20, true);
    const ReportCell* col = sweep.Find(kind, 20, false);
    ASSERT_TRUE(base && extras && col);
    EXPECT_EQ(base->accuracy, col->accuracy);
    EXPECT_EQ(base->confusion, col->confusion);
  }
}

TEST(ExperimentTest, ThreadCountDoesNotChangeResults) {
  const Dataset d = BlobDataset(25, 3);
  ExperimentConfig config = SmallConfig();
  config.repeats = 2;
  config.jobs = 1;
  const ExperimentReport one = CompareExtras(d, config);
  config.jobs = 3;
  const ExperimentReport three = CompareExtras(d, config);
  std::ostringstream a;
  std::ostringstream b;
  WriteReportCsv(a, one);
  WriteReportCsv(b, three);
  EXPECT_EQ(a.str(), b.str());
  for (size_t i = 0; i < one.cells.size(); ++i) {
    EXPECT_EQ(one.cells[i].confusion, three.cells[i].confusion);
  }
}

TEST(ExperimentTest, RepeatsUseDistinctSplits) {
  EXPECT_EQ(RepeatSeed(42, 0), 42u);
  EXPECT_NE(RepeatSeed(42, 1), 42u);
  const Dataset d = BlobDataset(20, 4);
  EXPECT_NE(MakeSplit(d, 0.7, RepeatSeed(42, 0), false).test_indices,
            MakeSplit(d, 0.7, RepeatSeed(42, 1), false).test_indices);
  ExperimentConfig config = SmallConfig();
  config.models = {ModelKind::kForest};
  config.repeats = 3;
  const ExperimentReport r = CompareExtras(d, config);
  for (const ReportCell& cell : r.cells) {
    EXPECT_EQ(cell.confusion.total(), 3 * 18);
  }
}

TEST(ExperimentTest, FailingCellIsRecorded) {
  const Dataset d = BlobDataset(20, 5);
  ExperimentConfig config = SmallConfig();
  config.forest.n_estimators = 0;
  const ExperimentReport r = CompareExtras(d, config);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.Find(ModelKind::kForest, 20, true)->error.has_value());
  EXPECT_FALSE(r.Find(ModelKind::kSvm, 20, true)->error.has_value());
}

TEST(ExperimentTest, WritersProduceExpectedColumns) {
  const Dataset d = BlobDataset(20, 6);
  ExperimentConfig config = SmallConfig();
  config.models = {ModelKind::kSvm};
  config.nmel_values = {5, 20};
  const ExperimentReport sweep = SweepNmel(d, config);

  std::ostringstream report;
  WriteReportCsv(report, sweep);
  const auto rows = csv::Parse(report.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (csv::Row{"model", "n_mfcc", "extras", "accuracy", "train_seconds"}));
  EXPECT_EQ(rows[1][0], "svm");
  EXPECT_EQ(rows[1][1], "5");
  EXPECT_EQ(rows[1][4], "");
  EXPECT_NE(report.str().find("# experiment=sweep"), std::string::npos);

  std::ostringstream bars;
  WriteBarsCsv(bars, sweep);
  EXPECT_EQ(csv::Parse(bars.str())[0], (csv::Row{"model", "n5", "n20"}));

  const ExperimentReport compare = CompareExtras(d, config);
  std::ostringstream cbars;
  WriteBarsCsv(cbars, compare);
  EXPECT_EQ(csv::Parse(cbars.str())[0], (csv::Row{"model", "baseline", "extras"}));

  testing::TempDir dir("exp");
  const auto files = WriteConfusionFiles(dir.path(), compare);
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(files[0].filename(), "confusion_svm.csv");
  EXPECT_EQ(ParseConfusionCsv(testing::ReadFile(files[0])),
            compare.Find(ModelKind::kSvm, 20, true)->confusion);
  EXPECT_EQ(WriteConfusionFiles(dir.path(), sweep).size(), 2u);
  EXPECT_NE(FormatReportTable(compare).find("svm"), std::string::npos);
}

}  // namespace
}  // namespace fluency
