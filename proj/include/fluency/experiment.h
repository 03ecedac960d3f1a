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

#ifndef FLUENCY_EXPERIMENT_H_
#define FLUENCY_EXPERIMENT_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "fluency/dataset.h"
#include "fluency/metrics.h"
#include "fluency/model.h"
#include "fluency/split.h"

namespace fluency {

struct ExperimentConfig {
  std::vector<ModelKind> models = {ModelKind::kSvm, ModelKind::kForest,
                                   ModelKind::kMlp};
  std::vector<int> nmel_values = {5, 10, 12, 20};  // sweep columns
  int n_mfcc = 20;                                 // compare base
  double ratio = kDefaultTrainRatio;
  uint64_t seed = 42;
  bool stratified = false;
  int repeats = 1;
  int jobs = 1;
  // Hyperparameters per model kind; seeds are overridden per repeat.
  SvmParams svm;
  ForestParams forest;
  MlpParams mlp;
};

// One (model, feature config) entry. With repeats, accuracy is the mean and
// the confusion counts are summed over repeats.
struct ReportCell {
  ModelKind model = ModelKind::kSvm;
  int n_mfcc = 0;
  bool extras = false;
  double accuracy = 0.0;
  double accuracy_std = 0.0;
  double train_seconds = 0.0;
  ConfusionMatrix confusion;
  bool converged = true;  // false when an MLP loss never went down
  std::optional<std::string> error;
};

struct ExperimentReport {
  std::string kind;  // "sweep" or "compare"
  int repeats = 1;
  // key=value pairs written as leading '#' lines of report.csv.
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<ReportCell> cells;

  bool ok() const;
  const ReportCell* Find(ModelKind model, int n_mfcc, bool extras) const;
};

// Seed used for the split and the models in repeat r (r = 0 is the master
// seed itself).
uint64_t RepeatSeed(uint64_t seed, int repeat);

Split MakeSplit(const Dataset& dataset, double ratio, uint64_t seed, bool stratified);

// Trains every model on every n_mfcc (extras off) with one split per
// repeat shared by all cells. `dataset` must carry a config with at least
// max(nmel_values) coefficients. A failing cell records its error; the
// remaining cells still run.
ExperimentReport SweepNmel(const Dataset& dataset, const ExperimentConfig& config);

// Baseline (n_mfcc only) and extras (n_mfcc + ZCR, RMSE, SF) per model.
ExperimentReport CompareExtras(const Dataset& dataset, const ExperimentConfig& config);

// Long format: model,n_mfcc,extras,accuracy,train_seconds and, with
// repeats, accuracy_std. train_seconds is left empty unless with_timing.
void WriteReportCsv(std::ostream& out, const ExperimentReport& report,
                    bool with_timing = false);
// Sweep: model plus one column per n_mfcc. Compare: model,baseline,extras.
void WriteBarsCsv(std::ostream& out, const ExperimentReport& report);
// Sweep: confusion_<model>_n<k>.csv; compare: confusion_<model>.csv for the
// extras cells. Returns the written paths.
std::vector<std::filesystem::path> WriteConfusionFiles(
    const std::filesystem::path& dir, const ExperimentReport& report);

// Text table shaped like the usual accuracy table (percent, two decimals).
std::string FormatReportTable(const ExperimentReport& report);

}  // namespace fluency

#endif  // FLUENCY_EXPERIMENT_H_
