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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fluency/csv.h"
#include "fluency/errors.h"
#include "fluency/parallel.h"
#include "fluency/rng.h"

namespace fluency {
namespace {

constexpr uint64_t kRepeatStream = 0x726570;  // "rep"

struct CellSpec {
  ModelKind model;
  int n_mfcc;
  bool extras;
};

struct RunResult {
  double accuracy = 0.0;
  double seconds = 0.0;
  ConfusionMatrix confusion;
  bool converged = true;
  std::optional<std::string> error;
};

std::string JoinInts(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + std::to_string(v[i]);
  return out;
}

TrainingOptions OptionsFor(const ExperimentConfig& config, ModelKind kind,
                           uint64_t seed) {
  TrainingOptions options;
  options.kind = kind;
  options.svm = config.svm;
  options.svm.seed = seed;
  options.svm.jobs = 1;
  options.forest = config.forest;
  options.forest.seed = seed;
  options.forest.jobs = 1;
  options.mlp = config.mlp;
  options.mlp.seed = seed;
  return options;
}

void Validate(const Dataset& dataset, const ExperimentConfig& config) {
  if (config.models.empty()) throw ConfigError("no models selected");
  if (config.repeats < 1) throw ConfigError("repeats must be at least 1");
  if (!dataset.config) throw DatasetError("experiment needs a dataset with a known feature layout");
}

std::vector<std::pair<std::string, std::string>> BaseHeader(
    const Dataset& dataset, const ExperimentConfig& config, const Split& first) {
  std::vector<std::pair<std::string, std::string>> h;
  std::string models;
  for (size_t i = 0; i < config.models.size(); ++i) {
    models += (i ? ";" : "") + std::string(ModelKindName(config.models[i]));
  }
  const auto counts = dataset.ClassCounts();
  h.emplace_back("seed", std::to_string(config.seed));
  h.emplace_back("ratio", csv::FormatDouble(config.ratio));
  h.emplace_back("stratified", config.stratified ? "1" : "0");
  h.emplace_back("repeats", std::to_string(config.repeats));
  h.emplace_back("models", models);
  h.emplace_back("rows", std::to_string(dataset.size()));
  h.emplace_back("class_counts", std::to_string(counts[0]) + ";" +
                                     std::to_string(counts[1]) + ";" +
                                     std::to_string(counts[2]));
  h.emplace_back("train_rows", std::to_string(first.train_indices.size()));
  h.emplace_back("test_rows", std::to_string(first.test_indices.size()));
  h.emplace_back("features", dataset.config->ToString());
  h.emplace_back("svm", "c=" + csv::FormatDouble(config.svm.c) +
                            " gamma=" + csv::FormatDouble(config.svm.gamma) +
                            " tol=" + csv::FormatDouble(config.svm.tolerance));
  h.emplace_back("rf", "trees=" + std::to_string(config.forest.n_estimators) +
                           " max_features=" + std::to_string(config.forest.max_features));
  h.emplace_back("mlp", "hidden=" + JoinInts(config.mlp.hidden) +
                            " epochs=" + std::to_string(config.mlp.epochs) +
                            " batch=" + std::to_string(config.mlp.batch_size) +
                            " lr=" + csv::FormatDouble(config.mlp.learning_rate));
  if (dataset.size() == 1424) {
    h.emplace_back("note",
                   "N=1424 at ratio 0.7 gives 997/427; a 926/498 split would "
                   "correspond to a ratio of about 0.65");
  }
  return h;
}

ExperimentReport Run(const Dataset& dataset, const ExperimentConfig& config,
                     const std::string& kind, const std::vector<CellSpec>& specs) {
  const std::vector<int> labels = dataset.Labels();
  std::vector<Split> splits;
  for (int r = 0; r < config.repeats; ++r) {
    splits.push_back(MakeSplit(dataset, config.ratio, RepeatSeed(config.seed, r),
                               config.stratified));
  }

  // One projection per distinct feature config, computed up front.
  std::map<std::pair<int, bool>, Matrix> features;
  for (const CellSpec& s : specs) {
    const auto key = std::make_pair(s.n_mfcc, s.extras);
    if (!features.count(key)) {
      features.emplace(key, dataset.Project(s.n_mfcc, s.extras).FeatureMatrix());
    }
  }

  const auto n_repeats = static_cast<size_t>(config.repeats);
  std::vector<RunResult> runs(specs.size() * n_repeats);
  ParallelFor(runs.size(), config.jobs, [&](size_t task) {
    const CellSpec& spec = specs[task / n_repeats];
    const int repeat = static_cast<int>(task % n_repeats);
    const Split& split = splits[static_cast<size_t>(repeat)];
    RunResult& result = runs[task];
    try {
      const Matrix& x = features.at({spec.n_mfcc, spec.extras});
      std::vector<int> y_train;
      std::vector<int> y_test;
      for (size_t i : split.train_indices) y_train.push_back(labels[i]);
      for (size_t i : split.test_indices) y_test.push_back(labels[i]);
      const Matrix x_train = x.SelectRows(split.train_indices);
      const Matrix x_test = x.SelectRows(split.test_indices);

      const auto start = std::chrono::steady_clock::now();
      const TrainedModel model = TrainedModel::Train(
          x_train, y_train,
          OptionsFor(config, spec.model, RepeatSeed(config.seed, repeat)));
      result.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (const auto* mlp = std::get_if<MlpModel>(&model.model())) {
        result.converged = mlp->loss_decreased();
      }
      const std::vector<int> predicted = model.Predict(x_test);
      result.accuracy = Accuracy(predicted, y_test);
      result.confusion = Confusion(predicted, y_test);
    } catch (const std::exception& e) {
      result.error = std::string(ModelKindName(spec.model)) +
                     " n_mfcc=" + std::to_string(spec.n_mfcc) +
                     (spec.extras ? "+extras" : "") + ": " + e.what();
    }
  });

  ExperimentReport report;
  report.kind = kind;
  report.repeats = config.repeats;
  report.header = BaseHeader(dataset, config, splits.front());
  report.header.insert(report.header.begin(), {"experiment", kind});
  for (size_t c = 0; c < specs.size(); ++c) {
    ReportCell cell;
    cell.model = specs[c].model;
    cell.n_mfcc = specs[c].n_mfcc;
    cell.extras = specs[c].extras;
    std::vector<double> accs;
    for (size_t r = 0; r < n_repeats; ++r) {
      const RunResult& run = runs[c * n_repeats + r];
      if (run.error) {
        cell.error = run.error;
        break;
      }
      accs.push_back(run.accuracy);
      cell.train_seconds += run.seconds;
      cell.confusion += run.confusion;
      cell.converged = cell.converged && run.converged;
    }
    if (!cell.error) {
      double sum = 0.0;
      for (double a : accs) sum += a;
      cell.accuracy = sum / static_cast<double>(accs.size());
      if (accs.size() > 1) {
        double ss = 0.0;
        for (double a : accs) ss += (a - cell.accuracy) * (a - cell.accuracy);
        cell.accuracy_std = std::sqrt(ss / static_cast<double>(accs.size() - 1));
      }
      cell.train_seconds /= static_cast<double>(accs.size());
    }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

std::string NmelHeader(int n) { return "n" + std::to_string(n); }

}  // namespace

bool ExperimentReport::ok() const {
  return std::none_of(cells.begin(), cells.end(),
                      [](const ReportCell& c) { return c.error.has_value(); });
}

const ReportCell* ExperimentReport::Find(ModelKind model, int n_mfcc, bool extras) const {
  for (const ReportCell& c : cells) {
    if (c.model == model && c.n_mfcc == n_mfcc && c.extras == extras) return &c;
  }
  return nullptr;
}

uint64_t RepeatSeed(uint64_t seed, int repeat) {
  return repeat == 0 ? seed
                     : DeriveSeed(seed, {kRepeatStream, static_cast<uint64_t>(repeat)});
}

Split MakeSplit(const Dataset& dataset, double ratio, uint64_t seed, bool stratified) {
  if (stratified) {
    const std::vector<int> labels = dataset.Labels();
    return StratifiedSplit(labels, ratio, seed);
  }
  return SplitTrainTest(dataset.size(), ratio, seed);
}

ExperimentReport SweepNmel(const Dataset& dataset, const ExperimentConfig& config) {
  Validate(dataset, config);
  if (config.nmel_values.empty()) throw ConfigError("no n_mfcc values to sweep");
  std::vector<CellSpec> specs;
  for (ModelKind m : config.models) {
    for (int n : config.nmel_values) specs.push_back({m, n, false});
  }
  ExperimentReport report = Run(dataset, config, "sweep", specs);
  report.header.insert(report.header.begin() + 1, {"nmel", JoinInts(config.nmel_values)});
  return report;
}

ExperimentReport CompareExtras(const Dataset& dataset, const ExperimentConfig& config) {
  Validate(dataset, config);
  std::vector<CellSpec> specs;
  for (ModelKind m : config.models) {
    specs.push_back({m, config.n_mfcc, false});
    specs.push_back({m, config.n_mfcc, true});
  }
  ExperimentReport report = Run(dataset, config, "compare", specs);
  report.header.insert(report.header.begin() + 1,
                       {"n_mfcc", std::to_string(config.n_mfcc)});
  return report;
}

void WriteReportCsv(std::ostream& out, const ExperimentReport& report,
                    bool with_timing) {
  for (const auto& [key, value] : report.header) out << "# " << key << '=' << value << "\r\n";
  csv::Row header = {"model", "n_mfcc", "extras", "accuracy", "train_seconds"};
  const bool with_std = report.repeats > 1;
  if (with_std) header.emplace_back("accuracy_std");
  csv::WriteRow(out, header);
  for (const ReportCell& c : report.cells) {
    if (c.error) continue;
    csv::Row row = {std::string(ModelKindName(c.model)), std::to_string(c.n_mfcc),
                    c.extras ? "1" : "0", csv::FormatDouble(c.accuracy),
                    with_timing ? csv::FormatDouble(c.train_seconds) : ""};
    if (with_std) row.push_back(csv::FormatDouble(c.accuracy_std));
    csv::WriteRow(out, row);
  }
}

void WriteBarsCsv(std::ostream& out, const ExperimentReport& report) {
  std::vector<ModelKind> models;
  std::vector<std::pair<int, bool>> columns;
  for (const ReportCell& c : report.cells) {
    if (std::find(models.begin(), models.end(), c.model) == models.end()) {
      models.push_back(c.model);
    }
    const auto col = std::make_pair(c.n_mfcc, c.extras);
    if (std::find(columns.begin(), columns.end(), col) == columns.end()) {
      columns.push_back(col);
    }
  }
  csv::Row header = {"model"};
  for (const auto& [n, extras] : columns) {
    header.push_back(report.kind == "compare" ? (extras ? "extras" : "baseline")
                                              : NmelHeader(n));
  }
  csv::WriteRow(out, header);
  for (ModelKind m : models) {
    csv::Row row = {std::string(ModelKindName(m))};
    for (const auto& [n, extras] : columns) {
      const ReportCell* c = report.Find(m, n, extras);
      row.push_back(c && !c->error ? csv::FormatDouble(c->accuracy) : "");
    }
    csv::WriteRow(out, row);
  }
}

std::vector<std::filesystem::path> WriteConfusionFiles(
    const std::filesystem::path& dir, const ExperimentReport& report) {
  std::vector<std::filesystem::path> written;
  for (const ReportCell& c : report.cells) {
    if (c.error) continue;
    std::string name = "confusion_" + std::string(ModelKindName(c.model));
    if (report.kind == "compare") {
      if (!c.extras) continue;
    } else {
      name += "_" + NmelHeader(c.n_mfcc);
      if (c.extras) name += "_extras";
    }
    const std::filesystem::path path = dir / (name + ".csv");
    WriteConfusionCsv(path, c.confusion);
    written.push_back(path);
  }
  return written;
}

std::string FormatReportTable(const ExperimentReport& report) {
  std::vector<ModelKind> models;
  std::vector<std::pair<int, bool>> columns;
  for (const ReportCell& c : report.cells) {
    if (std::find(models.begin(), models.end(), c.model) == models.end()) {
      models.push_back(c.model);
    }
    const auto col = std::make_pair(c.n_mfcc, c.extras);
    if (std::find(columns.begin(), columns.end(), col) == columns.end()) {
      columns.push_back(col);
    }
  }
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-6s", "model");
  out << buf;
  for (const auto& [n, extras] : columns) {
    const std::string name = report.kind == "compare"
                                 ? (extras ? "+extras" : "baseline")
                                 : "n_mfcc=" + std::to_string(n);
    std::snprintf(buf, sizeof(buf), " %10s", name.c_str());
    out << buf;
  }
  out << '\n';
  for (ModelKind m : models) {
    std::snprintf(buf, sizeof(buf), "%-6s", std::string(ModelKindName(m)).c_str());
    out << buf;
    for (const auto& [n, extras] : columns) {
      const ReportCell* c = report.Find(m, n, extras);
      if (c && !c->error) {
        std::snprintf(buf, sizeof(buf), " %10.2f", 100.0 * c->accuracy);
      } else {
        std::snprintf(buf, sizeof(buf), " %10s", "failed");
      }
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace fluency
