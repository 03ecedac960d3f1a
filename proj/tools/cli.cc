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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "fluency/csv.h"
#include "fluency/dataset.h"
#include "fluency/errors.h"
#include "fluency/experiment.h"
#include "fluency/metrics.h"
#include "fluency/model.h"
#include "fluency/parallel.h"
#include "fluency/split.h"
#include "fluency/synth.h"

namespace fluency {
namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  uint64_t seed = 42;
  int jobs = DefaultJobs();
};

struct HyperFlags {
  double c = 1.0;
  double gamma = 0.0;
  int trees = 100;
  int max_features = 0;
  int epochs = 200;
  int batch_size = 32;
  double lr = 1e-3;
  std::string hidden = "512,512";
};

struct SplitFlags {
  double ratio = kDefaultTrainRatio;
  bool stratified = false;
};

struct FeatureFlags {
  int n_mfcc = 20;
  bool extras = true;
  int n_fft = 2048;
  int hop = 512;
  int n_mels = 128;
  double segment_seconds = kDefaultSegmentSeconds;
  bool keep_partial = false;
};

void AddCommon(CLI::App* app, CommonFlags* f) {
  app->add_option("--seed", f->seed, "Seed for every randomized step")
      ->capture_default_str();
  app->add_option("--jobs", f->jobs, "Worker threads (results do not depend on it)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void AddHyper(CLI::App* app, HyperFlags* f) {
  app->add_option("--c", f->c, "SVM soft-margin constant")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--gamma", f->gamma, "RBF gamma (0 selects 1/dimension)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app->add_option("--trees", f->trees, "Random-forest size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--max-features", f->max_features,
                  "Features tried per split (0 selects ceil(sqrt(d)))")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app->add_option("--epochs", f->epochs, "MLP epochs")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--batch-size", f->batch_size, "MLP mini-batch size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--lr", f->lr, "MLP Adam learning rate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--hidden", f->hidden, "MLP hidden layer widths, comma separated")
      ->capture_default_str();
}

void AddSplit(CLI::App* app, SplitFlags* f) {
  app->add_option("--ratio", f->ratio, "Training fraction")->capture_default_str();
  app->add_flag("--stratified", f->stratified, "Keep class proportions in both parts");
}

void AddFeatures(CLI::App* app, FeatureFlags* f, bool with_n_mfcc) {
  if (with_n_mfcc) {
    app->add_option("--n-mfcc", f->n_mfcc, "MFCC coefficients per segment")
        ->capture_default_str()
        ->check(CLI::Range(1, 128));
    app->add_flag("--extras,!--no-extras", f->extras,
                  "Append ZCR, RMSE and spectral flux (default on)");
  }
  app->add_option("--n-fft", f->n_fft, "STFT size")->capture_default_str();
  app->add_option("--hop", f->hop, "STFT hop")->capture_default_str();
  app->add_option("--n-mels", f->n_mels, "Mel filters")->capture_default_str();
  app->add_option("--segment-seconds", f->segment_seconds, "Segment length")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_flag("--keep-partial", f->keep_partial,
                "Zero-pad and keep a trailing partial segment");
}

csv::Row SplitList(const std::string& text) {
  const auto rows = csv::Parse(text);
  return rows.empty() ? csv::Row{} : rows.front();
}

std::vector<int> ParseIntList(const std::string& text, const char* what) {
  std::vector<int> out;
  for (const std::string& item : SplitList(text)) {
    try {
      size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad ") + what + " value '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string("empty ") + what + " list");
  return out;
}

std::vector<ModelKind> ParseModels(const std::string& text) {
  std::vector<ModelKind> out;
  for (const std::string& item : SplitList(text)) {
    const auto kind = ParseModelKind(item);
    if (!kind) throw ConfigError("unknown model '" + item + "' (svm, rf, mlp)");
    out.push_back(*kind);
  }
  if (out.empty()) throw ConfigError("empty model list");
  return out;
}

FeatureConfig MakeFeatureConfig(const FeatureFlags& f, int n_mfcc, bool extras) {
  FeatureConfig config;
  config.n_mfcc = n_mfcc;
  config.include_extras = extras;
  config.n_fft = f.n_fft;
  config.hop = f.hop;
  config.n_mel_filters = f.n_mels;
  config.Validate();
  return config;
}

BuildOptions MakeBuildOptions(const FeatureFlags& f, int jobs) {
  BuildOptions options;
  options.segment_seconds = f.segment_seconds;
  options.drop_partial = !f.keep_partial;
  options.jobs = jobs;
  return options;
}

void ApplyHyper(const HyperFlags& h, uint64_t seed, SvmParams* svm,
                ForestParams* forest, MlpParams* mlp) {
  svm->c = h.c;
  svm->gamma = h.gamma;
  svm->seed = seed;
  forest->n_estimators = h.trees;
  forest->max_features = h.max_features;
  forest->seed = seed;
  mlp->hidden = ParseIntList(h.hidden, "--hidden");
  mlp->epochs = h.epochs;
  mlp->batch_size = h.batch_size;
  mlp->learning_rate = h.lr;
  mlp->seed = seed;
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DatasetError(dir.string() + ": " + ec.message());
}

template <typename Fn>
void WriteFile(const fs::path& path, Fn&& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DatasetError(path.string() + ": cannot open for writing");
  write(out);
  if (!out) throw DatasetError(path.string() + ": write failed");
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * v);
  return buf;
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  CommonFlags common;
  std::string out;
  bool balanced = false;
  int per_class = 0;
  std::string counts;
};

int CmdSynth(const SynthArgs& a, std::ostream& out) {
  CorpusOptions options;
  options.seed = a.common.seed;
  options.jobs = a.common.jobs;
  if (a.balanced || a.per_class > 0) {
    const int n = a.per_class > 0 ? a.per_class : 475;
    options.counts = {n, n, n};
  } else if (!a.counts.empty()) {
    const std::vector<int> c = ParseIntList(a.counts, "--counts");
    if (c.size() != kNumClasses) throw ConfigError("--counts needs three values");
    options.counts = {c[0], c[1], c[2]};
  }
  const Manifest manifest = GenerateCorpus(DefaultProfiles(), options, a.out);
  const fs::path manifest_path = fs::path(a.out) / kManifestFileName;
  int total = 0;
  for (int c : options.counts) total += c;
  out << "seed=" << a.common.seed << '\n';
  out << "manifest=" << manifest_path.string() << '\n';
  for (int c = 0; c < kNumClasses; ++c) {
    out << ClassName(ClassFromIndex(c)) << '=' << options.counts[static_cast<size_t>(c)]
        << '\n';
  }
  char minutes[32];
  std::snprintf(minutes, sizeof(minutes), "%.2f", total * options.segment_seconds / 60.0);
  out << "segments=" << total << " minutes=" << minutes << '\n';
  return kExitOk;
}

// ---- extract -------------------------------------------------------------

struct ExtractArgs {
  CommonFlags common;
  FeatureFlags features;
  std::string manifest;
  std::string out;
  std::string dump_spectrogram;
};

int CmdExtract(const ExtractArgs& a, std::ostream& out) {
  const FeatureConfig config =
      MakeFeatureConfig(a.features, a.features.n_mfcc, a.features.extras);
  const Manifest manifest = LoadManifest(a.manifest);
  BuildOptions options = MakeBuildOptions(a.features, a.common.jobs);
  if (!a.dump_spectrogram.empty()) {
    EnsureDir(a.dump_spectrogram);
    options.dump_spectrogram_dir = fs::path(a.dump_spectrogram);
  }
  const Dataset dataset = BuildDataset(manifest, config, options);
  WriteFeatureCsv(fs::path(a.out), dataset);
  const auto counts = dataset.ClassCounts();
  out << "rows=" << dataset.size() << " dimension=" << dataset.dimension()
      << " low=" << counts[0] << " intermediate=" << counts[1]
      << " high=" << counts[2] << '\n';
  out << "features=" << a.out << '\n';
  return kExitOk;
}

// ---- train / eval --------------------------------------------------------

struct TrainArgs {
  CommonFlags common;
  HyperFlags hyper;
  SplitFlags split;
  std::string features;
  std::string model = "svm";
  std::string out;
  bool all_rows = false;
};

Split SplitFor(const Dataset& dataset, const SplitRecord& record) {
  return MakeSplit(dataset, record.ratio, record.seed, record.stratified);
}

int CmdTrain(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const auto kind = ParseModelKind(a.model);
  if (!kind) throw ConfigError("unknown model '" + a.model + "' (svm, rf, mlp)");
  TrainingOptions options;
  options.kind = *kind;
  ApplyHyper(a.hyper, a.common.seed, &options.svm, &options.forest, &options.mlp);
  options.forest.jobs = a.common.jobs;

  const Dataset dataset = ReadFeatureCsv(fs::path(a.features));
  const Matrix x = dataset.FeatureMatrix();
  const std::vector<int> labels = dataset.Labels();
  SplitRecord record{a.split.ratio, a.common.seed, a.split.stratified, dataset.size()};
  std::vector<size_t> rows;
  if (a.all_rows) {
    record.ratio = 1.0;
    for (size_t i = 0; i < dataset.size(); ++i) rows.push_back(i);
  } else {
    rows = SplitFor(dataset, record).train_indices;
  }
  std::vector<int> y;
  for (size_t i : rows) y.push_back(labels[i]);

  const auto start = std::chrono::steady_clock::now();
  TrainedModel model = TrainedModel::Train(x.SelectRows(rows), y, options);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  model.split = record;
  model.Save(a.out);

  std::ostringstream log;
  log << "model=" << ModelKindName(*kind) << '\n'
      << "seed=" << a.common.seed << '\n'
      << "features=" << a.features << '\n'
      << "dimension=" << x.cols << '\n'
      << "train_rows=" << rows.size() << " of " << dataset.size() << '\n'
      << "train_seconds=" << csv::FormatDouble(seconds) << '\n';
  if (const auto* mlp = std::get_if<MlpModel>(&model.model())) {
    log << "loss_initial=" << csv::FormatDouble(mlp->loss_history().front()) << '\n'
        << "loss_final=" << csv::FormatDouble(mlp->loss_history().back()) << '\n';
    if (!mlp->loss_decreased()) {
      err << "warning: ConvergenceWarning: training loss never fell below its "
             "initial value\n";
    }
  }
  if (const auto* svm = std::get_if<SvmModel>(&model.model())) {
    for (const BinarySvm& p : svm->pairs()) {
      log << "pair=" << p.first_class << "/" << p.second_class
          << " support_vectors=" << p.alphas.size() << " iterations=" << p.iterations
          << '\n';
    }
  }
  log << "model_file=" << a.out << '\n';
  WriteFile(a.out + ".log", [&](std::ostream& f) { f << log.str(); });
  out << log.str();
  return kExitOk;
}

struct EvalArgs {
  std::string model;
  std::string features;
  std::string test;
  std::string out_dir = ".";
};

int CmdEval(const EvalArgs& a, std::ostream& out) {
  const bool separate_test = !a.test.empty();
  const Dataset dataset = ReadFeatureCsv(fs::path(separate_test ? a.test : a.features));
  const TrainedModel model = TrainedModel::Load(a.model, dataset.dimension());
  std::vector<size_t> rows;
  if (separate_test) {
    for (size_t i = 0; i < dataset.size(); ++i) rows.push_back(i);
  } else {
    if (model.split.ratio >= 1.0) {
      throw EvalError("model was trained on every row; pass --test with held-out features");
    }
    if (model.split.total_rows != dataset.size()) {
      throw EvalError("feature file has " + std::to_string(dataset.size()) +
                      " rows but the model was trained on a file with " +
                      std::to_string(model.split.total_rows));
    }
    rows = SplitFor(dataset, model.split).test_indices;
  }
  const std::vector<int> labels = dataset.Labels();
  std::vector<int> actual;
  for (size_t i : rows) actual.push_back(labels[i]);
  const std::vector<int> predicted =
      model.Predict(dataset.FeatureMatrix().SelectRows(rows));
  const double accuracy = Accuracy(predicted, actual);
  const ConfusionMatrix confusion = Confusion(predicted, actual);
  EnsureDir(a.out_dir);
  const fs::path path =
      fs::path(a.out_dir) / ("confusion_" + std::string(ModelKindName(model.kind())) + ".csv");
  WriteConfusionCsv(path, confusion);
  out << "test_rows=" << rows.size() << '\n';
  out << "accuracy=" << csv::FormatDouble(accuracy) << " (" << Percent(accuracy) << ")\n";
  out << "confusion=" << path.string() << '\n';
  return kExitOk;
}

// ---- sweep / compare -----------------------------------------------------

struct ExperimentArgs {
  CommonFlags common;
  HyperFlags hyper;
  SplitFlags split;
  FeatureFlags features;
  std::string manifest;
  std::string out_dir = ".";
  std::string nmel = "5,10,12,20";
  std::string models = "svm,rf,mlp";
  int repeats = 1;
  bool timing = false;
};

int CmdExperiment(const ExperimentArgs& a, bool sweep, std::ostream& out,
                  std::ostream& err) {
  ExperimentConfig config;
  config.models = ParseModels(a.models);
  config.nmel_values = ParseIntList(a.nmel, "--nmel");
  config.n_mfcc = a.features.n_mfcc;
  config.ratio = a.split.ratio;
  config.stratified = a.split.stratified;
  config.seed = a.common.seed;
  config.repeats = a.repeats;
  config.jobs = a.common.jobs;
  ApplyHyper(a.hyper, a.common.seed, &config.svm, &config.forest, &config.mlp);
  if (!(config.ratio > 0.0 && config.ratio < 1.0)) {
    throw ConfigError("--ratio must lie in (0, 1)");
  }

  // One extraction at the largest coefficient count; smaller configs are
  // column subsets of it.
  const int max_n = sweep ? *std::max_element(config.nmel_values.begin(),
                                              config.nmel_values.end())
                          : config.n_mfcc;
  const FeatureConfig feature_config = MakeFeatureConfig(a.features, max_n, true);
  const Manifest manifest = LoadManifest(a.manifest);
  const Dataset dataset =
      BuildDataset(manifest, feature_config, MakeBuildOptions(a.features, a.common.jobs));

  ExperimentReport report = sweep ? SweepNmel(dataset, config) : CompareExtras(dataset, config);
  report.header.insert(report.header.begin(), {"command", sweep ? "sweep" : "compare"});
  report.header.emplace_back("manifest", fs::path(a.manifest).filename().string());

  EnsureDir(a.out_dir);
  const fs::path dir(a.out_dir);
  WriteFile(dir / "report.csv",
            [&](std::ostream& f) { WriteReportCsv(f, report, a.timing); });
  WriteFile(dir / "bars.csv", [&](std::ostream& f) { WriteBarsCsv(f, report); });
  WriteConfusionFiles(dir, report);

  out << "seed=" << config.seed << '\n';
  out << FormatReportTable(report);
  out << "report=" << (dir / "report.csv").string() << '\n';
  for (const ReportCell& c : report.cells) {
    if (!c.converged) {
      err << "warning: ConvergenceWarning: " << ModelKindName(c.model)
          << " n_mfcc=" << c.n_mfcc << " loss never fell below its initial value\n";
    }
  }
  if (!report.ok()) {
    for (const ReportCell& c : report.cells) {
      if (c.error) err << "error: " << *c.error << '\n';
    }
    return kExitDataError;
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Speaker fluency classification: corpus synthesis, feature "
               "extraction, training and evaluation."};
  app.name(args.empty() ? "fluency" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
  AddCommon(synth_cmd, &synth.common);
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_flag("--balanced", synth.balanced, "Same count for every class");
  synth_cmd->add_option("--per-class", synth.per_class,
                        "Segments per class (implies --balanced; default 475)")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--counts", synth.counts,
                        "Segments for low,intermediate,high (default 374,618,432)");

  ExtractArgs extract;
  CLI::App* extract_cmd = app.add_subcommand("extract", "Manifest to feature CSV");
  AddCommon(extract_cmd, &extract.common);
  AddFeatures(extract_cmd, &extract.features, true);
  extract_cmd->add_option("--manifest", extract.manifest, "Manifest CSV")->required();
  extract_cmd->add_option("--out", extract.out, "Feature CSV to write")->required();
  extract_cmd->add_option("--dump-spectrogram", extract.dump_spectrogram,
                          "Directory for per-segment power spectrogram CSVs");

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a classifier on a feature CSV");
  AddCommon(train_cmd, &train.common);
  AddHyper(train_cmd, &train.hyper);
  AddSplit(train_cmd, &train.split);
  train_cmd->add_option("--features", train.features, "Feature CSV")->required();
  train_cmd->add_option("--model", train.model, "svm, rf or mlp")
      ->capture_default_str()
      ->check(CLI::IsMember({"svm", "rf", "mlp"}));
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  train_cmd->add_flag("--all", train.all_rows, "Train on every row instead of the split");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score a model on held-out rows");
  eval_cmd->add_option("--model", eval.model, "Model file")->required();
  eval_cmd->add_option("--features", eval.features,
                       "Feature CSV the model was trained from (held-out split is used)");
  eval_cmd->add_option("--test", eval.test, "Separate test feature CSV (all rows used)");
  eval_cmd->add_option("--out-dir", eval.out_dir, "Directory for confusion_<model>.csv")
      ->capture_default_str();

  ExperimentArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Accuracy over MFCC counts");
  ExperimentArgs compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Accuracy with and without the extra features");
  for (auto [cmd, a] : {std::pair{sweep_cmd, &sweep}, std::pair{compare_cmd, &compare}}) {
    AddCommon(cmd, &a->common);
    AddHyper(cmd, &a->hyper);
    AddSplit(cmd, &a->split);
    AddFeatures(cmd, &a->features, false);
    cmd->add_option("--manifest", a->manifest, "Manifest CSV")->required();
    cmd->add_option("--out-dir", a->out_dir, "Directory for report.csv, bars.csv and "
                                            "confusion CSVs")
        ->capture_default_str();
    cmd->add_option("--models", a->models, "Comma-separated subset of svm,rf,mlp")
        ->capture_default_str();
    cmd->add_option("--repeats", a->repeats, "Independent splits; mean and std reported")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--timing", a->timing, "Fill the train_seconds column");
  }
  sweep_cmd->add_option("--nmel", sweep.nmel, "Comma-separated MFCC counts")
      ->capture_default_str();
  compare_cmd->add_option("--n-mfcc", compare.features.n_mfcc, "MFCC coefficients")
      ->capture_default_str()
      ->check(CLI::Range(1, 128));

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  if (argv.empty()) argv.push_back("fluency");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return CmdSynth(synth, out);
    if (extract_cmd->parsed()) return CmdExtract(extract, out);
    if (train_cmd->parsed()) return CmdTrain(train, out, err);
    if (eval_cmd->parsed()) {
      if (eval.features.empty() && eval.test.empty()) {
        throw ConfigError("eval needs --features or --test");
      }
      return CmdEval(eval, out);
    }
    if (sweep_cmd->parsed()) return CmdExperiment(sweep, true, out, err);
    if (compare_cmd->parsed()) return CmdExperiment(compare, false, out, err);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace fluency
