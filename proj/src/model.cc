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

#include "fluency/model.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <type_traits>

#include "fluency/errors.h"

namespace fluency {
namespace {

constexpr char kMagic[8] = {'F', 'L', 'N', 'C', 'Y', 'M', 'D', 'L'};
constexpr uint32_t kFormatVersion = 1;

class Writer {
 public:
  void U8(uint8_t v) { out_.push_back(v); }
  void U32(uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void U64(uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void I32(int32_t v) { U32(static_cast<uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void F64s(std::span<const double> v) {
    U64(v.size());
    for (double d : v) F64(d);
  }
  void Bytes(const void* p, size_t n) {
    const auto* b = static_cast<const uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  std::vector<uint8_t> Take() { return std::move(out_); }

 private:
  std::vector<uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> in) : in_(in) {}

  uint8_t U8() { return Need(1)[0]; }
  uint32_t U32() {
    const uint8_t* p = Need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
    return v;
  }
  uint64_t U64() {
    const uint8_t* p = Need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return v;
  }
  int32_t I32() { return static_cast<int32_t>(U32()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::vector<double> F64s() {
    const uint64_t n = Count(8);
    std::vector<double> v(n);
    for (double& d : v) d = F64();
    return v;
  }
  // Element count guarded against the remaining input size.
  uint64_t Count(size_t element_bytes) {
    const uint64_t n = U64();
    if (n > (in_.size() - pos_) / std::max<size_t>(element_bytes, 1)) {
      throw ModelFormatError("model file truncated or corrupt (count " +
                             std::to_string(n) + ")");
    }
    return n;
  }
  const uint8_t* Need(size_t n) {
    if (in_.size() - pos_ < n) throw ModelFormatError("model file truncated");
    const uint8_t* p = in_.data() + pos_;
    pos_ += n;
    return p;
  }
  bool AtEnd() const { return pos_ == in_.size(); }
  size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const uint8_t> in_;
  size_t pos_ = 0;
};

void WriteMatrix(Writer& w, const Matrix& m) {
  w.U64(m.rows);
  w.U64(m.cols);
  for (double v : m.data) w.F64(v);
}

Matrix ReadMatrix(Reader& r) {
  const uint64_t rows = r.U64();
  const uint64_t cols = r.U64();
  if (cols != 0 && rows > r.remaining() / 8 / cols) {
    throw ModelFormatError("matrix larger than remaining input");
  }
  Matrix m(rows, cols);
  for (double& v : m.data) v = r.F64();
  return m;
}

void WriteEigen(Writer& w, const Eigen::MatrixXd& m) {
  w.U64(static_cast<uint64_t>(m.rows()));
  w.U64(static_cast<uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.size(); ++i) w.F64(m.data()[i]);
}

Eigen::MatrixXd ReadEigen(Reader& r) {
  const uint64_t rows = r.U64();
  const uint64_t cols = r.U64();
  if (cols != 0 && rows > r.remaining() / 8 / cols) {
    throw ModelFormatError("matrix larger than remaining input");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = r.F64();
  return m;
}

void WriteSvm(Writer& w, const SvmModel& svm) {
  w.F64(svm.c());
  w.F64(svm.gamma());
  w.U64(svm.pairs().size());
  for (const BinarySvm& p : svm.pairs()) {
    w.I32(p.first_class);
    w.I32(p.second_class);
    w.F64(p.rho);
    w.F64(p.kkt_gap);
    w.U64(static_cast<uint64_t>(p.iterations));
    w.F64s(p.alphas);
    w.U64(p.signs.size());
    for (int s : p.signs) w.I32(s);
    WriteMatrix(w, p.support_vectors);
  }
}

SvmModel ReadSvm(Reader& r, size_t dim) {
  const double c = r.F64();
  const double gamma = r.F64();
  const uint64_t n_pairs = r.Count(1);
  std::vector<BinarySvm> pairs(n_pairs);
  for (BinarySvm& p : pairs) {
    p.first_class = r.I32();
    p.second_class = r.I32();
    p.rho = r.F64();
    p.kkt_gap = r.F64();
    p.iterations = static_cast<int64_t>(r.U64());
    p.alphas = r.F64s();
    const uint64_t n_signs = r.Count(4);
    p.signs.resize(n_signs);
    for (int& s : p.signs) s = r.I32();
    p.support_vectors = ReadMatrix(r);
    if (p.signs.size() != p.alphas.size() ||
        p.support_vectors.rows != p.alphas.size() ||
        (p.support_vectors.rows > 0 && p.support_vectors.cols != dim) ||
        p.first_class < 0 || p.first_class >= kNumClasses ||
        p.second_class < 0 || p.second_class >= kNumClasses) {
      throw ModelFormatError("inconsistent SVM pair");
    }
  }
  return SvmModel::FromParts(dim, gamma, c, std::move(pairs));
}

void WriteForest(Writer& w, const ForestModel& forest) {
  w.I32(forest.params().n_estimators);
  w.I32(forest.params().max_features);
  w.U64(forest.params().seed);
  w.U64(forest.trees().size());
  for (const DecisionTree& tree : forest.trees()) {
    w.U64(tree.nodes.size());
    for (const TreeNode& n : tree.nodes) {
      w.I32(n.feature);
      w.F64(n.threshold);
      w.I32(n.left);
      w.I32(n.right);
      for (int c : n.counts) w.I32(c);
    }
  }
}

ForestModel ReadForest(Reader& r, size_t dim) {
  ForestParams params;
  params.n_estimators = r.I32();
  params.max_features = r.I32();
  params.seed = r.U64();
  const uint64_t n_trees = r.Count(8);
  std::vector<DecisionTree> trees(n_trees);
  for (DecisionTree& tree : trees) {
    const uint64_t n_nodes = r.Count(28);
    tree.nodes.resize(n_nodes);
    for (TreeNode& n : tree.nodes) {
      n.feature = r.I32();
      n.threshold = r.F64();
      n.left = r.I32();
      n.right = r.I32();
      for (int& c : n.counts) c = r.I32();
    }
    for (const TreeNode& n : tree.nodes) {
      const auto size = static_cast<int>(tree.nodes.size());
      if (n.feature >= static_cast<int>(dim) ||
          (n.feature >= 0 && (n.left <= 0 || n.left >= size || n.right <= 0 ||
                              n.right >= size))) {
        throw ModelFormatError("inconsistent tree node");
      }
    }
    if (tree.nodes.empty()) throw ModelFormatError("empty tree");
  }
  return ForestModel::FromParts(dim, params, std::move(trees));
}

void WriteMlp(Writer& w, const MlpModel& mlp) {
  w.U64(mlp.layers().size());
  for (const auto& layer : mlp.layers()) {
    WriteEigen(w, layer.weights);
    WriteEigen(w, layer.bias);
  }
  w.F64s(mlp.loss_history());
}

MlpModel ReadMlp(Reader& r, size_t dim) {
  const uint64_t n_layers = r.Count(32);
  std::vector<MlpModel::Layer> layers(n_layers);
  Eigen::Index prev = static_cast<Eigen::Index>(dim);
  for (auto& layer : layers) {
    layer.weights = ReadEigen(r);
    const Eigen::MatrixXd bias = ReadEigen(r);
    if (layer.weights.cols() != prev || bias.cols() != 1 ||
        bias.rows() != layer.weights.rows()) {
      throw ModelFormatError("inconsistent MLP layer shapes");
    }
    layer.bias = bias.col(0);
    prev = layer.weights.rows();
  }
  if (prev != kNumClasses) throw ModelFormatError("MLP output must have 3 units");
  std::vector<double> history = r.F64s();
  return MlpModel::FromLayers(dim, std::move(layers), std::move(history));
}

}  // namespace

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kSvm:
      return "svm";
    case ModelKind::kForest:
      return "rf";
    case ModelKind::kMlp:
      return "mlp";
  }
  return "?";
}

std::optional<ModelKind> ParseModelKind(std::string_view name) {
  for (ModelKind k : {ModelKind::kSvm, ModelKind::kForest, ModelKind::kMlp}) {
    if (name == ModelKindName(k)) return k;
  }
  return std::nullopt;
}

TrainedModel TrainedModel::Train(const Matrix& x, std::span<const int> y,
                                 const TrainingOptions& options) {
  TrainedModel out;
  out.dimension_ = x.cols;
  Matrix prepared = x;
  if (options.standardize_enabled()) {
    out.standardizer_ = Standardizer::Fit(x);
    prepared = out.standardizer_->Apply(x);
  }
  switch (options.kind) {
    case ModelKind::kSvm:
      out.model_ = SvmModel::Train(prepared, y, options.svm);
      break;
    case ModelKind::kForest:
      out.model_ = ForestModel::Train(prepared, y, options.forest);
      break;
    case ModelKind::kMlp:
      out.model_ = MlpModel::Train(prepared, y, options.mlp);
      break;
  }
  return out;
}

ModelKind TrainedModel::kind() const {
  switch (model_.index()) {
    case 0:
      return ModelKind::kSvm;
    case 1:
      return ModelKind::kForest;
    default:
      return ModelKind::kMlp;
  }
}

Matrix TrainedModel::Prepare(const Matrix& x) const {
  if (x.cols != dimension_) {
    throw PredictError("model expects " + std::to_string(dimension_) +
                       " features, got " + std::to_string(x.cols));
  }
  return standardizer_ ? standardizer_->Apply(x) : x;
}

std::vector<int> TrainedModel::Predict(const Matrix& x) const {
  const Matrix prepared = Prepare(x);
  return std::visit([&](const auto& m) { return m.Predict(prepared); }, model_);
}

Matrix TrainedModel::PredictProba(const Matrix& x) const {
  const Matrix prepared = Prepare(x);
  if (const auto* svm = std::get_if<SvmModel>(&model_)) {
    Matrix out(prepared.rows, kNumClasses);
    const auto votes = svm->VoteScores(prepared);
    const auto pairs = static_cast<double>(svm->pairs().size());
    for (size_t r = 0; r < prepared.rows; ++r) {
      for (int c = 0; c < kNumClasses; ++c) out(r, static_cast<size_t>(c)) = votes[r][static_cast<size_t>(c)] / pairs;
    }
    return out;
  }
  if (const auto* forest = std::get_if<ForestModel>(&model_)) {
    return forest->PredictProba(prepared);
  }
  return std::get<MlpModel>(model_).PredictProba(prepared);
}

std::vector<uint8_t> TrainedModel::Serialize() const {
  Writer w;
  w.Bytes(kMagic, sizeof(kMagic));
  w.U32(kFormatVersion);
  w.U32(static_cast<uint32_t>(kind()));
  w.U64(dimension_);
  w.F64(split.ratio);
  w.U64(split.seed);
  w.U8(split.stratified ? 1 : 0);
  w.U64(split.total_rows);
  w.U8(standardizer_ ? 1 : 0);
  if (standardizer_) {
    w.F64s(standardizer_->means);
    w.F64s(standardizer_->stds);
  }
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SvmModel>) {
          WriteSvm(w, m);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          WriteForest(w, m);
        } else {
          WriteMlp(w, m);
        }
      },
      model_);
  return w.Take();
}

TrainedModel TrainedModel::Deserialize(std::span<const uint8_t> bytes,
                                       std::optional<size_t> expected_dimension) {
  Reader r(bytes);
  if (bytes.size() < sizeof(kMagic) ||
      std::memcmp(r.Need(sizeof(kMagic)), kMagic, sizeof(kMagic)) != 0) {
    throw ModelFormatError("not a fluency model file (bad magic)");
  }
  const uint32_t version = r.U32();
  if (version != kFormatVersion) {
    throw ModelFormatError("unsupported model format version " +
                           std::to_string(version));
  }
  const uint32_t kind = r.U32();
  TrainedModel out;
  out.dimension_ = r.U64();
  if (expected_dimension && *expected_dimension != out.dimension_) {
    throw ModelFormatError("model was trained on " + std::to_string(out.dimension_) +
                           " features but the input has " +
                           std::to_string(*expected_dimension));
  }
  out.split.ratio = r.F64();
  out.split.seed = r.U64();
  out.split.stratified = r.U8() != 0;
  out.split.total_rows = r.U64();
  if (r.U8() != 0) {
    Standardizer s;
    s.means = r.F64s();
    s.stds = r.F64s();
    if (s.means.size() != out.dimension_ || s.stds.size() != out.dimension_) {
      throw ModelFormatError("standardizer dimension mismatch");
    }
    out.standardizer_ = std::move(s);
  }
  switch (static_cast<ModelKind>(kind)) {
    case ModelKind::kSvm:
      out.model_ = ReadSvm(r, out.dimension_);
      break;
    case ModelKind::kForest:
      out.model_ = ReadForest(r, out.dimension_);
      break;
    case ModelKind::kMlp:
      out.model_ = ReadMlp(r, out.dimension_);
      break;
    default:
      throw ModelFormatError("unknown model kind " + std::to_string(kind));
  }
  if (!r.AtEnd()) throw ModelFormatError("trailing bytes after model");
  return out;
}

void TrainedModel::Save(const std::filesystem::path& path) const {
  const std::vector<uint8_t> bytes = Serialize();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelFormatError(path.string() + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ModelFormatError(path.string() + ": write failed");
}

TrainedModel TrainedModel::Load(const std::filesystem::path& path,
                                std::optional<size_t> expected_dimension) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError(path.string() + ": cannot open");
  const std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return Deserialize(bytes, expected_dimension);
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(path.string() + ": " + e.what());
  }
}

}  // namespace fluency
