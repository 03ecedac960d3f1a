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

#include "fluency/svm.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "fluency/errors.h"
#include "fluency/parallel.h"

namespace fluency {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Solves  min 0.5 a'Qa - e'a  s.t. 0 <= a <= C, y'a = 0  with
// Q_ij = y_i y_j K(x_i, x_j), two multipliers at a time. The pair is chosen by
// maximal violation for i and second-order gain for j (Fan, Chen & Lin).
class SmoSolver {
 public:
  SmoSolver(const Matrix& x, std::vector<int> y, double c, double gamma)
      : n_(x.rows), y_(std::move(y)), c_(c), kernel_(n_ * n_) {
    for (size_t i = 0; i < n_; ++i) {
      kernel_[i * n_ + i] = 1.0;
      for (size_t j = i + 1; j < n_; ++j) {
        const double k = RbfKernel(x.row(i), x.row(j), gamma);
        kernel_[i * n_ + j] = k;
        kernel_[j * n_ + i] = k;
      }
    }
  }

  BinarySvm Solve(const Matrix& x, double tolerance, int64_t max_iterations) {
    alpha_.assign(n_, 0.0);
    grad_.assign(n_, -1.0);
    int64_t iter = 0;
    double gap = 0.0;
    for (;;) {
      size_t i = 0;
      size_t j = 0;
      gap = SelectWorkingSet(&i, &j);
      if (gap < tolerance || j == n_) break;
      if (iter >= max_iterations) {
        std::cerr << "warning: SMO reached " << max_iterations
                  << " iterations (KKT gap " << gap << ")\n";
        break;
      }
      ++iter;
      Update(i, j);
    }

    BinarySvm out;
    out.kkt_gap = std::max(gap, 0.0);
    out.iterations = iter;
    out.rho = ComputeRho();
    std::vector<size_t> support;
    for (size_t t = 0; t < n_; ++t) {
      if (alpha_[t] > 0.0) support.push_back(t);
    }
    out.support_vectors = x.SelectRows(support);
    for (size_t t : support) {
      out.alphas.push_back(alpha_[t]);
      out.signs.push_back(y_[t]);
    }
    return out;
  }

 private:
  double K(size_t i, size_t j) const { return kernel_[i * n_ + j]; }
  double Q(size_t i, size_t j) const { return y_[i] * y_[j] * K(i, j); }
  bool AtUpper(size_t t) const { return alpha_[t] >= c_; }
  bool AtLower(size_t t) const { return alpha_[t] <= 0.0; }

  // Returns m(alpha) - M(alpha); *j == n_ when no improving pair exists.
  double SelectWorkingSet(size_t* out_i, size_t* out_j) const {
    double g_max = -kInf;
    size_t i = n_;
    for (size_t t = 0; t < n_; ++t) {
      if (y_[t] == +1) {
        if (!AtUpper(t) && -grad_[t] >= g_max) {
          g_max = -grad_[t];
          i = t;
        }
      } else if (!AtLower(t) && grad_[t] >= g_max) {
        g_max = grad_[t];
        i = t;
      }
    }

    double g_max2 = -kInf;
    double best_obj = kInf;
    size_t j = n_;
    if (i != n_) {
      for (size_t t = 0; t < n_; ++t) {
        double grad_diff;
        if (y_[t] == +1) {
          if (AtLower(t)) continue;
          grad_diff = g_max + grad_[t];
          g_max2 = std::max(g_max2, grad_[t]);
        } else {
          if (AtUpper(t)) continue;
          grad_diff = g_max - grad_[t];
          g_max2 = std::max(g_max2, -grad_[t]);
        }
        if (grad_diff > 0.0) {
          double quad = K(i, i) + K(t, t) - 2.0 * K(i, t);
          if (quad <= 0.0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best_obj) {
            best_obj = obj;
            j = t;
          }
        }
      }
    }
    *out_i = i;
    *out_j = j;
    if (i == n_) return 0.0;
    return g_max + g_max2;
  }

  void Update(size_t i, size_t j) {
    const double old_i = alpha_[i];
    const double old_j = alpha_[j];
    if (y_[i] != y_[j]) {
      double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = alpha_[i] - alpha_[j];
      alpha_[i] += delta;
      alpha_[j] += delta;
      if (diff > 0.0) {
        if (alpha_[j] < 0.0) {
          alpha_[j] = 0.0;
          alpha_[i] = diff;
        }
      } else if (alpha_[i] < 0.0) {
        alpha_[i] = 0.0;
        alpha_[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha_[i] > c_) {
          alpha_[i] = c_;
          alpha_[j] = c_ - diff;
        }
      } else if (alpha_[j] > c_) {
        alpha_[j] = c_;
        alpha_[i] = c_ + diff;
      }
    } else {
      double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = alpha_[i] + alpha_[j];
      alpha_[i] -= delta;
      alpha_[j] += delta;
      if (sum > c_) {
        if (alpha_[i] > c_) {
          alpha_[i] = c_;
          alpha_[j] = sum - c_;
        }
      } else if (alpha_[j] < 0.0) {
        alpha_[j] = 0.0;
        alpha_[i] = sum;
      }
      if (sum > c_) {
        if (alpha_[j] > c_) {
          alpha_[j] = c_;
          alpha_[i] = sum - c_;
        }
      } else if (alpha_[i] < 0.0) {
        alpha_[i] = 0.0;
        alpha_[j] = sum;
      }
    }
    const double d_i = alpha_[i] - old_i;
    const double d_j = alpha_[j] - old_j;
    for (size_t t = 0; t < n_; ++t) {
      grad_[t] += Q(i, t) * d_i + Q(j, t) * d_j;
    }
  }

  double ComputeRho() const {
    double upper = kInf;
    double lower = -kInf;
    double sum_free = 0.0;
    int n_free = 0;
    for (size_t t = 0; t < n_; ++t) {
      const double yg = y_[t] * grad_[t];
      if (AtUpper(t)) {
        if (y_[t] == -1) {
          upper = std::min(upper, yg);
        } else {
          lower = std::max(lower, yg);
        }
      } else if (AtLower(t)) {
        if (y_[t] == +1) {
          upper = std::min(upper, yg);
        } else {
          lower = std::max(lower, yg);
        }
      } else {
        ++n_free;
        sum_free += yg;
      }
    }
    if (n_free > 0) return sum_free / n_free;
    return (upper + lower) / 2.0;
  }

  size_t n_;
  std::vector<int> y_;
  double c_;
  std::vector<double> kernel_;
  std::vector<double> alpha_;
  std::vector<double> grad_;
};

}  // namespace

double RbfKernel(std::span<const double> a, std::span<const double> b,
                 double gamma) {
  double d2 = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double BinarySvm::Decision(std::span<const double> x, double gamma) const {
  double sum = 0.0;
  for (size_t s = 0; s < alphas.size(); ++s) {
    sum += alphas[s] * signs[s] * RbfKernel(support_vectors.row(s), x, gamma);
  }
  return sum - rho;
}

SvmModel SvmModel::Train(const Matrix& x, std::span<const int> y,
                         const SvmParams& params) {
  if (x.rows != y.size()) throw TrainError("feature/label count mismatch");
  if (x.rows == 0 || x.cols == 0) throw TrainError("empty training set");
  if (!(params.c > 0.0)) throw TrainError("C must be positive");
  for (double v : x.data) {
    if (!std::isfinite(v)) throw TrainError("non-finite training feature");
  }
  std::array<size_t, kNumClasses> counts{};
  for (int label : y) {
    if (label < 0 || label >= kNumClasses) throw TrainError("label out of range");
    ++counts[static_cast<size_t>(label)];
  }
  std::vector<int> present;
  for (int c = 0; c < kNumClasses; ++c) {
    if (counts[static_cast<size_t>(c)] > 0) present.push_back(c);
  }
  if (present.size() < 2) throw TrainError("SVM needs at least two classes");

  SvmModel model;
  model.dimension_ = x.cols;
  model.gamma_ = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(x.cols);
  model.c_ = params.c;

  std::vector<std::pair<int, int>> class_pairs;
  for (size_t a = 0; a < present.size(); ++a) {
    for (size_t b = a + 1; b < present.size(); ++b) {
      class_pairs.emplace_back(present[a], present[b]);
    }
  }
  model.pairs_.resize(class_pairs.size());
  ParallelFor(class_pairs.size(), params.jobs, [&](size_t p) {
    const auto [first, second] = class_pairs[p];
    std::vector<size_t> rows;
    std::vector<int> signs;
    for (size_t r = 0; r < y.size(); ++r) {
      if (y[r] == first || y[r] == second) {
        rows.push_back(r);
        signs.push_back(y[r] == first ? +1 : -1);
      }
    }
    const Matrix sub = x.SelectRows(rows);
    const int64_t cap = params.max_iterations > 0
                            ? params.max_iterations
                            : std::max<int64_t>(10'000'000,
                                                100 * static_cast<int64_t>(rows.size()));
    SmoSolver solver(sub, signs, params.c, model.gamma_);
    BinarySvm machine = solver.Solve(sub, params.tolerance, cap);
    machine.first_class = first;
    machine.second_class = second;
    model.pairs_[p] = std::move(machine);
  });
  return model;
}

SvmModel SvmModel::FromParts(size_t dimension, double gamma, double c,
                             std::vector<BinarySvm> pairs) {
  SvmModel model;
  model.dimension_ = dimension;
  model.gamma_ = gamma;
  model.c_ = c;
  model.pairs_ = std::move(pairs);
  return model;
}

void SvmModel::CheckDimension(size_t cols) const {
  if (cols != dimension_) {
    throw PredictError("SVM expects " + std::to_string(dimension_) +
                       " features, got " + std::to_string(cols));
  }
}

std::array<int, kNumClasses> SvmModel::Votes(std::span<const double> x) const {
  CheckDimension(x.size());
  std::array<int, kNumClasses> votes{};
  for (const BinarySvm& m : pairs_) {
    ++votes[static_cast<size_t>(m.Decision(x, gamma_) > 0.0 ? m.first_class
                                                             : m.second_class)];
  }
  return votes;
}

int SvmModel::Predict(std::span<const double> x) const {
  CheckDimension(x.size());
  std::array<int, kNumClasses> votes{};
  std::array<double, kNumClasses> magnitude{};
  for (const BinarySvm& m : pairs_) {
    const double d = m.Decision(x, gamma_);
    const auto winner = static_cast<size_t>(d > 0.0 ? m.first_class : m.second_class);
    ++votes[winner];
    magnitude[winner] += std::abs(d);
  }
  size_t best = 0;
  for (size_t c = 1; c < kNumClasses; ++c) {
    if (votes[c] > votes[best] ||
        (votes[c] == votes[best] && magnitude[c] > magnitude[best])) {
      best = c;
    }
  }
  return static_cast<int>(best);
}

std::vector<int> SvmModel::Predict(const Matrix& x) const {
  CheckDimension(x.cols);
  std::vector<int> out(x.rows);
  for (size_t r = 0; r < x.rows; ++r) out[r] = Predict(x.row(r));
  return out;
}

std::vector<std::array<int, kNumClasses>> SvmModel::VoteScores(const Matrix& x) const {
  CheckDimension(x.cols);
  std::vector<std::array<int, kNumClasses>> out(x.rows);
  for (size_t r = 0; r < x.rows; ++r) out[r] = Votes(x.row(r));
  return out;
}

}  // namespace fluency
