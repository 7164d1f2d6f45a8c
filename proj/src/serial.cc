// Copyright 2026 The Authors.
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

#include "subfair/serial.h"

#include <algorithm>
#include <cmath>

#include "subfair/error.h"

namespace subfair::serial {

SimilarityKernel CosineKernel(const EmbeddingMatrix& e, double temperature) {
  if (!(temperature > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be positive");
  }
  const EmbeddingMatrix u = NormalizeRows(e);
  const int n = static_cast<int>(u.rows());
  const int m = static_cast<int>(u.cols());
  const double inv_t = 1.0 / temperature;
  SimilarityKernel k;
  k.temperature = temperature;
  k.entries.resize(n, n);
  for (int i = 0; i < n; ++i) {
    k.entries(i, i) = inv_t;
    for (int j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (int c = 0; c < m; ++c) dot += u(i, c) * u(j, c);
      k.entries(i, j) = k.entries(j, i) = std::clamp(dot, -1.0, 1.0) * inv_t;
    }
  }
  return k;
}

std::vector<double> ScoreCandidates(const GreedyObjective& objective,
                                    std::span<const int> candidates) {
  std::vector<double> gains;
  gains.reserve(candidates.size());
  for (int v : candidates) gains.push_back(objective.Gain(v));
  return gains;
}

std::vector<FlcmiTerm> ComputeFlcmiTerms(const SimilarityKernel& kernel,
                                         int n_anchors, int n_positives,
                                         int n_negatives) {
  const int n = n_anchors + n_positives + n_negatives;
  const Eigen::MatrixXd& k = kernel.entries;
  auto row_max = [&k](int i, int begin, int end, double* best, int* arg) {
    *best = -INFINITY;
    for (int j = begin; j < end; ++j) {
      if (k(i, j) > *best) {
        *best = k(i, j);
        *arg = j;
      }
    }
  };
  std::vector<FlcmiTerm> terms(n);
  for (int i = 0; i < n; ++i) {
    FlcmiTerm& t = terms[i];
    row_max(i, 0, n_anchors, &t.anchor_max, &t.anchor_arg);
    row_max(i, n_anchors, n_anchors + n_positives, &t.positive_max,
            &t.positive_arg);
    row_max(i, n_anchors + n_positives, n, &t.negative_max, &t.negative_arg);
    t.anchor_branch = t.anchor_max <= t.negative_max;
    const double v =
        std::min(t.anchor_max, t.negative_max) - t.positive_max;
    t.active = v > 0.0;
    t.value = t.active ? v : 0.0;
  }
  return terms;
}

Eigen::MatrixXd DenseForward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w,
                             const Eigen::VectorXd& b, bool relu) {
  const Eigen::Index n = x.rows();
  const Eigen::Index out_dim = w.rows();
  const Eigen::Index in_dim = w.cols();
  Eigen::MatrixXd out(n, out_dim);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index o = 0; o < out_dim; ++o) {
      double acc = b(o);
      for (Eigen::Index c = 0; c < in_dim; ++c) acc += w(o, c) * x(r, c);
      out(r, o) = relu ? std::max(acc, 0.0) : acc;
    }
  }
  return out;
}

}  // namespace subfair::serial
