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

#include "subfair/kernel.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "subfair/error.h"
#include "subfair/parallel.h"

namespace subfair {

void ValidateEmbeddings(const EmbeddingMatrix& e) {
  if (!e.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "embeddings contain NaN or inf");
  }
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    double sq = 0.0;
    for (Eigen::Index j = 0; j < e.cols(); ++j) sq += e(i, j) * e(i, j);
    if (!(sq > 0.0)) {
      throw Error(ErrorCode::kNumericalDomain,
                  "zero-norm embedding at row " + std::to_string(i));
    }
  }
}

EmbeddingMatrix NormalizeRows(const EmbeddingMatrix& e) {
  ValidateEmbeddings(e);
  EmbeddingMatrix out(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    double sq = 0.0;
    for (Eigen::Index j = 0; j < e.cols(); ++j) sq += e(i, j) * e(i, j);
    const double inv = 1.0 / std::sqrt(sq);
    for (Eigen::Index j = 0; j < e.cols(); ++j) out(i, j) = e(i, j) * inv;
  }
  return out;
}

SimilarityKernel CosineKernel(const EmbeddingMatrix& e, double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be positive");
  }
  const EmbeddingMatrix u = NormalizeRows(e);
  const int n = static_cast<int>(u.rows());
  const int m = static_cast<int>(u.cols());
  const double inv_t = 1.0 / temperature;

  SimilarityKernel k;
  k.temperature = temperature;
  k.entries.resize(n, n);
  // Row i fills entries (i, j) and (j, i) for j > i; no two rows write the
  // same entry.
#pragma omp parallel for schedule(dynamic, 8) num_threads(ThreadCount())
  for (int i = 0; i < n; ++i) {
    k.entries(i, i) = inv_t;
    for (int j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (int c = 0; c < m; ++c) dot += u(i, c) * u(j, c);
      const double v = std::clamp(dot, -1.0, 1.0) * inv_t;
      k.entries(i, j) = v;
      k.entries(j, i) = v;
    }
  }
  return k;
}

Eigen::MatrixXd SubKernel(const SimilarityKernel& k, std::span<const int> rows,
                          std::span<const int> cols) {
  const int n = k.size();
  auto check = [n](int id) {
    if (id < 0 || id >= n) {
      throw Error(ErrorCode::kOutOfRange,
                  "kernel index " + std::to_string(id) + " out of range");
    }
  };
  for (int r : rows) check(r);
  for (int c : cols) check(c);
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < cols.size(); ++c) {
      out(r, c) = k.entries(rows[r], cols[c]);
    }
  }
  return out;
}

EmbeddingMatrix GaussianKernelEmbedding(const Eigen::MatrixXd& x,
                                        double bandwidth) {
  if (!(bandwidth > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "bandwidth must be positive");
  }
  if (!x.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "features contain NaN or inf");
  }
  const int n = static_cast<int>(x.rows());
  const double scale = -0.5 / (bandwidth * bandwidth);
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      k(i, j) = k(j, i) = std::exp(scale * (x.row(i) - x.row(j)).squaredNorm());
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k);
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double floor = 1e-12 * lambda.maxCoeff();
  int keep = 0;
  for (int i = 0; i < n; ++i) keep += lambda(i) > floor;
  EmbeddingMatrix e(n, keep);
  int col = 0;
  for (int i = 0; i < n; ++i) {
    if (!(lambda(i) > floor)) continue;
    e.col(col++) = solver.eigenvectors().col(i) * std::sqrt(lambda(i));
  }
  return e;
}

}  // namespace subfair
