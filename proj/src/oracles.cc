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

#include "subfair/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subfair::oracle {
namespace {

std::vector<int> Union(std::span<const int> a, std::span<const int> b) {
  std::vector<int> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<int> MaskToIds(uint32_t mask) {
  std::vector<int> ids;
  for (int i = 0; i < 32; ++i) {
    if (mask & (1u << i)) ids.push_back(i);
  }
  return ids;
}

double FacilityLocation(const Eigen::MatrixXd& s, std::span<const int> universe,
                        std::span<const int> a) {
  if (a.empty()) return 0.0;
  double total = 0.0;
  for (int i : universe) {
    double best = -std::numeric_limits<double>::infinity();
    for (int j : a) best = std::max(best, s(i, j));
    total += best;
  }
  return total;
}

double LogDet(const Eigen::MatrixXd& s, std::span<const int> a, double eps) {
  if (a.empty()) return 0.0;
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) m(r, c) = s(a[r], a[c]);
  }
  m.diagonal().array() += eps;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      m, Eigen::EigenvaluesOnly);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (!(lambda > 0.0)) return -std::numeric_limits<double>::infinity();
    total += std::log(lambda);
  }
  return total;
}

double Scmi(const SetFn& f, std::span<const int> a, std::span<const int> b,
            std::span<const int> c) {
  const std::vector<int> ac = Union(a, c);
  const std::vector<int> bc = Union(b, c);
  const std::vector<int> abc = Union(ac, b);
  return f(ac) + f(bc) - f(abc) - f(c);
}

double MaxSubmodularityViolation(const SetFn& f, int n) {
  const uint32_t full = 1u << n;
  std::vector<double> value(full);
  for (uint32_t m = 0; m < full; ++m) value[m] = f(MaskToIds(m));
  double worst = -std::numeric_limits<double>::infinity();
  for (uint32_t a = 0; a < full; ++a) {
    for (uint32_t b = 0; b < full; ++b) {
      worst = std::max(worst, value[a | b] + value[a & b] - value[a] - value[b]);
    }
  }
  return worst;
}

double SampledSubmodularityViolation(const SetFn& f, int n, int pairs,
                                     Rng& rng) {
  std::uniform_int_distribution<uint32_t> pick(0, (1u << n) - 1);
  double worst = -std::numeric_limits<double>::infinity();
  for (int p = 0; p < pairs; ++p) {
    const uint32_t a = pick(rng);
    const uint32_t b = pick(rng);
    worst = std::max(worst, f(MaskToIds(a | b)) + f(MaskToIds(a & b)) -
                                f(MaskToIds(a)) - f(MaskToIds(b)));
  }
  return worst;
}

Optimum BestSubset(const SetFn& f, int n, int k) {
  Optimum best;
  best.value = -std::numeric_limits<double>::infinity();
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    const double v = f(pick);
    if (v > best.value) best = {pick, v};
    int i = k - 1;
    while (i >= 0 && pick[i] == n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

Eigen::MatrixXd RandomEmbeddings(int n, int m, Rng& rng, bool nonnegative) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd e(n, m);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < m; ++c) {
      const double v = g(rng);
      e(r, c) = nonnegative ? std::abs(v) : v;
    }
  }
  return e;
}

Batch RandomBatch(int na, int np, int nn, int m, Rng& rng) {
  Batch b;
  b.anchors = RandomEmbeddings(na, m, rng);
  b.positives = RandomEmbeddings(np, m, rng);
  b.negatives = RandomEmbeddings(nn, m, rng);
  return b;
}

Eigen::MatrixXd FiniteDifferenceGradient(const LossFunction& loss,
                                         const Batch& batch, double step) {
  const Eigen::Index m = batch.anchors.cols();
  Eigen::MatrixXd grad(batch.size(), m);
  Eigen::Index row = 0;
  for (EmbeddingMatrix Batch::*member :
       {&Batch::anchors, &Batch::positives, &Batch::negatives}) {
    const Eigen::Index rows = (batch.*member).rows();
    for (Eigen::Index r = 0; r < rows; ++r, ++row) {
      for (Eigen::Index c = 0; c < m; ++c) {
        Batch plus = batch;
        Batch minus = batch;
        (plus.*member)(r, c) += step;
        (minus.*member)(r, c) -= step;
        grad(row, c) = (loss(plus).value - loss(minus).value) / (2.0 * step);
      }
    }
  }
  return grad;
}

}  // namespace subfair::oracle
