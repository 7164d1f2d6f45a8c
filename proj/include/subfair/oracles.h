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

// Brute-force reference computations used by the tests and by `verify`.
// Nothing here shares code with the fast paths: set functions are evaluated
// by direct loops and eigenvalues, optima by enumeration.

#ifndef SUBFAIR_ORACLES_H_
#define SUBFAIR_ORACLES_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "subfair/loss.h"
#include "subfair/pool.h"

namespace subfair::oracle {

using SetFn = std::function<double(std::span<const int>)>;

// Ids whose bit is set in `mask`, ascending.
std::vector<int> MaskToIds(uint32_t mask);

// sum_{i in universe} max_{j in a} s(i, j); 0 for the empty set.
double FacilityLocation(const Eigen::MatrixXd& s, std::span<const int> universe,
                        std::span<const int> a);

// Sum of log eigenvalues of s_A + eps I (self-adjoint eigensolver); 0 for the
// empty set, -inf when an eigenvalue is not positive.
double LogDet(const Eigen::MatrixXd& s, std::span<const int> a, double eps);

// f(A u C) + f(B u C) - f(A u B u C) - f(C).
double Scmi(const SetFn& f, std::span<const int> a, std::span<const int> b,
            std::span<const int> c);

// Largest violation of f(A) + f(B) >= f(A u B) + f(A n B) over every pair of
// subsets of {0..n-1}; <= 0 means submodular.
double MaxSubmodularityViolation(const SetFn& f, int n);
// The same over `pairs` random subset pairs.
double SampledSubmodularityViolation(const SetFn& f, int n, int pairs, Rng& rng);

struct Optimum {
  std::vector<int> ids;
  double value = 0.0;
};
// Best k-subset of {0..n-1} by enumeration; ties to the lexicographically
// smallest subset.
Optimum BestSubset(const SetFn& f, int n, int k);

// Rows drawn from N(0, I); `nonnegative` takes absolute values, which makes
// every cosine similarity non-negative.
Eigen::MatrixXd RandomEmbeddings(int n, int m, Rng& rng, bool nonnegative = false);

// Random A/P/N batch with the given set sizes and width.
Batch RandomBatch(int na, int np, int nn, int m, Rng& rng);

// Central differences of `loss(batch).value` for every coordinate, stacked
// as [A; P; N].
Eigen::MatrixXd FiniteDifferenceGradient(const LossFunction& loss,
                                         const Batch& batch, double step);

}  // namespace subfair::oracle

#endif  // SUBFAIR_ORACLES_H_
