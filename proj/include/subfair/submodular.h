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

// Facility-Location and Log-Determinant set functions over a similarity
// kernel, the information combinators built from them (mutual information,
// conditional gain, conditional mutual information), and the incremental
// gain oracles the greedy maximizers run on.
//
// Ids are kernel indices. All set arguments are treated as sets: order and
// repeats are ignored.

#ifndef SUBFAIR_SUBMODULAR_H_
#define SUBFAIR_SUBMODULAR_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "subfair/kernel.h"
#include "subfair/objective.h"

namespace subfair {

inline constexpr double kDefaultLogDetEpsilon = 1e-4;

enum class BaseKind { kFacilityLocation, kLogDet };

// A base submodular function bound to a kernel. Holds a pointer to the
// kernel, which must outlive it.
class BaseFunction {
 public:
  // f(A) = sum over i in `universe` of max_{j in A} S(i, j); f({}) = 0.
  // No clamp at zero, so on signed kernels f need not be monotone.
  static BaseFunction FacilityLocation(const SimilarityKernel& kernel,
                                       std::vector<int> universe);
  // f(A) = logdet(S_A + epsilon I); f({}) = 0.
  static BaseFunction LogDeterminant(const SimilarityKernel& kernel,
                                     double epsilon = kDefaultLogDetEpsilon);

  BaseKind kind() const { return kind_; }
  const SimilarityKernel& kernel() const { return *kernel_; }
  double epsilon() const { return epsilon_; }
  const std::vector<int>& universe() const { return universe_; }

  double Eval(std::span<const int> a) const;

  // f(A + v) - f(A) through the fast paths: running maxima for FL, a
  // rank-one Schur update of the Cholesky factor for LogDet.
  double MarginalGain(std::span<const int> a, int v) const;

 private:
  BaseFunction(BaseKind kind, const SimilarityKernel* kernel, double epsilon,
               std::vector<int> universe);

  BaseKind kind_;
  const SimilarityKernel* kernel_;
  double epsilon_;
  std::vector<int> universe_;
};

// I_f(A; Q) = f(A) + f(Q) - f(A u Q).
double Smi(const BaseFunction& f, std::span<const int> a,
           std::span<const int> q);
// H_f(A | Q) = f(A u Q) - f(Q).
double Scg(const BaseFunction& f, std::span<const int> a,
           std::span<const int> q);
// I_f(A; B | C) = f(A u C) + f(B u C) - f(A u B u C) - f(C).
double Scmi(const BaseFunction& f, std::span<const int> a,
            std::span<const int> b, std::span<const int> c);

// Sorted, de-duplicated union.
std::vector<int> SetUnion(std::span<const int> a, std::span<const int> b);

// logdet(m + epsilon I) for a symmetric matrix via Cholesky. On failure the
// factorization is retried once with 10 * epsilon before throwing
// kNumericalDomain. The empty matrix has logdet 0.
double RegularizedLogDet(const Eigen::MatrixXd& m, double epsilon);

// --- Incremental gain oracles ------------------------------------------------

// Facility location, optionally conditioned: with a non-empty `conditioning`
// set Q the oracle starts from A = Q, so gains are those of the conditional
// gain H_f(A | Q).
class FacilityLocationGain final : public GreedyObjective {
 public:
  FacilityLocationGain(const SimilarityKernel& kernel,
                       std::vector<int> universe,
                       std::vector<int> conditioning = {});

  void Reset() override;
  double Gain(int v) const override;
  void Add(int v) override;

 private:
  const SimilarityKernel* kernel_;
  std::vector<int> universe_;
  std::vector<int> conditioning_;
  std::vector<double> best_;  // running max over the selection, per universe item
  bool empty_ = true;
};

// Facility-location mutual information with a fixed query set Q:
// gains of I_f(A; Q) = sum_i min(max_{a in A} S(i, a), max_{q in Q} S(i, q)).
class FacilityLocationMutualInformation final : public GreedyObjective {
 public:
  FacilityLocationMutualInformation(const SimilarityKernel& kernel,
                                    std::vector<int> universe,
                                    std::vector<int> query);

  void Reset() override;
  double Gain(int v) const override;
  void Add(int v) override;

 private:
  const SimilarityKernel* kernel_;
  std::vector<int> universe_;
  std::vector<double> query_best_;
  std::vector<double> best_;
  bool empty_ = true;
};

// Log-determinant gains over a fixed candidate list. Keeps, per candidate,
// the residual variance d2 = S(v, v) + eps - s_v^T (S_A + eps I)^-1 s_v and
// its coordinates in the Cholesky basis of the selection; Gain(v) is
// log(d2) and Add() is an O(n |A|) update.
class LogDetGain final : public GreedyObjective {
 public:
  LogDetGain(const SimilarityKernel& kernel, double epsilon,
             std::vector<int> candidates);

  void Reset() override;
  double Gain(int v) const override;
  void Add(int v) override;

  // Residual variance of v given the current selection.
  double Residual(int v) const;

 private:
  int Slot(int v) const;

  const SimilarityKernel* kernel_;
  double epsilon_;
  std::vector<int> candidates_;
  std::vector<int> slot_;  // kernel index -> position in candidates_, or -1
  std::vector<double> d2_;
  std::vector<std::vector<double>> basis_;  // per candidate, one entry per pick
};

}  // namespace subfair

#endif  // SUBFAIR_SUBMODULAR_H_
