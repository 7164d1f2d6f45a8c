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

#include "subfair/submodular.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

#include "subfair/error.h"

namespace subfair {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<int> Canonical(std::span<const int> a) {
  std::vector<int> out(a.begin(), a.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void CheckIds(std::span<const int> ids, int n) {
  for (int id : ids) {
    if (id < 0 || id >= n) {
      throw Error(ErrorCode::kOutOfRange,
                  "kernel index " + std::to_string(id) + " out of range");
    }
  }
}

// Cholesky factor of m + eps I; false when m + eps I is not positive definite.
bool TryCholesky(const Eigen::MatrixXd& m, double eps, Eigen::MatrixXd* l) {
  Eigen::MatrixXd reg = m;
  reg.diagonal().array() += eps;
  Eigen::LLT<Eigen::MatrixXd> llt(reg);
  if (llt.info() != Eigen::Success) return false;
  *l = llt.matrixL();
  for (Eigen::Index i = 0; i < l->rows(); ++i) {
    if (!((*l)(i, i) > 0.0) || !std::isfinite((*l)(i, i))) return false;
  }
  return true;
}

}  // namespace

std::vector<int> SetUnion(std::span<const int> a, std::span<const int> b) {
  std::vector<int> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double RegularizedLogDet(const Eigen::MatrixXd& m, double epsilon) {
  if (m.rows() == 0) return 0.0;
  Eigen::MatrixXd l;
  if (!TryCholesky(m, epsilon, &l)) {
    const double retry = epsilon * 10.0;
    if (!(retry > epsilon) || !TryCholesky(m, retry, &l)) {
      throw Error(ErrorCode::kNumericalDomain,
                  "matrix is not positive definite after regularization "
                  "(epsilon " + std::to_string(epsilon) + ")");
    }
    std::clog << "warning: logdet regularization escalated from " << epsilon
              << " to " << retry << "\n";
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) sum += std::log(l(i, i));
  return 2.0 * sum;
}

BaseFunction::BaseFunction(BaseKind kind, const SimilarityKernel* kernel,
                           double epsilon, std::vector<int> universe)
    : kind_(kind),
      kernel_(kernel),
      epsilon_(epsilon),
      universe_(std::move(universe)) {}

BaseFunction BaseFunction::FacilityLocation(const SimilarityKernel& kernel,
                                            std::vector<int> universe) {
  CheckIds(universe, kernel.size());
  return BaseFunction(BaseKind::kFacilityLocation, &kernel, 0.0,
                      std::move(universe));
}

BaseFunction BaseFunction::LogDeterminant(const SimilarityKernel& kernel,
                                          double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  }
  std::vector<int> universe(kernel.size());
  for (int i = 0; i < kernel.size(); ++i) universe[i] = i;
  return BaseFunction(BaseKind::kLogDet, &kernel, epsilon, std::move(universe));
}

double BaseFunction::Eval(std::span<const int> a_in) const {
  const std::vector<int> a = Canonical(a_in);
  CheckIds(a, kernel_->size());
  if (a.empty()) return 0.0;
  const Eigen::MatrixXd& s = kernel_->entries;
  if (kind_ == BaseKind::kFacilityLocation) {
    double total = 0.0;
    for (int i : universe_) {
      double best = kNegInf;
      for (int j : a) best = std::max(best, s(i, j));
      total += best;
    }
    return total;
  }
  return RegularizedLogDet(SubKernel(*kernel_, a, a), epsilon_);
}

double BaseFunction::MarginalGain(std::span<const int> a_in, int v) const {
  const std::vector<int> a = Canonical(a_in);
  CheckIds(a, kernel_->size());
  CheckIds(std::span<const int>(&v, 1), kernel_->size());
  if (std::binary_search(a.begin(), a.end(), v)) {
    throw Error(ErrorCode::kInvalidArgument,
                "marginal gain of an element already in the set");
  }
  const Eigen::MatrixXd& s = kernel_->entries;
  if (kind_ == BaseKind::kFacilityLocation) {
    double gain = 0.0;
    for (int i : universe_) {
      if (a.empty()) {
        gain += s(i, v);
      } else {
        double best = kNegInf;
        for (int j : a) best = std::max(best, s(i, j));
        gain += std::max(s(i, v) - best, 0.0);
      }
    }
    return gain;
  }

  const double self = s(v, v) + epsilon_;
  if (a.empty()) {
    if (!(self > 0.0)) {
      throw Error(ErrorCode::kNumericalDomain, "non-positive diagonal");
    }
    return std::log(self);
  }
  Eigen::MatrixXd l;
  if (!TryCholesky(SubKernel(*kernel_, a, a), epsilon_, &l)) {
    throw Error(ErrorCode::kNumericalDomain,
                "selection kernel is not positive definite");
  }
  Eigen::VectorXd cross(a.size());
  for (size_t r = 0; r < a.size(); ++r) cross(r) = s(a[r], v);
  const Eigen::VectorXd coords =
      l.triangularView<Eigen::Lower>().solve(cross);
  const double d2 = self - coords.squaredNorm();
  if (!(d2 > 0.0)) {
    throw Error(ErrorCode::kNumericalDomain,
                "extended kernel is not positive definite");
  }
  return std::log(d2);
}

double Smi(const BaseFunction& f, std::span<const int> a,
           std::span<const int> q) {
  return f.Eval(a) + f.Eval(q) - f.Eval(SetUnion(a, q));
}

double Scg(const BaseFunction& f, std::span<const int> a,
           std::span<const int> q) {
  return f.Eval(SetUnion(a, q)) - f.Eval(q);
}

double Scmi(const BaseFunction& f, std::span<const int> a,
            std::span<const int> b, std::span<const int> c) {
  const std::vector<int> ac = SetUnion(a, c);
  const std::vector<int> bc = SetUnion(b, c);
  const std::vector<int> abc = SetUnion(ac, b);
  return f.Eval(ac) + f.Eval(bc) - f.Eval(abc) - f.Eval(c);
}

// --- FacilityLocationGain ----------------------------------------------------

FacilityLocationGain::FacilityLocationGain(const SimilarityKernel& kernel,
                                           std::vector<int> universe,
                                           std::vector<int> conditioning)
    : kernel_(&kernel),
      universe_(std::move(universe)),
      conditioning_(std::move(conditioning)) {
  CheckIds(universe_, kernel.size());
  CheckIds(conditioning_, kernel.size());
  Reset();
}

void FacilityLocationGain::Reset() {
  best_.assign(universe_.size(), kNegInf);
  empty_ = true;
  for (int q : conditioning_) Add(q);
}

double FacilityLocationGain::Gain(int v) const {
  const Eigen::MatrixXd& s = kernel_->entries;
  double gain = 0.0;
  if (empty_) {
    for (int i : universe_) gain += s(i, v);
    return gain;
  }
  for (size_t r = 0; r < universe_.size(); ++r) {
    gain += std::max(s(universe_[r], v) - best_[r], 0.0);
  }
  return gain;
}

void FacilityLocationGain::Add(int v) {
  const Eigen::MatrixXd& s = kernel_->entries;
  for (size_t r = 0; r < universe_.size(); ++r) {
    best_[r] = std::max(best_[r], s(universe_[r], v));
  }
  empty_ = false;
}

// --- FacilityLocationMutualInformation --------------------------------------

FacilityLocationMutualInformation::FacilityLocationMutualInformation(
    const SimilarityKernel& kernel, std::vector<int> universe,
    std::vector<int> query)
    : kernel_(&kernel), universe_(std::move(universe)) {
  CheckIds(universe_, kernel.size());
  CheckIds(query, kernel.size());
  if (query.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "query set must be non-empty");
  }
  const Eigen::MatrixXd& s = kernel.entries;
  query_best_.assign(universe_.size(), kNegInf);
  for (size_t r = 0; r < universe_.size(); ++r) {
    for (int q : query) {
      query_best_[r] = std::max(query_best_[r], s(universe_[r], q));
    }
  }
  Reset();
}

void FacilityLocationMutualInformation::Reset() {
  best_.assign(universe_.size(), kNegInf);
  empty_ = true;
}

double FacilityLocationMutualInformation::Gain(int v) const {
  const Eigen::MatrixXd& s = kernel_->entries;
  double gain = 0.0;
  for (size_t r = 0; r < universe_.size(); ++r) {
    const double svi = s(universe_[r], v);
    if (empty_) {
      gain += std::min(svi, query_best_[r]);
    } else {
      gain += std::min(std::max(best_[r], svi), query_best_[r]) -
              std::min(best_[r], query_best_[r]);
    }
  }
  return gain;
}

void FacilityLocationMutualInformation::Add(int v) {
  const Eigen::MatrixXd& s = kernel_->entries;
  for (size_t r = 0; r < universe_.size(); ++r) {
    best_[r] = std::max(best_[r], s(universe_[r], v));
  }
  empty_ = false;
}

// --- LogDetGain --------------------------------------------------------------

LogDetGain::LogDetGain(const SimilarityKernel& kernel, double epsilon,
                       std::vector<int> candidates)
    : kernel_(&kernel), epsilon_(epsilon), candidates_(std::move(candidates)) {
  if (!(epsilon >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  }
  CheckIds(candidates_, kernel.size());
  slot_.assign(kernel.size(), -1);
  for (size_t c = 0; c < candidates_.size(); ++c) {
    slot_[candidates_[c]] = static_cast<int>(c);
  }
  Reset();
}

void LogDetGain::Reset() {
  d2_.resize(candidates_.size());
  for (size_t c = 0; c < candidates_.size(); ++c) {
    d2_[c] = kernel_->entries(candidates_[c], candidates_[c]) + epsilon_;
  }
  basis_.assign(candidates_.size(), {});
}

int LogDetGain::Slot(int v) const {
  const int slot = (v >= 0 && v < static_cast<int>(slot_.size())) ? slot_[v] : -1;
  if (slot < 0) {
    throw Error(ErrorCode::kOutOfRange,
                "id " + std::to_string(v) + " is not a LogDet candidate");
  }
  return slot;
}

double LogDetGain::Residual(int v) const { return d2_[Slot(v)]; }

double LogDetGain::Gain(int v) const {
  const double d2 = d2_[Slot(v)];
  return d2 > 0.0 ? std::log(d2) : kNegInf;
}

void LogDetGain::Add(int v) {
  const int j = Slot(v);
  const double dj = d2_[j];
  if (!(dj > 0.0)) {
    throw Error(ErrorCode::kNumericalDomain,
                "LogDet selection left the positive-definite domain");
  }
  const double root = std::sqrt(dj);
  const std::vector<double> bj = basis_[j];
  const Eigen::MatrixXd& s = kernel_->entries;
  for (size_t c = 0; c < candidates_.size(); ++c) {
    double cross = s(v, candidates_[c]);
    if (static_cast<int>(c) == j) cross += epsilon_;
    const std::vector<double>& bc = basis_[c];
    for (size_t r = 0; r < bj.size(); ++r) cross -= bj[r] * bc[r];
    const double e = cross / root;
    basis_[c].push_back(e);
    d2_[c] -= e * e;
  }
  d2_[j] = 0.0;
}

// --- SetFunctionObjective ----------------------------------------------------

SetFunctionObjective::SetFunctionObjective(SetFunction f) : f_(std::move(f)) {
  Reset();
}

void SetFunctionObjective::Reset() {
  selected_.clear();
  value_ = f_(selected_);
}

double SetFunctionObjective::Gain(int v) const {
  std::vector<int> extended = selected_;
  extended.insert(std::upper_bound(extended.begin(), extended.end(), v), v);
  return f_(extended) - value_;
}

void SetFunctionObjective::Add(int v) {
  selected_.insert(std::upper_bound(selected_.begin(), selected_.end(), v), v);
  value_ = f_(selected_);
}

}  // namespace subfair
