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

#ifndef SUBFAIR_OBJECTIVE_H_
#define SUBFAIR_OBJECTIVE_H_

#include <functional>
#include <span>
#include <vector>

namespace subfair {

// Incremental set-function oracle consumed by the greedy maximizers. It keeps
// a current selection A (initially empty) and answers marginal gains against
// it.
class GreedyObjective {
 public:
  virtual ~GreedyObjective() = default;

  // Back to A = {}.
  virtual void Reset() = 0;
  // f(A + v) - f(A). Must be safe to call concurrently between Add() calls.
  // Returns -inf when adding v leaves the objective's domain.
  virtual double Gain(int v) const = 0;
  // A <- A + v.
  virtual void Add(int v) = 0;
};

// Adapts a plain set function f (evaluated on sorted id lists) to the
// incremental interface by evaluating f(A + v) - f(A) from scratch. Slow, but
// useful for objectives without a fast path and as a cross-check.
class SetFunctionObjective final : public GreedyObjective {
 public:
  using SetFunction = std::function<double(std::span<const int>)>;

  explicit SetFunctionObjective(SetFunction f);

  void Reset() override;
  double Gain(int v) const override;
  void Add(int v) override;

 private:
  SetFunction f_;
  std::vector<int> selected_;  // sorted
  double value_ = 0.0;
};

}  // namespace subfair

#endif  // SUBFAIR_OBJECTIVE_H_
