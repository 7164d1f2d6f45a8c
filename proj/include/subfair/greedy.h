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

// Cardinality-constrained greedy maximization: the plain greedy rule and its
// lazy (priority-queue) variant. Both pick, at every step, the candidate with
// the largest marginal gain and break ties by the smallest id, so on
// submodular objectives they return identical selections.

#ifndef SUBFAIR_GREEDY_H_
#define SUBFAIR_GREEDY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "subfair/objective.h"

namespace subfair {

struct GreedyResult {
  std::vector<int> selected;  // selection order
  std::vector<double> gains;  // marginal gain of each pick
  double value = 0.0;         // sum of gains: f(selected) - f({})
  int64_t evaluations = 0;    // calls to GreedyObjective::Gain
  // The candidate pool was smaller than the budget; everything was returned.
  bool short_selection = false;
};

// Gains of every candidate against the objective's current selection,
// computed in parallel (one output slot per candidate).
std::vector<double> ScoreCandidates(const GreedyObjective& objective,
                                    std::span<const int> candidates);

// Resets `objective`, then adds min(budget, |candidates|) elements.
// Throws kInvalidArgument on budget < 1, empty or repeated candidates, and
// kNumericalDomain when the best available gain is not finite.
GreedyResult GreedyMax(GreedyObjective& objective,
                       std::span<const int> candidates, int budget);

// Same contract and output as GreedyMax for submodular objectives, with far
// fewer Gain() calls. Upper bounds are seeded from the second round: with
// f({}) = 0 on signed kernels, the first step need not obey diminishing
// returns.
GreedyResult LazyGreedyMax(GreedyObjective& objective,
                           std::span<const int> candidates, int budget);

}  // namespace subfair

#endif  // SUBFAIR_GREEDY_H_
