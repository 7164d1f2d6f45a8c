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

#include "subfair/greedy.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "subfair/error.h"
#include "subfair/parallel.h"

namespace subfair {
namespace {

void CheckProblem(std::span<const int> candidates, int budget) {
  if (budget < 1) {
    throw Error(ErrorCode::kInvalidArgument, "budget must be at least 1");
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "candidate pool is empty");
  }
  std::vector<int> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidArgument, "candidate pool has repeats");
  }
}

// (gain, id) ordering: larger gain first, then smaller id.
bool Better(double gain_a, int id_a, double gain_b, int id_b) {
  if (gain_a != gain_b) return gain_a > gain_b;
  return id_a < id_b;
}

void Commit(GreedyObjective& objective, int id, double gain,
            GreedyResult& result) {
  if (!std::isfinite(gain)) {
    throw Error(ErrorCode::kNumericalDomain,
                "best marginal gain is not finite (id " + std::to_string(id) +
                    ")");
  }
  objective.Add(id);
  result.selected.push_back(id);
  result.gains.push_back(gain);
  result.value += gain;
}

}  // namespace

std::vector<double> ScoreCandidates(const GreedyObjective& objective,
                                    std::span<const int> candidates) {
  const int n = static_cast<int>(candidates.size());
  std::vector<double> gains(n);
#pragma omp parallel for schedule(static) num_threads(ThreadCount())
  for (int c = 0; c < n; ++c) gains[c] = objective.Gain(candidates[c]);
  return gains;
}

GreedyResult GreedyMax(GreedyObjective& objective,
                       std::span<const int> candidates, int budget) {
  CheckProblem(candidates, budget);
  objective.Reset();
  GreedyResult result;
  const int n = static_cast<int>(candidates.size());
  result.short_selection = n < budget;
  const int picks = std::min(n, budget);

  std::vector<int> remaining(candidates.begin(), candidates.end());
  for (int step = 0; step < picks; ++step) {
    const std::vector<double> gains = ScoreCandidates(objective, remaining);
    result.evaluations += static_cast<int64_t>(remaining.size());
    size_t best = 0;
    for (size_t c = 1; c < remaining.size(); ++c) {
      // NaN gains never win.
      if (std::isnan(gains[best]) ||
          (!std::isnan(gains[c]) &&
           Better(gains[c], remaining[c], gains[best], remaining[best]))) {
        best = c;
      }
    }
    Commit(objective, remaining[best], gains[best], result);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return result;
}

GreedyResult LazyGreedyMax(GreedyObjective& objective,
                           std::span<const int> candidates, int budget) {
  CheckProblem(candidates, budget);
  objective.Reset();
  GreedyResult result;
  const int n = static_cast<int>(candidates.size());
  result.short_selection = n < budget;
  const int picks = std::min(n, budget);

  struct Entry {
    double bound;
    int id;
    int round;  // selection step at which `bound` was computed
  };
  auto worse = [](const Entry& a, const Entry& b) {
    return Better(b.bound, b.id, a.bound, a.id);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);

  // Rounds 0 and 1 score every remaining candidate exactly like GreedyMax.
  std::vector<int> remaining(candidates.begin(), candidates.end());
  for (int step = 0; step < std::min(picks, 2); ++step) {
    const std::vector<double> gains = ScoreCandidates(objective, remaining);
    result.evaluations += static_cast<int64_t>(remaining.size());
    if (step == 1 || picks == 1) {
      for (size_t c = 0; c < remaining.size(); ++c) {
        heap.push({std::isnan(gains[c]) ? -INFINITY : gains[c], remaining[c],
                   step});
      }
      break;
    }
    size_t best = 0;
    for (size_t c = 1; c < remaining.size(); ++c) {
      if (std::isnan(gains[best]) ||
          (!std::isnan(gains[c]) &&
           Better(gains[c], remaining[c], gains[best], remaining[best]))) {
        best = c;
      }
    }
    Commit(objective, remaining[best], gains[best], result);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
  }

  int step = static_cast<int>(result.selected.size());
  while (step < picks) {
    Entry top = heap.top();
    heap.pop();
    if (top.round == step) {
      Commit(objective, top.id, top.bound, result);
      ++step;
      continue;
    }
    double gain = objective.Gain(top.id);
    ++result.evaluations;
    if (std::isnan(gain)) gain = -INFINITY;
    heap.push({gain, top.id, step});
  }
  return result;
}

}  // namespace subfair
