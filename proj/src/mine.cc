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

#include "subfair/mine.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "subfair/error.h"
#include "subfair/greedy.h"

namespace subfair {

std::string MinerKindName(MinerKind kind) {
  return kind == MinerKind::kShasam ? "shasam" : "random";
}

MinerKind ParseMinerKind(const std::string& name) {
  if (name == "shasam") return MinerKind::kShasam;
  if (name == "random") return MinerKind::kRandom;
  throw Error(ErrorCode::kInvalidArgument, "unknown miner '" + name + "'");
}

PairPools PoolsFor(const AttributeIndex& index, Cell pair) {
  return {index.CellIds(pair.first, pair.second),
          index.SameTargetOtherSensitive(pair.first, pair.second),
          index.OtherTargetSameSensitive(pair.first, pair.second)};
}

Cell SamplePair(const AttributeIndex& index, Rng& rng, int max_retries) {
  const std::vector<int> targets(index.targets().begin(),
                                 index.targets().end());
  const std::vector<int> sensitives(index.sensitives().begin(),
                                    index.sensitives().end());
  if (!targets.empty() && !sensitives.empty()) {
    std::uniform_int_distribution<size_t> pick_t(0, targets.size() - 1);
    std::uniform_int_distribution<size_t> pick_s(0, sensitives.size() - 1);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
      const Cell pair{targets[pick_t(rng)], sensitives[pick_s(rng)]};
      const PairPools pools = PoolsFor(index, pair);
      if (!pools.cell.empty() && !pools.positives.empty() &&
          !pools.negatives.empty()) {
        return pair;
      }
    }
  }
  throw Error(ErrorCode::kNoValidPair,
              "no (target, sensitive) pair with non-empty anchor, positive "
              "and negative pools after " +
                  std::to_string(max_retries) + " draws");
}

AnchorSelection SelectAnchors(std::span<const int> pool,
                              const SimilarityKernel& kernel, int k,
                              double epsilon) {
  LogDetGain objective(kernel, epsilon,
                       std::vector<int>(pool.begin(), pool.end()));
  const GreedyResult r = LazyGreedyMax(objective, pool, k);
  AnchorSelection out;
  out.ids = r.selected;
  out.value = r.value;
  const double floor = std::log(10.0 * epsilon);
  for (double g : r.gains) {
    if (g < floor) out.degenerate = true;
  }
  return out;
}

IdList SelectHardPositives(std::span<const int> pool,
                           std::span<const int> anchors,
                           const SimilarityKernel& kernel, int k) {
  if (anchors.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "hard positives need a non-empty anchor set");
  }
  FacilityLocationGain objective(kernel, SetUnion(pool, anchors),
                                 std::vector<int>(anchors.begin(), anchors.end()));
  return LazyGreedyMax(objective, pool, k).selected;
}

IdList SelectHardNegatives(std::span<const int> pool,
                           std::span<const int> anchors,
                           const SimilarityKernel& kernel, int k) {
  if (anchors.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "hard negatives need a non-empty anchor set");
  }
  FacilityLocationMutualInformation objective(
      kernel, SetUnion(pool, anchors),
      std::vector<int>(anchors.begin(), anchors.end()));
  return LazyGreedyMax(objective, pool, k).selected;
}

IdList RandomSubset(std::span<const int> pool, int k, Rng& rng) {
  IdList items(pool.begin(), pool.end());
  const size_t take = std::min(items.size(), static_cast<size_t>(std::max(k, 0)));
  for (size_t i = 0; i < take; ++i) {
    std::uniform_int_distribution<size_t> pick(i, items.size() - 1);
    std::swap(items[i], items[pick(rng)]);
  }
  items.resize(take);
  std::sort(items.begin(), items.end());
  return items;
}

MinedBatch MinePair(const AttributeIndex& index, std::span<const int> ids,
                    const EmbeddingMatrix& embeddings, Cell pair,
                    const MineOptions& options, Rng& rng) {
  if (options.k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "budget k must be at least 1");
  }
  if (static_cast<Eigen::Index>(ids.size()) != embeddings.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "one embedding row per id is required");
  }
  const PairPools pools = PoolsFor(index, pair);
  if (pools.cell.empty() || pools.positives.empty() || pools.negatives.empty()) {
    throw Error(ErrorCode::kNoValidPair,
                "pair (" + std::to_string(pair.first) + ", " +
                    std::to_string(pair.second) + ") has an empty pool");
  }
  MinedBatch batch;
  batch.pair = pair;
  const int budget = std::min<int>(
      {options.k, static_cast<int>(pools.cell.size()),
       static_cast<int>(pools.positives.size()),
       static_cast<int>(pools.negatives.size())});
  batch.short_batch = budget < options.k;

  if (options.miner == MinerKind::kRandom) {
    batch.anchors = RandomSubset(pools.cell, budget, rng);
    batch.positives = RandomSubset(pools.positives, budget, rng);
    batch.negatives = RandomSubset(pools.negatives, budget, rng);
    return batch;
  }

  // Kernel over the three pools only; local index = position in `members`.
  std::unordered_map<int, int> row_of;
  row_of.reserve(ids.size());
  for (size_t r = 0; r < ids.size(); ++r) row_of[ids[r]] = static_cast<int>(r);
  IdList members = SetUnion(SetUnion(pools.cell, pools.positives),
                            pools.negatives);
  std::unordered_map<int, int> local_of;
  EmbeddingMatrix e(static_cast<Eigen::Index>(members.size()), embeddings.cols());
  for (size_t m = 0; m < members.size(); ++m) {
    const auto it = row_of.find(members[m]);
    if (it == row_of.end()) {
      throw Error(ErrorCode::kOutOfRange,
                  "id " + std::to_string(members[m]) + " has no embedding row");
    }
    e.row(static_cast<Eigen::Index>(m)) = embeddings.row(it->second);
    local_of[members[m]] = static_cast<int>(m);
  }
  const SimilarityKernel kernel = CosineKernel(e, 1.0);
  auto to_local = [&local_of](const IdList& list) {
    IdList out;
    out.reserve(list.size());
    for (int id : list) out.push_back(local_of.at(id));
    return out;
  };
  auto to_ids = [&members](const IdList& list) {
    IdList out;
    out.reserve(list.size());
    for (int local : list) out.push_back(members[local]);
    return out;
  };

  const AnchorSelection anchors =
      SelectAnchors(to_local(pools.cell), kernel, budget, options.epsilon);
  batch.degenerate_anchors = anchors.degenerate;
  batch.anchors = to_ids(anchors.ids);
  batch.positives = to_ids(SelectHardPositives(to_local(pools.positives),
                                               anchors.ids, kernel, budget));
  batch.negatives = to_ids(SelectHardNegatives(to_local(pools.negatives),
                                               anchors.ids, kernel, budget));
  return batch;
}

MinedBatch Mine(const AttributeIndex& index, std::span<const int> ids,
                const EmbeddingMatrix& embeddings, const MineOptions& options,
                Rng& rng) {
  const Cell pair = SamplePair(index, rng, options.max_retries);
  return MinePair(index, ids, embeddings, pair, options, rng);
}

std::string FormatMinedBatchCsv(const MinedBatch& batch,
                                const LabeledPool& pool) {
  std::ostringstream out;
  out << "id,role,t,s\n";
  auto emit = [&](const IdList& list, const char* role) {
    for (int id : list) {
      out << id << ',' << role << ',' << pool.targets.at(id) << ','
          << pool.sensitives.at(id) << '\n';
    }
  };
  emit(batch.anchors, "anchor");
  emit(batch.positives, "positive");
  emit(batch.negatives, "negative");
  return out.str();
}

double MeanMaxSimilarity(const SimilarityKernel& kernel,
                         std::span<const int> members,
                         std::span<const int> anchors) {
  if (members.empty() || anchors.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty set in similarity summary");
  }
  double total = 0.0;
  for (int m : members) {
    double best = -INFINITY;
    for (int a : anchors) best = std::max(best, kernel(m, a));
    total += best;
  }
  return total / static_cast<double>(members.size());
}

MiningComparison CompareWithRandom(const LabeledPool& pool,
                                   const EmbeddingMatrix& embeddings, Cell pair,
                                   int k, double epsilon, int draws, Rng& rng,
                                   MinerKind miner) {
  if (embeddings.rows() != pool.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "one embedding row per pool item is required");
  }
  const AttributeIndex index(pool);
  std::vector<int> ids(pool.size());
  for (int i = 0; i < pool.size(); ++i) ids[i] = i;
  MineOptions options;
  options.k = k;
  options.epsilon = epsilon;
  options.miner = miner;
  MiningComparison c;
  c.batch = MinePair(index, ids, embeddings, pair, options, rng);

  const SimilarityKernel kernel = CosineKernel(embeddings, 1.0);
  const BaseFunction logdet = BaseFunction::LogDeterminant(kernel, epsilon);
  c.anchor_logdet = logdet.Eval(c.batch.anchors);
  c.positive_max_sim =
      MeanMaxSimilarity(kernel, c.batch.positives, c.batch.anchors);
  c.negative_max_sim =
      MeanMaxSimilarity(kernel, c.batch.negatives, c.batch.anchors);

  const PairPools pools = PoolsFor(index, pair);
  const int budget = static_cast<int>(c.batch.anchors.size());
  for (int d = 0; d < draws; ++d) {
    c.random_anchor_logdet.push_back(
        logdet.Eval(RandomSubset(pools.cell, budget, rng)));
    c.random_positive_max_sim.push_back(MeanMaxSimilarity(
        kernel, RandomSubset(pools.positives, budget, rng), c.batch.anchors));
    c.random_negative_max_sim.push_back(MeanMaxSimilarity(
        kernel, RandomSubset(pools.negatives, budget, rng), c.batch.anchors));
  }
  return c;
}

}  // namespace subfair
