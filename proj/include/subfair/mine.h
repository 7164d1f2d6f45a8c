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

// Hard-sample mining for one (target, sensitive) pair: diverse anchors from
// the pair's cell, hard positives from the same target with another
// sensitive value, hard negatives from other targets with the same
// sensitive value.

#ifndef SUBFAIR_MINE_H_
#define SUBFAIR_MINE_H_

#include <span>
#include <string>
#include <vector>

#include "subfair/kernel.h"
#include "subfair/pool.h"
#include "subfair/submodular.h"

namespace subfair {

enum class MinerKind { kShasam, kRandom };

std::string MinerKindName(MinerKind kind);
MinerKind ParseMinerKind(const std::string& name);

struct MinedBatch {
  Cell pair{-1, -1};
  IdList anchors;
  IdList positives;
  IdList negatives;
  // Some pool held fewer than k items; all three budgets were shrunk to the
  // smallest pool size.
  bool short_batch = false;
  // The anchor selection ran into near-duplicate embeddings.
  bool degenerate_anchors = false;
};

// The three candidate pools of a pair.
struct PairPools {
  IdList cell;       // T_t ∩ S_s
  IdList positives;  // T_t ∩ complement(S_s)
  IdList negatives;  // (V \ T_t) ∩ S_s
};
PairPools PoolsFor(const AttributeIndex& index, Cell pair);

// Draws (t, s) uniformly from the index's label values until all three pools
// of the pair are non-empty. Throws kNoValidPair after `max_retries` misses.
Cell SamplePair(const AttributeIndex& index, Rng& rng, int max_retries = 1000);

struct AnchorSelection {
  IdList ids;
  double value = 0.0;  // logdet(S_A + eps I)
  // Some pick had residual variance below 10 * eps.
  bool degenerate = false;
};

// The functions below take kernel indices. Greedy log-determinant
// maximization over `pool`.
AnchorSelection SelectAnchors(std::span<const int> pool,
                              const SimilarityKernel& kernel, int k,
                              double epsilon = kDefaultLogDetEpsilon);

// Greedy maximization of the facility-location conditional gain
// H(P | anchors), universe = pool u anchors.
IdList SelectHardPositives(std::span<const int> pool,
                           std::span<const int> anchors,
                           const SimilarityKernel& kernel, int k);

// Greedy maximization of the facility-location mutual information
// I(N; anchors), universe = pool u anchors.
IdList SelectHardNegatives(std::span<const int> pool,
                           std::span<const int> anchors,
                           const SimilarityKernel& kernel, int k);

struct MineOptions {
  int k = 16;
  MinerKind miner = MinerKind::kShasam;
  double epsilon = kDefaultLogDetEpsilon;
  int max_retries = 1000;
};

// `k` distinct ids drawn uniformly from `pool` (all of it when smaller),
// returned sorted.
IdList RandomSubset(std::span<const int> pool, int k, Rng& rng);

// Mines one batch for `pair`. `ids` lists the item ids covered by `index`
// and `embeddings` holds one row per entry of `ids`, in the same order.
// Similarities are raw cosines (no temperature). Returned ids are item ids.
MinedBatch MinePair(const AttributeIndex& index, std::span<const int> ids,
                    const EmbeddingMatrix& embeddings, Cell pair,
                    const MineOptions& options, Rng& rng);

// SamplePair followed by MinePair.
MinedBatch Mine(const AttributeIndex& index, std::span<const int> ids,
                const EmbeddingMatrix& embeddings, const MineOptions& options,
                Rng& rng);

// id,role,t,s rows for every mined item.
std::string FormatMinedBatchCsv(const MinedBatch& batch,
                                const LabeledPool& pool);

// Mean over `members` of the largest cosine similarity to any of `anchors`
// (kernel indices).
double MeanMaxSimilarity(const SimilarityKernel& kernel,
                         std::span<const int> members,
                         std::span<const int> anchors);

struct MiningComparison {
  MinedBatch batch;
  double anchor_logdet = 0.0;
  double positive_max_sim = 0.0;  // mean max cosine to the anchors
  double negative_max_sim = 0.0;
  // One entry per random draw. Random anchors are uniform k-subsets of the
  // cell; random positives and negatives are uniform k-subsets of their
  // pools, scored against the mined anchors.
  std::vector<double> random_anchor_logdet;
  std::vector<double> random_positive_max_sim;
  std::vector<double> random_negative_max_sim;
};

// Mines `pair` over the whole pool with `miner`, `embeddings` holding one row
// per item, and compares the selection with `draws` random draws of the same
// sizes.
MiningComparison CompareWithRandom(const LabeledPool& pool,
                                   const EmbeddingMatrix& embeddings, Cell pair,
                                   int k, double epsilon, int draws, Rng& rng,
                                   MinerKind miner = MinerKind::kShasam);

}  // namespace subfair

#endif  // SUBFAIR_MINE_H_
