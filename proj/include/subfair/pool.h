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

// Labeled item pool: feature vectors with a target label and a sensitive
// label per item, the (target, sensitive) cell index over it, and the
// per-epoch ground-set subsampler used by the trainer.

#ifndef SUBFAIR_POOL_H_
#define SUBFAIR_POOL_H_

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace subfair {

using Rng = std::mt19937_64;
using IdList = std::vector<int>;

// Item ids are the row indices of `features`, so they are unique and
// contiguous from 0 by construction.
struct LabeledPool {
  Eigen::MatrixXd features;  // n x d
  std::vector<int> targets;
  std::vector<int> sensitives;

  int size() const { return static_cast<int>(targets.size()); }
  int dim() const { return static_cast<int>(features.cols()); }

  // Throws Error unless features are finite, label vectors have matching
  // length, labels are non-negative and at least two distinct target and two
  // distinct sensitive values are present.
  void Validate() const;

  // Rows of `features` for `ids`, in order.
  Eigen::MatrixXd Rows(std::span<const int> ids) const;
};

// Parses the pool CSV: a header `id,f0,...,f{d-1},t,s` followed by one row
// per item. Rows may appear in any order but ids must be a permutation of
// 0..n-1. Errors carry the 1-based line number.
LabeledPool LoadPool(const std::string& path);
LabeledPool ParsePoolCsv(const std::string& text);

// Writes features with 9 significant digits.
void WritePoolCsv(const LabeledPool& pool, const std::string& path);
std::string FormatPoolCsv(const LabeledPool& pool);

using Cell = std::pair<int, int>;  // (target, sensitive)

class AttributeIndex {
 public:
  AttributeIndex() = default;

  // Index over every item of `pool`.
  explicit AttributeIndex(const LabeledPool& pool);
  // Index over the subset `ids` of `pool`.
  AttributeIndex(const LabeledPool& pool, std::span<const int> ids);

  const std::map<Cell, IdList>& by_pair() const { return by_pair_; }
  const std::set<int>& targets() const { return targets_; }
  const std::set<int>& sensitives() const { return sensitives_; }

  // T_t ∩ S_s.
  IdList CellIds(int t, int s) const;
  // T_t ∩ complement(S_s): same target, other sensitive values.
  IdList SameTargetOtherSensitive(int t, int s) const;
  // (V \ T_t) ∩ S_s: other targets, same sensitive value.
  IdList OtherTargetSameSensitive(int t, int s) const;

  int total() const;

 private:
  void Add(int id, int t, int s);

  std::map<Cell, IdList> by_pair_;
  std::set<int> targets_;
  std::set<int> sensitives_;
};

struct EpochGroundSet {
  IdList ids;  // sorted
  int epoch = 0;
  // Number of ids that were also in the previous ground set. Non-zero only
  // when the pool was too small to keep consecutive epochs disjoint.
  int overlap = 0;
};

// Number of ids drawn per epoch: ceil(fraction * pool_size).
int EpochSampleSize(int pool_size, double fraction);

// Draws ceil(fraction * pool_size) ids uniformly without replacement,
// avoiding the ids of `prev`. When fewer than the required count remain, the
// deficit is filled from `prev` and a warning is logged.
EpochGroundSet SubsampleEpoch(int pool_size, double fraction,
                              const EpochGroundSet* prev, Rng& rng);

}  // namespace subfair

#endif  // SUBFAIR_POOL_H_
