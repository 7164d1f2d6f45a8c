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


#include "subfair/pool.h"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "subfair/error.h"
#include "test_util.h"

namespace subfair {
namespace {

using testing::CodeOf;

TEST(PoolTest, ParsesFourRows) {
  const LabeledPool pool = ParsePoolCsv(
      "id,f0,f1,t,s\n"
      "0,1.5,-2,0,0\n"
      "1,0.25,3e-1,1,0\n"
      "2,7,8,0,1\n"
      "3,-1,0,1,1\n");
  EXPECT_EQ(pool.size(), 4);
  EXPECT_EQ(pool.dim(), 2);
  EXPECT_EQ(pool.features(1, 1), 0.3);
  EXPECT_EQ(pool.targets, (std::vector<int>{0, 1, 0, 1}));
  EXPECT_EQ(pool.sensitives, (std::vector<int>{0, 0, 1, 1}));
}

TEST(PoolTest, RowsMayComeInAnyOrder) {
  const LabeledPool pool = ParsePoolCsv(
      "id,f0,t,s\n3,3,1,1\n1,1,1,0\n0,0,0,0\n2,2,0,1\n");
  for (int i = 0; i < 4; ++i) EXPECT_EQ(pool.features(i, 0), i);
}

TEST(PoolTest, RejectsMalformedInput) {
  EXPECT_EQ(CodeOf([] { ParsePoolCsv("id,x,t,s\n0,1,0,0\n"); }),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParsePoolCsv("id,f0,t,s\n0,1,0\n"); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { ParsePoolCsv("id,f0,t,s\n0,abc,0,0\n1,1,1,1\n"); }),
            ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParsePoolCsv("id,f0,t,s\n0,1,0,0\n0,2,1,1\n"); }),
            ErrorCode::kDuplicateId);
  EXPECT_EQ(CodeOf([] { ParsePoolCsv("id,f0,t,s\n0,1,0,0\n5,2,1,1\n"); }),
            ErrorCode::kOutOfRange);
  EXPECT_EQ(CodeOf([] { ParsePoolCsv("id,f0,t,s\n"); }), ErrorCode::kEmptyPool);
  EXPECT_EQ(CodeOf([] { ParsePoolCsv("id,f0,t,s\n0,nan,0,0\n1,1,1,1\n"); }),
            ErrorCode::kParse);
  // A single target value cannot form negatives.
  EXPECT_EQ(CodeOf([] { ParsePoolCsv("id,f0,t,s\n0,1,0,0\n1,2,0,1\n"); }),
            ErrorCode::kInvalidArgument);
}

TEST(PoolTest, CsvRoundTripIsExactAtNineDigits) {
  const std::string text =
      "id,f0,f1,t,s\n0,0.123456789,-12345.6789,0,0\n1,1e-05,2,1,1\n";
  const LabeledPool pool = ParsePoolCsv(text);
  const LabeledPool again = ParsePoolCsv(FormatPoolCsv(pool));
  EXPECT_EQ(again.features, pool.features);
  EXPECT_EQ(again.targets, pool.targets);
  EXPECT_EQ(again.sensitives, pool.sensitives);
  EXPECT_EQ(FormatPoolCsv(again), FormatPoolCsv(pool));
}

TEST(PoolTest, LoadMissingFileIsIoError) {
  EXPECT_EQ(CodeOf([] { LoadPool("/nonexistent/pool.csv"); }), ErrorCode::kIo);
}

LabeledPool GridPool() {
  // t in {0,1,2}, s in {0,1}; item i has t = i % 3 and s = (i / 3) % 2.
  LabeledPool pool;
  pool.features = Eigen::MatrixXd::Zero(12, 1);
  for (int i = 0; i < 12; ++i) {
    pool.features(i, 0) = i;
    pool.targets.push_back(i % 3);
    pool.sensitives.push_back((i / 3) % 2);
  }
  return pool;
}

TEST(AttributeIndexTest, PoolsPartitionAsExpected) {
  const LabeledPool pool = GridPool();
  const AttributeIndex index(pool);
  EXPECT_EQ(index.total(), 12);
  EXPECT_EQ(index.CellIds(1, 0), (IdList{1, 7}));
  EXPECT_EQ(index.SameTargetOtherSensitive(1, 0), (IdList{4, 10}));
  EXPECT_EQ(index.OtherTargetSameSensitive(1, 0), (IdList{0, 2, 6, 8}));
  EXPECT_EQ(index.CellIds(5, 0), IdList{});
}

TEST(AttributeIndexTest, SubsetIndexOnlySeesItsIds) {
  const LabeledPool pool = GridPool();
  const IdList ids = {0, 1, 4, 7};
  const AttributeIndex index(pool, ids);
  EXPECT_EQ(index.total(), 4);
  EXPECT_EQ(index.CellIds(1, 0), (IdList{1, 7}));
  EXPECT_EQ(index.OtherTargetSameSensitive(1, 0), (IdList{0}));
}

TEST(SubsampleEpochTest, SizesAndDisjointness) {
  Rng rng(3);
  EXPECT_EQ(EpochSampleSize(800, 0.2), 160);
  EXPECT_EQ(EpochSampleSize(7, 0.5), 4);
  const EpochGroundSet first = SubsampleEpoch(100, 0.3, nullptr, rng);
  const EpochGroundSet second = SubsampleEpoch(100, 0.3, &first, rng);
  EXPECT_EQ(first.ids.size(), 30u);
  EXPECT_EQ(second.ids.size(), 30u);
  EXPECT_EQ(second.epoch, 1);
  EXPECT_EQ(second.overlap, 0);
  EXPECT_TRUE(std::is_sorted(second.ids.begin(), second.ids.end()));
  std::set<int> seen(first.ids.begin(), first.ids.end());
  for (int id : second.ids) EXPECT_FALSE(seen.count(id)) << id;
}

TEST(SubsampleEpochTest, RefillsFromPreviousWhenTooFewRemain) {
  Rng rng(4);
  const EpochGroundSet first = SubsampleEpoch(10, 0.7, nullptr, rng);
  const EpochGroundSet second = SubsampleEpoch(10, 0.7, &first, rng);
  EXPECT_EQ(second.ids.size(), 7u);
  EXPECT_EQ(second.overlap, 4);
  EXPECT_EQ(std::set<int>(second.ids.begin(), second.ids.end()).size(), 7u);
}

TEST(SubsampleEpochTest, RejectsBadFraction) {
  Rng rng(5);
  EXPECT_EQ(CodeOf([&] { SubsampleEpoch(10, 0.0, nullptr, rng); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { SubsampleEpoch(10, 1.5, nullptr, rng); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace subfair
