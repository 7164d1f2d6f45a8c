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


#include "subfair/fairness.h"

#include <cmath>

#include <gtest/gtest.h>
#include <json.hpp>

#include "subfair/pool.h"
#include "test_util.h"

namespace subfair {
namespace {

using testing::CodeOf;

struct Tally {
  int tp, fn, fp, tn;
};

struct Labels {
  std::vector<int> y, p, s;
};

// Binary labels for two groups built from per-group confusion counts.
Labels FromTallies(const Tally& g0, const Tally& g1) {
  Labels l;
  int group = 0;
  for (const Tally& t : {g0, g1}) {
    auto add = [&](int truth, int pred, int count) {
      for (int i = 0; i < count; ++i) {
        l.y.push_back(truth);
        l.p.push_back(pred);
        l.s.push_back(group);
      }
    };
    add(1, 1, t.tp);
    add(1, 0, t.fn);
    add(0, 1, t.fp);
    add(0, 0, t.tn);
    ++group;
  }
  return l;
}

TEST(FairnessTest, TprGapCase) {
  // TPR 0.8 vs 0.6, FPR 0.2 vs 0.2.
  const Labels l = FromTallies({8, 2, 2, 8}, {6, 4, 2, 8});
  const EvalReport r = Evaluate(l.y, l.p, l.s);
  EXPECT_EQ(r.eo, 20.0);
  EXPECT_EQ(r.eopp, 20.0);
  EXPECT_EQ(r.acc, 75.0);
  // Group 0: (0.8 + 0.8) / 2 for both classes; group 1: (0.6 + 0.8) / 2.
  EXPECT_EQ(r.ba, 75.0);
  EXPECT_EQ(r.dp, 10.0);
}

TEST(FairnessTest, FprGapCase) {
  // TPR equal, FPR 0.1 vs 0.3: EO sees it, EOpp does not.
  const Labels l = FromTallies({9, 1, 1, 9}, {9, 1, 3, 7});
  const EvalReport r = Evaluate(l.y, l.p, l.s);
  EXPECT_EQ(r.eo, 20.0);
  EXPECT_EQ(r.eopp, 0.0);
  EXPECT_EQ(r.dp, 10.0);
}

TEST(FairnessTest, DemographicParityCase) {
  // Positive prediction rate 0.6 vs 0.4.
  const Labels l = FromTallies({10, 0, 2, 8}, {6, 4, 2, 8});
  EXPECT_EQ(DemographicParity(l.p, l.s), 20.0);
}

TEST(FairnessTest, PerfectPredictions) {
  const Labels l = FromTallies({5, 0, 0, 5}, {3, 0, 0, 7});
  const EvalReport r = Evaluate(l.y, l.y, l.s);
  EXPECT_EQ(r.acc, 100.0);
  EXPECT_EQ(r.eo, 0.0);
  EXPECT_EQ(r.ba, 100.0);
}

TEST(FairnessTest, ThreeGroupsTakeTheLargestPairGap) {
  std::vector<int> y, p, s;
  // Group g predicts positives right with rate (4 - g) / 4.
  for (int g = 0; g < 3; ++g) {
    for (int i = 0; i < 4; ++i) {
      y.push_back(1);
      p.push_back(i < 4 - g ? 1 : 0);
      s.push_back(g);
      y.push_back(0);
      p.push_back(0);
      s.push_back(g);
    }
  }
  EXPECT_EQ(Evaluate(y, p, s).eopp, 50.0);
}

TEST(FairnessTest, UndefinedRatesAreSkippedWithWarnings) {
  // Group 1 has no negatives.
  const std::vector<int> y = {1, 0, 1, 1}, p = {1, 0, 0, 1}, s = {0, 0, 1, 1};
  const EvalReport r = Evaluate(y, p, s);
  EXPECT_FALSE(r.eo.has_value());
  EXPECT_EQ(r.eopp, 50.0);
  EXPECT_FALSE(r.warnings.empty());
  const nlohmann::json j = nlohmann::json::parse(EvalReportJson(r));
  EXPECT_TRUE(j["eo"].is_null());
  for (const char* key : {"acc", "ba", "eo", "dp", "eopp", "groups"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(FairnessTest, ConfusionCounts) {
  const std::vector<int> y = {0, 1, 2, 2}, p = {0, 2, 2, 1}, s = {0, 0, 0, 0};
  const GroupedConfusion gc = ConfusionByGroup(y, p, s);
  EXPECT_EQ(gc.classes, (std::vector<int>{0, 1, 2}));
  const ConfusionCounts& two = gc.at(0, 2);
  EXPECT_EQ(two.tp, 1);
  EXPECT_EQ(two.fn, 1);
  EXPECT_EQ(two.fp, 1);
  EXPECT_EQ(two.tn, 1);
  EXPECT_EQ(gc.group_correct.at(0), 2);
}

TEST(FairnessTest, EqualizedOddsBoundsEqualOpportunity) {
  Rng rng(81);
  std::uniform_int_distribution<int> count(1, 20), bit(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> y, p, s;
    for (int g = 0; g < 2; ++g) {
      for (int truth : {0, 1}) {
        for (int i = count(rng); i > 0; --i) {
          y.push_back(truth);
          p.push_back(bit(rng));
          s.push_back(g);
        }
      }
    }
    const EvalReport r = Evaluate(y, p, s);
    ASSERT_TRUE(r.eo && r.eopp);
    EXPECT_GE(*r.eo, *r.eopp);
    EXPECT_GE(*r.eo, 0.0);
    EXPECT_LE(*r.eo, 100.0);
  }
}

TEST(FairnessTest, LengthMismatch) {
  const std::vector<int> a = {0, 1}, b = {0};
  EXPECT_EQ(CodeOf([&] { Evaluate(a, b, a); }), ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace subfair
