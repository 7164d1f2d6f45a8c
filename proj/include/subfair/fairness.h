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

// Accuracy and group-fairness metrics over predictions split by sensitive
// group. Gap metrics are reported in points (0..100).

#ifndef SUBFAIR_FAIRNESS_H_
#define SUBFAIR_FAIRNESS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace subfair {

// One-vs-rest counts of a single class inside a single group.
struct ConfusionCounts {
  int tp = 0;
  int fp = 0;
  int tn = 0;
  int fn = 0;

  int positives() const { return tp + fn; }
  int negatives() const { return fp + tn; }
  double tpr() const { return static_cast<double>(tp) / positives(); }
  double fpr() const { return static_cast<double>(fp) / negatives(); }
  double tnr() const { return static_cast<double>(tn) / negatives(); }
};

struct GroupedConfusion {
  std::vector<int> groups;   // sorted sensitive values present
  std::vector<int> classes;  // sorted union of true and predicted labels
  std::map<std::pair<int, int>, ConfusionCounts> counts;  // (group, class)
  std::map<int, int> group_size;
  std::map<int, int> group_correct;

  const ConfusionCounts& at(int group, int cls) const {
    return counts.at({group, cls});
  }
};

GroupedConfusion ConfusionByGroup(std::span<const int> y_true,
                                  std::span<const int> y_pred,
                                  std::span<const int> s);

// Metrics return nullopt when no class/group could be evaluated; skipped
// classes and groups are described in `warnings` when it is given.

// 100 * max over classes and group pairs of max(|dTPR|, |dFPR|). A class is
// skipped unless every group has at least one positive and one negative.
std::optional<double> EqualizedOdds(const GroupedConfusion& gc,
                                    std::vector<std::string>* warnings = nullptr);

// 100 * max over group pairs of |dTPR| for `positive_class`.
std::optional<double> EqualOpportunity(
    const GroupedConfusion& gc, int positive_class = 1,
    std::vector<std::string>* warnings = nullptr);

// 100 * max over classes and group pairs of |P(pred = c | a) - P(pred = c | b)|.
// With binary targets both classes give the same gap.
double DemographicParity(std::span<const int> y_pred, std::span<const int> s);

// 100 * mean over groups of the mean over classes of (TPR + TNR) / 2.
// Classes with an undefined rate in a group are skipped inside that group.
std::optional<double> BalancedAccuracy(
    const GroupedConfusion& gc, std::vector<std::string>* warnings = nullptr);

struct GroupBreakdown {
  int group = 0;
  int size = 0;
  double acc = 0.0;
  std::map<int, double> tpr;  // per class, when defined
  std::map<int, double> fpr;
};

inline constexpr const char* kEqualizedOddsDefinition =
    "100 * max over target classes (one-vs-rest) and sensitive-group pairs "
    "of max(|TPR_a - TPR_b|, |FPR_a - FPR_b|)";

struct EvalReport {
  double acc = 0.0;
  std::optional<double> ba;
  std::optional<double> eo;
  double dp = 0.0;
  std::optional<double> eopp;
  std::vector<GroupBreakdown> groups;
  std::vector<std::string> warnings;
};

EvalReport Evaluate(std::span<const int> y_true, std::span<const int> y_pred,
                    std::span<const int> s);

// Keys acc, ba, eo, dp, eopp, groups, eo_definition, warnings. Undefined
// metrics are null.
std::string EvalReportJson(const EvalReport& report);

}  // namespace subfair

#endif  // SUBFAIR_FAIRNESS_H_
