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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include <json.hpp>

#include "subfair/error.h"

namespace subfair {
namespace {

void Warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings != nullptr) warnings->push_back(std::move(message));
}

bool RatesDefined(const GroupedConfusion& gc, int cls) {
  for (int g : gc.groups) {
    const ConfusionCounts& c = gc.at(g, cls);
    if (c.positives() == 0 || c.negatives() == 0) return false;
  }
  return true;
}

struct Ratio {
  int64_t num;
  int64_t den;
};

// 100 * |a - b| with one rounding: the difference is taken on integers by
// cross-multiplication.
double GapPoints(Ratio a, Ratio b) {
  const int64_t diff = a.num * b.den - b.num * a.den;
  return static_cast<double>(100 * (diff < 0 ? -diff : diff)) /
         static_cast<double>(a.den * b.den);
}

Ratio Tpr(const ConfusionCounts& c) { return {c.tp, c.positives()}; }
Ratio Fpr(const ConfusionCounts& c) { return {c.fp, c.negatives()}; }

// Largest pairwise gap of `rate` across groups for class `cls`, in points.
template <typename Rate>
double MaxGap(const GroupedConfusion& gc, int cls, Rate rate) {
  double gap = 0.0;
  for (size_t a = 0; a < gc.groups.size(); ++a) {
    for (size_t b = a + 1; b < gc.groups.size(); ++b) {
      gap = std::max(gap, GapPoints(rate(gc.at(gc.groups[a], cls)),
                                    rate(gc.at(gc.groups[b], cls))));
    }
  }
  return gap;
}

void CheckLengths(size_t a, size_t b, size_t c) {
  if (a != b || a != c) {
    throw Error(ErrorCode::kDimensionMismatch,
                "label, prediction and group vectors differ in length");
  }
}

}  // namespace

GroupedConfusion ConfusionByGroup(std::span<const int> y_true,
                                  std::span<const int> y_pred,
                                  std::span<const int> s) {
  CheckLengths(y_true.size(), y_pred.size(), s.size());
  std::set<int> groups(s.begin(), s.end());
  std::set<int> classes(y_true.begin(), y_true.end());
  classes.insert(y_pred.begin(), y_pred.end());
  GroupedConfusion gc;
  gc.groups.assign(groups.begin(), groups.end());
  gc.classes.assign(classes.begin(), classes.end());
  for (int g : gc.groups) {
    gc.group_size[g] = 0;
    gc.group_correct[g] = 0;
    for (int c : gc.classes) gc.counts[{g, c}] = {};
  }
  for (size_t i = 0; i < y_true.size(); ++i) {
    const int g = s[i];
    ++gc.group_size[g];
    if (y_true[i] == y_pred[i]) ++gc.group_correct[g];
    for (int c : gc.classes) {
      ConfusionCounts& cc = gc.counts[{g, c}];
      const bool truth = y_true[i] == c;
      const bool pred = y_pred[i] == c;
      if (truth && pred) {
        ++cc.tp;
      } else if (truth) {
        ++cc.fn;
      } else if (pred) {
        ++cc.fp;
      } else {
        ++cc.tn;
      }
    }
  }
  return gc;
}

std::optional<double> EqualizedOdds(const GroupedConfusion& gc,
                                    std::vector<std::string>* warnings) {
  std::optional<double> eo;
  for (int cls : gc.classes) {
    if (!RatesDefined(gc, cls)) {
      Warn(warnings, "equalized odds: class " + std::to_string(cls) +
                         " skipped, a group lacks positives or negatives");
      continue;
    }
    const double gap = std::max(MaxGap(gc, cls, Tpr), MaxGap(gc, cls, Fpr));
    eo = std::max(eo.value_or(0.0), gap);
  }
  return eo;
}

std::optional<double> EqualOpportunity(const GroupedConfusion& gc,
                                       int positive_class,
                                       std::vector<std::string>* warnings) {
  if (std::find(gc.classes.begin(), gc.classes.end(), positive_class) ==
      gc.classes.end()) {
    Warn(warnings, "equal opportunity: positive class " +
                       std::to_string(positive_class) + " never occurs");
    return std::nullopt;
  }
  for (int g : gc.groups) {
    if (gc.at(g, positive_class).positives() == 0) {
      Warn(warnings, "equal opportunity: group " + std::to_string(g) +
                         " has no positives");
      return std::nullopt;
    }
  }
  return MaxGap(gc, positive_class, Tpr);
}

double DemographicParity(std::span<const int> y_pred, std::span<const int> s) {
  if (y_pred.size() != s.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "prediction and group vectors differ in length");
  }
  if (y_pred.empty()) {
    throw Error(ErrorCode::kEmptyPool, "no predictions");
  }
  std::map<int, int> size;
  std::map<std::pair<int, int>, int> hits;  // (group, class)
  std::set<int> classes(y_pred.begin(), y_pred.end());
  for (size_t i = 0; i < y_pred.size(); ++i) {
    ++size[s[i]];
    ++hits[{s[i], y_pred[i]}];
  }
  double gap = 0.0;
  for (int cls : classes) {
    for (auto a = size.begin(); a != size.end(); ++a) {
      for (auto b = std::next(a); b != size.end(); ++b) {
        gap = std::max(gap, GapPoints({hits[{a->first, cls}], a->second},
                                      {hits[{b->first, cls}], b->second}));
      }
    }
  }
  return gap;
}

std::optional<double> BalancedAccuracy(const GroupedConfusion& gc,
                                       std::vector<std::string>* warnings) {
  double total = 0.0;
  int used = 0;
  for (int g : gc.groups) {
    double sum = 0.0;
    int classes = 0;
    for (int cls : gc.classes) {
      const ConfusionCounts& c = gc.at(g, cls);
      if (c.positives() == 0 || c.negatives() == 0) continue;
      sum += 0.5 * (c.tpr() + c.tnr());
      ++classes;
    }
    if (classes == 0) {
      Warn(warnings, "balanced accuracy: group " + std::to_string(g) +
                         " skipped, no class has both positives and negatives");
      continue;
    }
    total += sum / classes;
    ++used;
  }
  if (used == 0) return std::nullopt;
  return 100.0 * total / used;
}

EvalReport Evaluate(std::span<const int> y_true, std::span<const int> y_pred,
                    std::span<const int> s) {
  const GroupedConfusion gc = ConfusionByGroup(y_true, y_pred, s);
  if (y_true.empty()) throw Error(ErrorCode::kEmptyPool, "no predictions");
  EvalReport r;
  int correct = 0;
  for (size_t i = 0; i < y_true.size(); ++i) correct += y_true[i] == y_pred[i];
  r.acc = 100.0 * correct / static_cast<double>(y_true.size());
  r.ba = BalancedAccuracy(gc, &r.warnings);
  r.eo = EqualizedOdds(gc, &r.warnings);
  r.dp = DemographicParity(y_pred, s);
  r.eopp = EqualOpportunity(gc, 1, &r.warnings);
  for (int g : gc.groups) {
    GroupBreakdown b;
    b.group = g;
    b.size = gc.group_size.at(g);
    b.acc = 100.0 * gc.group_correct.at(g) / b.size;
    for (int cls : gc.classes) {
      const ConfusionCounts& c = gc.at(g, cls);
      if (c.positives() > 0) b.tpr[cls] = c.tpr();
      if (c.negatives() > 0) b.fpr[cls] = c.fpr();
    }
    r.groups.push_back(std::move(b));
  }
  return r;
}

std::string EvalReportJson(const EvalReport& report) {
  using nlohmann::json;
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  json groups = json::array();
  for (const GroupBreakdown& g : report.groups) {
    json tpr = json::object();
    json fpr = json::object();
    for (const auto& [cls, v] : g.tpr) tpr[std::to_string(cls)] = v;
    for (const auto& [cls, v] : g.fpr) fpr[std::to_string(cls)] = v;
    groups.push_back(
        {{"s", g.group}, {"n", g.size}, {"acc", g.acc}, {"tpr", tpr}, {"fpr", fpr}});
  }
  json j = {{"acc", report.acc},
            {"ba", opt(report.ba)},
            {"eo", opt(report.eo)},
            {"dp", report.dp},
            {"eopp", opt(report.eopp)},
            {"groups", groups},
            {"eo_definition", kEqualizedOddsDefinition},
            {"warnings", report.warnings}};
  return j.dump(2) + "\n";
}

}  // namespace subfair
