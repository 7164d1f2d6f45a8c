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
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

#include "subfair/error.h"

namespace subfair {
namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) {
      f.remove_prefix(1);
    }
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' ||
                          f.back() == '\r')) {
      f.remove_suffix(1);
    }
  }
  return fields;
}

[[noreturn]] void ParseFail(int line, const std::string& what) {
  throw Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ": " + what);
}

int ParseInt(std::string_view field, int line, const char* name) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    ParseFail(line, std::string("invalid integer for ") + name + ": '" +
                        std::string(field) + "'");
  }
  return value;
}

double ParseReal(std::string_view field, int line) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    ParseFail(line, "invalid number '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    ParseFail(line, "non-finite feature '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

void LabeledPool::Validate() const {
  const int n = size();
  if (n == 0) throw Error(ErrorCode::kEmptyPool, "empty pool");
  if (static_cast<int>(sensitives.size()) != n || features.rows() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "features, targets and sensitives disagree in length");
  }
  if (!features.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "pool contains non-finite features");
  }
  std::set<int> t_values, s_values;
  for (int i = 0; i < n; ++i) {
    if (targets[i] < 0 || sensitives[i] < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "negative label on item " + std::to_string(i));
    }
    t_values.insert(targets[i]);
    s_values.insert(sensitives[i]);
  }
  if (t_values.size() < 2 || s_values.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "pool needs at least two target and two sensitive values");
  }
}

Eigen::MatrixXd LabeledPool::Rows(std::span<const int> ids) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(ids.size()), features.cols());
  for (size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] < 0 || ids[r] >= size()) {
      throw Error(ErrorCode::kOutOfRange,
                  "item id " + std::to_string(ids[r]) + " out of range");
    }
    out.row(static_cast<Eigen::Index>(r)) = features.row(ids[r]);
  }
  return out;
}

LabeledPool ParsePoolCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  // Header.
  int dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = SplitFields(line);
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() < 4 || fields.front() != "id" ||
        fields[fields.size() - 2] != "t" || fields.back() != "s") {
      ParseFail(line_no, "expected header 'id,f0,...,f{d-1},t,s'");
    }
    dim = static_cast<int>(fields.size()) - 3;
    for (int j = 0; j < dim; ++j) {
      if (fields[1 + j] != "f" + std::to_string(j)) {
        ParseFail(line_no, "expected column f" + std::to_string(j));
      }
    }
    break;
  }
  if (dim < 0) throw Error(ErrorCode::kEmptyPool, "empty pool");

  struct Row {
    int id;
    std::vector<double> x;
    int t;
    int s;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = SplitFields(line);
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (static_cast<int>(fields.size()) != dim + 3) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(dim + 3) + " fields, got " +
                      std::to_string(fields.size()));
    }
    Row row;
    row.id = ParseInt(fields[0], line_no, "id");
    row.x.reserve(dim);
    for (int j = 0; j < dim; ++j) row.x.push_back(ParseReal(fields[1 + j], line_no));
    row.t = ParseInt(fields[dim + 1], line_no, "t");
    row.s = ParseInt(fields[dim + 2], line_no, "s");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptyPool, "empty pool");

  const int n = static_cast<int>(rows.size());
  LabeledPool pool;
  pool.features.resize(n, dim);
  pool.targets.assign(n, -1);
  pool.sensitives.assign(n, -1);
  std::vector<bool> seen(n, false);
  for (const Row& row : rows) {
    if (row.id < 0 || row.id >= n) {
      throw Error(ErrorCode::kOutOfRange,
                  "id " + std::to_string(row.id) +
                      " outside contiguous range [0," + std::to_string(n) +
                      ")");
    }
    if (seen[row.id]) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate id " + std::to_string(row.id));
    }
    seen[row.id] = true;
    for (int j = 0; j < dim; ++j) pool.features(row.id, j) = row.x[j];
    pool.targets[row.id] = row.t;
    pool.sensitives[row.id] = row.s;
  }
  pool.Validate();
  return pool;
}

LabeledPool LoadPool(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParsePoolCsv(buffer.str());
}

std::string FormatPoolCsv(const LabeledPool& pool) {
  std::string out = "id";
  for (int j = 0; j < pool.dim(); ++j) out += ",f" + std::to_string(j);
  out += ",t,s\n";
  char buf[64];
  for (int i = 0; i < pool.size(); ++i) {
    out += std::to_string(i);
    for (int j = 0; j < pool.dim(); ++j) {
      std::snprintf(buf, sizeof(buf), ",%.9g", pool.features(i, j));
      out += buf;
    }
    out += "," + std::to_string(pool.targets[i]) + "," +
           std::to_string(pool.sensitives[i]) + "\n";
  }
  return out;
}

void WritePoolCsv(const LabeledPool& pool, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << FormatPoolCsv(pool);
}

AttributeIndex::AttributeIndex(const LabeledPool& pool) {
  for (int i = 0; i < pool.size(); ++i) {
    Add(i, pool.targets[i], pool.sensitives[i]);
  }
}

AttributeIndex::AttributeIndex(const LabeledPool& pool,
                               std::span<const int> ids) {
  std::vector<int> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  for (int id : sorted) {
    if (id < 0 || id >= pool.size()) {
      throw Error(ErrorCode::kOutOfRange,
                  "item id " + std::to_string(id) + " out of range");
    }
    Add(id, pool.targets[id], pool.sensitives[id]);
  }
}

void AttributeIndex::Add(int id, int t, int s) {
  by_pair_[{t, s}].push_back(id);
  targets_.insert(t);
  sensitives_.insert(s);
}

IdList AttributeIndex::CellIds(int t, int s) const {
  const auto it = by_pair_.find({t, s});
  return it == by_pair_.end() ? IdList{} : it->second;
}

IdList AttributeIndex::SameTargetOtherSensitive(int t, int s) const {
  IdList out;
  for (const auto& [cell, ids] : by_pair_) {
    if (cell.first == t && cell.second != s) {
      out.insert(out.end(), ids.begin(), ids.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

IdList AttributeIndex::OtherTargetSameSensitive(int t, int s) const {
  IdList out;
  for (const auto& [cell, ids] : by_pair_) {
    if (cell.first != t && cell.second == s) {
      out.insert(out.end(), ids.begin(), ids.end());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int AttributeIndex::total() const {
  int n = 0;
  for (const auto& [cell, ids] : by_pair_) n += static_cast<int>(ids.size());
  return n;
}

int EpochSampleSize(int pool_size, double fraction) {
  // The small slack keeps e.g. 0.2 * 100 from rounding up to 21.
  return static_cast<int>(std::ceil(fraction * pool_size - 1e-9));
}

EpochGroundSet SubsampleEpoch(int pool_size, double fraction,
                              const EpochGroundSet* prev, Rng& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "subsample fraction must lie in (0, 1]");
  }
  const int needed = EpochSampleSize(pool_size, fraction);
  if (needed < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "fraction * pool size must be at least 1");
  }

  std::vector<bool> in_prev(pool_size, false);
  if (prev != nullptr) {
    for (int id : prev->ids) {
      if (id >= 0 && id < pool_size) in_prev[id] = true;
    }
  }
  IdList fresh, stale;
  for (int id = 0; id < pool_size; ++id) {
    (in_prev[id] ? stale : fresh).push_back(id);
  }

  // Partial Fisher-Yates: the first `count` entries become a uniform sample.
  auto draw = [&rng](IdList& from, int count) {
    IdList out;
    for (int i = 0; i < count; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(from.size()) - 1);
      std::swap(from[i], from[pick(rng)]);
      out.push_back(from[i]);
    }
    return out;
  };

  EpochGroundSet result;
  result.epoch = prev != nullptr ? prev->epoch + 1 : 0;
  const int from_fresh = std::min(needed, static_cast<int>(fresh.size()));
  result.ids = draw(fresh, from_fresh);
  if (from_fresh < needed) {
    result.overlap = needed - from_fresh;
    const IdList refill = draw(stale, result.overlap);
    result.ids.insert(result.ids.end(), refill.begin(), refill.end());
    std::clog << "warning: epoch ground set overlaps the previous one in "
              << result.overlap << " of " << needed << " items\n";
  }
  std::sort(result.ids.begin(), result.ids.end());
  return result;
}

}  // namespace subfair
