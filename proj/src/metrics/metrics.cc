// metrics/metrics.cc


// Copyright 2026  The BargeBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "bargebench/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bargebench/common/error.h"

namespace bargebench {

namespace {

struct ClassCounts {
  size_t pos = 0, neg = 0;
};

ClassCounts CountClasses(const ScoredSet &set, const char *metric) {
  ValidateScoredSet(set);
  ClassCounts c;
  for (int y : set.labels) (y ? c.pos : c.neg)++;
  if (c.pos == 0 || c.neg == 0)
    throw NotApplicableError(std::string(metric) +
                             " needs positive and negative samples, got " +
                             std::to_string(c.pos) + " positive / " +
                             std::to_string(c.neg) + " negative");
  return c;
}

}  // namespace

void ValidateScoredSet(const ScoredSet &set) {
  if (set.scores.size() != set.labels.size())
    throw ShapeError("scored set has " + std::to_string(set.scores.size()) +
                     " scores and " + std::to_string(set.labels.size()) +
                     " labels");
  if (set.scores.empty()) throw ConfigError("scored set is empty");
  for (size_t i = 0; i < set.scores.size(); ++i) {
    if (!(set.scores[i] >= 0.0 && set.scores[i] <= 1.0))
      throw ConfigError("score " + std::to_string(i) + " = " +
                        std::to_string(set.scores[i]) + " outside [0, 1]");
    if (set.labels[i] != 0 && set.labels[i] != 1)
      throw ConfigError("label " + std::to_string(i) + " = " +
                        std::to_string(set.labels[i]) + " is not 0 or 1");
  }
}

std::vector<RocPoint> Roc(const ScoredSet &set) {
  const ClassCounts c = CountClasses(set, "ROC");
  std::vector<size_t> order(set.scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return set.scores[a] > set.scores[b];
  });
  std::vector<RocPoint> roc = {{0.0, 0.0, std::numeric_limits<double>::infinity()}};
  size_t tp = 0, fp = 0;
  for (size_t i = 0; i < order.size();) {
    const double s = set.scores[order[i]];
    for (; i < order.size() && set.scores[order[i]] == s; ++i)
      (set.labels[order[i]] ? tp : fp)++;
    roc.push_back({static_cast<double>(fp) / c.neg,
                   static_cast<double>(tp) / c.pos, s});
  }
  return roc;
}

double Auc(const ScoredSet &set) {
  const std::vector<RocPoint> roc = Roc(set);
  double area = 0.0;
  for (size_t i = 1; i < roc.size(); ++i)
    area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) / 2;
  return area;
}

EerResult Eer(const ScoredSet &set) {
  const std::vector<RocPoint> roc = Roc(set);
  // d = FPR - FNR never decreases along the staircase: -1 at the start, +1
  // at the end.
  auto d = [](const RocPoint &p) { return p.fpr + p.tpr - 1.0; };
  for (size_t i = 1; i < roc.size(); ++i) {
    const RocPoint &a = roc[i - 1], &b = roc[i];
    if (d(b) < 0.0) continue;
    const double t = d(b) == d(a) ? 0.0 : -d(a) / (d(b) - d(a));
    EerResult r;
    r.eer = a.fpr + t * (b.fpr - a.fpr);
    r.threshold = std::isinf(a.threshold)
                      ? b.threshold
                      : a.threshold + t * (b.threshold - a.threshold);
    return r;
  }
  return {1.0, roc.back().threshold};  // unreachable: d ends at +1
}

double Mae(const ScoredSet &set) {
  ValidateScoredSet(set);
  double sum = 0.0;
  for (size_t i = 0; i < set.scores.size(); ++i)
    sum += std::abs(set.scores[i] - set.labels[i]);
  return sum / set.scores.size();
}

}  // namespace bargebench
