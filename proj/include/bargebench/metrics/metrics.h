// metrics/metrics.h


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

// Sample-level detection metrics.  A sample is accepted when its score is at
// least the threshold.

#ifndef BARGEBENCH_METRICS_METRICS_H_
#define BARGEBENCH_METRICS_METRICS_H_

#include <span>
#include <vector>

namespace bargebench {

struct ScoredSet {
  std::vector<double> scores;  // in [0, 1]
  std::vector<int> labels;     // 0 or 1
};

/// Throws ShapeError for unequal lengths, ConfigError for an empty set, a
/// score outside [0, 1] or a label outside {0, 1}.
void ValidateScoredSet(const ScoredSet &set);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  /// Lowest accepted score; +infinity for the initial (0, 0) point.
  double threshold = 0.0;
};

/// Staircase over the distinct scores in descending order, one point per tie
/// group, from (0, 0) to (1, 1).  Throws NotApplicableError unless both
/// classes are present.
std::vector<RocPoint> Roc(const ScoredSet &set);

/// Trapezoidal area under Roc(); equal to the Mann-Whitney statistic with
/// ties counted one half.
double Auc(const ScoredSet &set);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

/// Point where FPR = 1 - TPR, linearly interpolated along the ROC segment
/// that crosses it.  The threshold is interpolated between the segment's end
/// thresholds; on the first segment, whose start has no finite threshold, it
/// is the end threshold.
EerResult Eer(const ScoredSet &set);

/// Mean |score - label|.
double Mae(const ScoredSet &set);

}  // namespace bargebench

#endif  // BARGEBENCH_METRICS_METRICS_H_
