// metrics/report.h


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

// Per-kind evaluation reports and their JSON, CSV and SVG renderings.

#ifndef BARGEBENCH_METRICS_REPORT_H_
#define BARGEBENCH_METRICS_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bargebench/metrics/metrics.h"
#include "bargebench/room/scenario.h"

namespace bargebench {

struct KindReport {
  ScenarioKind kind = ScenarioKind::kNonPlayback;
  size_t n = 0;
  double mae = 0.0;
  /// Null for SelfReferencing, whose labels are all 0, and for any other kind
  /// that happens to hold a single class.
  std::optional<double> auc, eer, eer_threshold;
  std::vector<RocPoint> roc;  // empty when auc is null
};

struct EvalReport {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  /// Present kinds only, in declaration order.
  std::vector<KindReport> kinds;

  const KindReport *Find(ScenarioKind kind) const;
};

KindReport MakeKindReport(ScenarioKind kind, const ScoredSet &set);

/// Groups samples by kind[i] and reports each group.
EvalReport MakeEvalReport(const std::vector<ScenarioKind> &kinds,
                          const ScoredSet &set);

nlohmann::ordered_json EvalReportToJson(const EvalReport &report);
/// Throws FormatError on a malformed document.
EvalReport EvalReportFromJson(const nlohmann::ordered_json &j);

/// Header "kind,auc,eer,mae,n"; null metrics are empty cells.
std::string EvalReportCsv(const EvalReport &report);

/// ROC curves of every kind that has one, in the unit square.
std::string RocSvg(const EvalReport &report);

struct NamedReport {
  std::string name;
  EvalReport report;
};

/// Side-by-side table: header "kind,metric,<name>...", one row per kind and
/// metric (auc, eer, mae).  A single report passes through as
/// EvalReportCsv.  Throws ConfigError when the reports cover different kinds
/// or names repeat.
std::string ComparisonCsv(const std::vector<NamedReport> &reports);

/// Bar chart of SelfReferencing MAE, one bar per report.  Same errors as
/// ComparisonCsv, plus ConfigError when no report has SelfReferencing.
std::string MaeBarSvg(const std::vector<NamedReport> &reports);

}  // namespace bargebench

#endif  // BARGEBENCH_METRICS_REPORT_H_
