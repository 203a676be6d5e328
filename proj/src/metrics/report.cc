// metrics/report.cc


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

#include "bargebench/metrics/report.h"

#include <array>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "bargebench/common/error.h"
#include "bargebench/common/log.h"

namespace bargebench {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char *kReportFormat = "bargebench-eval";
constexpr int kReportVersion = 1;

Json Nullable(const std::optional<double> &v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> ReadNullable(const Json &j, const char *key) {
  if (!j.contains(key)) throw FormatError(std::string("report kind lacks '") + key + "'");
  if (j[key].is_null()) return std::nullopt;
  if (!j[key].is_number()) throw FormatError(std::string("report '") + key + "' is not a number");
  return j[key].get<double>();
}

std::string Cell(const std::optional<double> &v) {
  return v ? fmt::format("{:.6f}", *v) : std::string();
}

void CheckComparable(const std::vector<NamedReport> &reports) {
  if (reports.empty()) throw ConfigError("no reports to compare");
  std::set<std::string> names;
  for (const NamedReport &r : reports)
    if (!names.insert(r.name).second)
      throw ConfigError("report name '" + r.name + "' given twice");
  auto kinds_of = [](const EvalReport &r) {
    std::string s;
    for (const KindReport &k : r.kinds) s += std::string(KindName(k.kind)) + " ";
    return s;
  };
  const std::string first = kinds_of(reports[0].report);
  for (const NamedReport &r : reports)
    if (kinds_of(r.report) != first)
      throw ConfigError("report '" + r.name + "' covers kinds { " +
                        kinds_of(r.report) + "} but '" + reports[0].name +
                        "' covers { " + first + "}");
}

std::string SvgEscape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr std::array<const char *, 6> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

const KindReport *EvalReport::Find(ScenarioKind kind) const {
  for (const KindReport &k : kinds)
    if (k.kind == kind) return &k;
  return nullptr;
}

KindReport MakeKindReport(ScenarioKind kind, const ScoredSet &set) {
  KindReport r;
  r.kind = kind;
  r.n = set.scores.size();
  r.mae = Mae(set);
  if (kind == ScenarioKind::kSelfReferencing) return r;
  try {
    r.roc = Roc(set);
    r.auc = Auc(set);
    EerResult e = Eer(set);
    r.eer = e.eer;
    r.eer_threshold = e.threshold;
  } catch (const NotApplicableError &e) {
    spdlog::warn("{}: {}; reporting MAE only", KindName(kind), e.what());
    r.roc.clear();
  }
  return r;
}

EvalReport MakeEvalReport(const std::vector<ScenarioKind> &kinds,
                          const ScoredSet &set) {
  if (kinds.size() != set.scores.size())
    throw ShapeError("kinds and scores differ in length");
  EvalReport report;
  for (ScenarioKind kind : kAllScenarioKinds) {
    ScoredSet part;
    for (size_t i = 0; i < kinds.size(); ++i) {
      if (kinds[i] != kind) continue;
      part.scores.push_back(set.scores[i]);
      part.labels.push_back(set.labels[i]);
    }
    if (!part.scores.empty()) report.kinds.push_back(MakeKindReport(kind, part));
  }
  return report;
}

Json EvalReportToJson(const EvalReport &report) {
  Json kinds = Json::array();
  for (const KindReport &k : report.kinds) {
    Json roc = Json::array();
    for (const RocPoint &p : k.roc)
      roc.push_back({p.fpr, p.tpr, std::isinf(p.threshold) ? Json(nullptr) : Json(p.threshold)});
    kinds.push_back({{"kind", KindName(k.kind)},
                     {"n", k.n},
                     {"auc", Nullable(k.auc)},
                     {"eer", Nullable(k.eer)},
                     {"eer_threshold", Nullable(k.eer_threshold)},
                     {"mae", k.mae},
                     {"roc", roc}});
  }
  return {{"format", kReportFormat},
          {"version", kReportVersion},
          {"meta", report.meta},
          {"kinds", kinds}};
}

EvalReport EvalReportFromJson(const Json &j) {
  if (!j.is_object() || j.value("format", "") != kReportFormat)
    throw FormatError("not a bargebench evaluation report");
  if (j.value("version", 0) != kReportVersion)
    throw FormatError("unsupported report version");
  if (!j.contains("kinds") || !j["kinds"].is_array())
    throw FormatError("report has no kinds array");
  EvalReport r;
  r.meta = j.value("meta", Json::object());
  try {
    for (const Json &k : j["kinds"]) {
      KindReport kr;
      kr.kind = ParseKind(k.at("kind").get<std::string>());
      kr.n = k.at("n").get<size_t>();
      kr.mae = k.at("mae").get<double>();
      kr.auc = ReadNullable(k, "auc");
      kr.eer = ReadNullable(k, "eer");
      kr.eer_threshold = ReadNullable(k, "eer_threshold");
      for (const Json &p : k.at("roc"))
        kr.roc.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                          p.at(2).is_null() ? INFINITY : p.at(2).get<double>()});
      if (r.Find(kr.kind)) throw FormatError("kind listed twice");
      r.kinds.push_back(std::move(kr));
    }
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  } catch (const ConfigError &e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
  return r;
}

std::string EvalReportCsv(const EvalReport &report) {
  std::string out = "kind,auc,eer,mae,n\n";
  for (const KindReport &k : report.kinds)
    out += fmt::format("{},{},{},{:.6f},{}\n", KindName(k.kind), Cell(k.auc),
                       Cell(k.eer), k.mae, k.n);
  return out;
}

std::string RocSvg(const EvalReport &report) {
  constexpr double kSize = 360, kPad = 40;
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      kSize + 2 * kPad);
  s += fmt::format(
      "<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{1}\" fill=\"none\" "
      "stroke=\"#444\"/>\n",
      kPad, kSize);
  s += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{1}\" y2=\"{0}\" stroke=\"#bbb\" "
      "stroke-dasharray=\"4 4\"/>\n",
      kPad, kPad + kSize);
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">FPR</text>\n",
                   kPad + kSize / 2, kPad + kSize + 28);
  s += fmt::format(
      "<text x=\"12\" y=\"{0}\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 12 {0})\">TPR</text>\n",
      kPad + kSize / 2);
  int color = 0, legend = 0;
  for (const KindReport &k : report.kinds) {
    if (k.roc.empty()) continue;
    const char *c = kPalette[color++ % kPalette.size()];
    std::string pts;
    for (const RocPoint &p : k.roc)
      pts += fmt::format("{:.2f},{:.2f} ", kPad + p.fpr * kSize,
                         kPad + (1.0 - p.tpr) * kSize);
    pts.pop_back();
    s += fmt::format(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" "
        "stroke-width=\"1.5\"/>\n",
        pts, c);
    s += fmt::format(
        "<text x=\"{}\" y=\"{}\" fill=\"{}\">{} AUC {:.3f}</text>\n",
        kPad + kSize * 0.45, kPad + kSize - 10 - 14 * legend++, c,
        KindName(k.kind), *k.auc);
  }
  return s + "</svg>\n";
}

std::string ComparisonCsv(const std::vector<NamedReport> &reports) {
  CheckComparable(reports);
  if (reports.size() == 1) return EvalReportCsv(reports[0].report);
  std::string out = "kind,metric";
  for (const NamedReport &r : reports) out += "," + r.name;
  out += "\n";
  for (const KindReport &first : reports[0].report.kinds) {
    for (const char *metric : {"auc", "eer", "mae"}) {
      out += fmt::format("{},{}", KindName(first.kind), metric);
      for (const NamedReport &r : reports) {
        const KindReport &k = *r.report.Find(first.kind);
        const std::string m = metric;
        out += "," + (m == "auc" ? Cell(k.auc) : m == "eer" ? Cell(k.eer) : Cell(k.mae));
      }
      out += "\n";
    }
  }
  return out;
}

std::string MaeBarSvg(const std::vector<NamedReport> &reports) {
  CheckComparable(reports);
  if (!reports[0].report.Find(ScenarioKind::kSelfReferencing))
    throw ConfigError("reports have no SelfReferencing examples");
  constexpr double kBar = 60, kGap = 30, kHeight = 240, kPad = 40;
  const double width = 2 * kPad + reports.size() * (kBar + kGap);
  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      width, kHeight + 2 * kPad + 20);
  s += fmt::format("<text x=\"{}\" y=\"20\">SelfReferencing MAE</text>\n", kPad);
  s += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#444\"/>\n",
      kPad, kPad + kHeight, width - kPad);
  for (size_t i = 0; i < reports.size(); ++i) {
    const double mae =
        reports[i].report.Find(ScenarioKind::kSelfReferencing)->mae;
    const double x = kPad + kGap / 2 + i * (kBar + kGap);
    const double h = mae * kHeight;
    s += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{}\" height=\"{:.2f}\" "
        "fill=\"{}\"/>\n",
        x, kPad + kHeight - h, kBar, h, kPalette[i % kPalette.size()]);
    s += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.2f}%</text>\n",
        x + kBar / 2, kPad + kHeight - h - 4, 100.0 * mae);
    s += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
        x + kBar / 2, kPad + kHeight + 16, SvgEscape(reports[i].name));
  }
  return s + "</svg>\n";
}

}  // namespace bargebench
