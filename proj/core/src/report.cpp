// Copyright 2026 The plapreg Authors
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
#include "plapreg/report.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "plapreg/csv.hpp"
#include "plapreg/text.hpp"

namespace plapreg {
namespace {

using Json = nlohmann::ordered_json;

// JSON has no inf/nan; such values become strings.
Json Number(double v) {
  if (std::isfinite(v)) return v;
  return FormatDouble(v);
}

template <typename T>
Json Optional(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return Number(*v);
  } else {
    return *v;
  }
}

template <typename T>
std::string Cell(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return FormatDouble(*v);
  } else {
    return std::to_string(*v);
  }
}

Json ReportJson(const EvalReport& r, const Json* config) {
  Json doc;
  doc["target"] = r.target;
  doc["dataset"] = r.dataset;
  doc["model"] = r.model;
  Json params = Json::object();
  params["p"] = Optional(r.params.p);
  params["k"] = Optional(r.params.k);
  params["gamma"] = Optional(r.params.gamma);
  params["c"] = Optional(r.params.c);
  params["lambda"] = Optional(r.params.lambda);
  params["degree"] = Optional(r.params.degree);
  if (!r.params.eps_mode.empty()) params["eps_mode"] = r.params.eps_mode;
  doc["params"] = params;
  doc["training_pct"] = Number(r.training_pct);
  doc["folds"] = r.folds.k;
  doc["fold_mode"] = FoldModeName(r.folds.mode);
  doc["repeats"] = r.repeats;
  doc["valid"] = r.valid();
  doc["rmse_mean"] = Number(r.rmse_mean);
  doc["rmse_std"] = Number(r.rmse_std);
  doc["nonconverged_count"] = r.nonconverged_count;
  doc["failed_count"] = r.failed_count;
  if (!r.error.empty()) doc["error"] = r.error;

  // rmse[repeat][fold], null where a fold failed.
  Json matrix = Json::array();
  Json errors = Json::array();
  for (const FoldOutcome& e : r.entries) {
    while (matrix.size() <= e.repeat) matrix.push_back(Json::array());
    matrix[e.repeat].push_back(e.rmse ? Number(*e.rmse) : Json(nullptr));
    if (!e.error.empty()) {
      errors.push_back({{"repeat", e.repeat}, {"fold", e.fold}, {"error", e.error}});
    }
  }
  doc["rmse"] = matrix;
  doc["fold_errors"] = errors;
  if (config) doc["config"] = *config;
  return doc;
}

Json ParseConfig(std::string_view config_json) {
  if (config_json.empty()) return nullptr;
  return Json::parse(config_json);
}

}  // namespace

std::string ReportsToJson(std::span<const EvalReport> reports, std::string_view config_json) {
  const Json config = ParseConfig(config_json);
  Json doc = Json::array();
  for (const auto& r : reports) doc.push_back(ReportJson(r, config.is_null() ? nullptr : &config));
  return doc.dump(2) + "\n";
}

std::string ReportsToCsv(std::span<const EvalReport> reports) {
  std::ostringstream out;
  csv::WriteRow(out, {"target", "dataset", "model", "p", "k", "gamma", "c", "lambda", "degree",
                      "training_pct", "rmse_mean", "rmse_std", "nonconverged_count"});
  for (const auto& r : reports) {
    csv::WriteRow(out, {r.target, r.dataset, r.model, Cell(r.params.p), Cell(r.params.k),
                        Cell(r.params.gamma), Cell(r.params.c), Cell(r.params.lambda),
                        Cell(r.params.degree), FormatDouble(r.training_pct),
                        FormatDouble(r.rmse_mean), FormatDouble(r.rmse_std),
                        std::to_string(r.nonconverged_count)});
  }
  return out.str();
}

std::string OptimaToCsv(std::span<const SweepOptimum> optima) {
  std::ostringstream out;
  csv::WriteRow(out, {"training_pct", "best_p", "best_k", "rmse_mean"});
  for (const auto& o : optima) {
    if (o.report) {
      csv::WriteRow(out, {FormatDouble(o.training_pct), FormatDouble(o.best_p),
                          std::to_string(o.best_k), FormatDouble(o.rmse_mean)});
    } else {
      csv::WriteRow(out, {FormatDouble(o.training_pct), "", "", ""});
    }
  }
  return out.str();
}

std::string SeriesToCsv(const AsymptoticSeries& series) {
  std::ostringstream out;
  csv::WriteRow(out, {"p", "rmse_mean", "rmse_std", "nonconverged_count"});
  for (const auto& pt : series.points) {
    csv::WriteRow(out, {FormatDouble(pt.p), FormatDouble(pt.rmse_mean),
                        FormatDouble(pt.rmse_std), std::to_string(pt.nonconverged_count)});
  }
  return out.str();
}

std::string AsymptoticToJson(const AsymptoticResult& result, std::string_view config_json) {
  Json doc;
  doc["training_pct"] = Number(result.training_pct);
  doc["tolerance"] = Number(result.tolerance);
  Json series = Json::array();
  for (const auto& s : result.series) {
    Json item;
    item["k"] = s.k;
    item["rmse_gap"] = Number(s.rmse_gap);
    item["max_solution_gap"] = Number(s.max_solution_gap);
    item["within_tolerance"] = s.within_tolerance;
    item["failed_folds"] = s.failed_folds;
    Json points = Json::array();
    for (const auto& pt : s.points) {
      points.push_back({{"p", Number(pt.p)},
                        {"rmse_mean", Number(pt.rmse_mean)},
                        {"rmse_std", Number(pt.rmse_std)},
                        {"nonconverged_count", pt.nonconverged_count}});
    }
    item["points"] = points;
    series.push_back(item);
  }
  doc["series"] = series;
  const Json config = ParseConfig(config_json);
  if (!config.is_null()) doc["config"] = config;
  return doc.dump(2) + "\n";
}

}  // namespace plapreg
