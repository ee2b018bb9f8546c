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
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace plapreg {

enum class ColumnRole { kFeature, kTarget, kCategorical, kIgnore };

// Column name -> role. Every CSV header column must have an entry.
using Schema = std::map<std::string, ColumnRole>;

// Parses {"col": "feature"|"target"|"categorical"|"ignore", ...}.
Schema ParseSchema(std::string_view json_text);
Schema LoadSchema(const std::filesystem::path& path);
std::string SchemaToJson(const Schema& schema);

struct TargetColumn {
  std::string name;
  Eigen::VectorXd values;  // NaN marks a missing cell
};

struct CategoricalColumn {
  std::string name;
  std::vector<std::string> values;
};

// Row-per-subject table. Missing numeric cells are stored as NaN; after
// DropIncomplete every feature and target entry is finite.
struct FeatureTable {
  std::vector<std::string> feature_names;
  Eigen::MatrixXd features;  // rows() x feature_names.size()
  std::vector<TargetColumn> targets;
  std::vector<CategoricalColumn> categorical;

  std::size_t rows() const { return static_cast<std::size_t>(features.rows()); }
  std::size_t cols() const { return feature_names.size(); }

  // Throws UnknownColumn.
  const Eigen::VectorXd& target(std::string_view name) const;
  const CategoricalColumn& category(std::string_view name) const;
  std::size_t feature_index(std::string_view name) const;
  bool has_category(std::string_view name) const;

  // Rows with at least one missing feature or target entry.
  std::vector<std::size_t> incomplete_rows() const;
  // Missing-cell count per feature and target column, keyed by name.
  std::map<std::string, std::size_t> missing_counts() const;

  FeatureTable select_rows(std::span<const std::size_t> rows) const;
  FeatureTable select_features(std::span<const std::string> names) const;
  Schema schema() const;
};

// Empty cell, "NA", "NaN" (any case) are missing markers.
bool IsMissingMarker(std::string_view cell);

FeatureTable ParseCsvTable(std::string_view text, const Schema& schema);
FeatureTable LoadCsv(const std::filesystem::path& path, const Schema& schema);

// Writes features, then targets, then categorical columns. Numbers use
// round-trip precision; missing values are written as empty cells.
std::string TableToCsv(const FeatureTable& table);
void SaveCsv(const FeatureTable& table, const std::filesystem::path& path);

// Keeps rows with no missing feature/target entry, in order.
// Throws EmptyAfterCleaning when nothing is left.
FeatureTable DropIncomplete(const FeatureTable& table);

// Categorical row predicate. A selector without a column passes every row.
struct RowSelector {
  std::optional<std::string> column;
  std::vector<std::string> levels;
  bool ignore_case = false;

  static RowSelector All() { return {}; }
  static RowSelector Equals(std::string column, std::string level) {
    return {std::move(column), {std::move(level)}, false};
  }
  bool matches(std::string_view value) const;
};

// Throws UnknownColumn when the selector names an absent categorical column.
FeatureTable FilterDataset(const FeatureTable& table, const RowSelector& selector);

// Population (divisor n) mean and standard deviation per feature column.
struct NormalizationParams {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
};

// Throws EmptyFitSet for an empty row set.
NormalizationParams FitZScore(const Eigen::MatrixXd& data,
                              std::span<const std::size_t> rows);
NormalizationParams FitZScore(const FeatureTable& table,
                              std::span<const std::size_t> rows);
NormalizationParams FitZScore(const Eigen::MatrixXd& data);

// x -> (x - mean) / sd. Columns with sd == 0 become 0 and are reported
// through log::Warn (once per call, naming the columns when known).
Eigen::MatrixXd ApplyZScore(const Eigen::MatrixXd& data,
                            const NormalizationParams& params,
                            std::span<const std::string> names = {});
FeatureTable ApplyZScore(const FeatureTable& table,
                         const NormalizationParams& params);

struct FeatureCorrelation {
  std::string name;
  double r = 0.0;
};

double PearsonCorrelation(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y);

// Features ordered by descending |r| against the target, ties kept in column
// order; the signed r is reported. A constant feature has r = 0. Throws
// ZeroVariance for a constant target, InvalidArgument if top_n > cols().
std::vector<FeatureCorrelation> PearsonRank(const FeatureTable& table,
                                            std::string_view target,
                                            std::size_t top_n);

std::string ReadFile(const std::filesystem::path& path);
// Writes through a sibling temporary file and renames it into place.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view content);

}  // namespace plapreg
