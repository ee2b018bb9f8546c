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
#include "plapreg/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "plapreg/csv.hpp"
#include "plapreg/error.hpp"
#include "plapreg/log.hpp"
#include "plapreg/text.hpp"

namespace plapreg {
namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string_view RoleName(ColumnRole role) {
  switch (role) {
    case ColumnRole::kFeature: return "feature";
    case ColumnRole::kTarget: return "target";
    case ColumnRole::kCategorical: return "categorical";
    case ColumnRole::kIgnore: return "ignore";
  }
  return "ignore";
}

ColumnRole RoleFromName(const std::string& column, const std::string& name) {
  const std::string lower = ToLower(name);
  if (lower == "feature") return ColumnRole::kFeature;
  if (lower == "target") return ColumnRole::kTarget;
  if (lower == "categorical") return ColumnRole::kCategorical;
  if (lower == "ignore") return ColumnRole::kIgnore;
  throw Error(ErrorCode::kInvalidArgument,
              "schema role '" + name + "' for column '" + column +
                  "' is not one of feature|target|categorical|ignore");
}

[[noreturn]] void ThrowUnknown(std::string_view kind, std::string_view name) {
  throw Error(ErrorCode::kUnknownColumn,
              std::string(kind) + " column '" + std::string(name) + "' not found");
}

}  // namespace

Schema ParseSchema(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("schema: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "schema must be a JSON object");
  }
  Schema schema;
  for (const auto& [column, role] : doc.items()) {
    if (!role.is_string()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "schema role for column '" + column + "' must be a string");
    }
    schema[column] = RoleFromName(column, role.get<std::string>());
  }
  return schema;
}

Schema LoadSchema(const std::filesystem::path& path) {
  return ParseSchema(ReadFile(path));
}

std::string SchemaToJson(const Schema& schema) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [column, role] : schema) doc[column] = RoleName(role);
  return doc.dump(2) + "\n";
}

const Eigen::VectorXd& FeatureTable::target(std::string_view name) const {
  for (const auto& t : targets) {
    if (t.name == name) return t.values;
  }
  ThrowUnknown("target", name);
}

const CategoricalColumn& FeatureTable::category(std::string_view name) const {
  for (const auto& c : categorical) {
    if (c.name == name) return c;
  }
  ThrowUnknown("categorical", name);
}

bool FeatureTable::has_category(std::string_view name) const {
  return std::any_of(categorical.begin(), categorical.end(),
                     [&](const auto& c) { return c.name == name; });
}

std::size_t FeatureTable::feature_index(std::string_view name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) ThrowUnknown("feature", name);
  return static_cast<std::size_t>(it - feature_names.begin());
}

std::vector<std::size_t> FeatureTable::incomplete_rows() const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < rows(); ++r) {
    bool missing = features.row(static_cast<Eigen::Index>(r)).hasNaN();
    for (const auto& t : targets) {
      missing = missing || std::isnan(t.values[static_cast<Eigen::Index>(r)]);
    }
    if (missing) out.push_back(r);
  }
  return out;
}

std::map<std::string, std::size_t> FeatureTable::missing_counts() const {
  std::map<std::string, std::size_t> out;
  for (std::size_t c = 0; c < cols(); ++c) {
    out[feature_names[c]] = static_cast<std::size_t>(
        features.col(static_cast<Eigen::Index>(c)).array().isNaN().count());
  }
  for (const auto& t : targets) {
    out[t.name] = static_cast<std::size_t>(t.values.array().isNaN().count());
  }
  return out;
}

FeatureTable FeatureTable::select_rows(std::span<const std::size_t> rows) const {
  FeatureTable out;
  out.feature_names = feature_names;
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.features.resize(n, features.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    out.features.row(i) = features.row(static_cast<Eigen::Index>(rows[i]));
  }
  for (const auto& t : targets) {
    TargetColumn col{t.name, Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
      col.values[i] = t.values[static_cast<Eigen::Index>(rows[i])];
    }
    out.targets.push_back(std::move(col));
  }
  for (const auto& c : categorical) {
    CategoricalColumn col{c.name, {}};
    col.values.reserve(rows.size());
    for (std::size_t r : rows) col.values.push_back(c.values[r]);
    out.categorical.push_back(std::move(col));
  }
  return out;
}

FeatureTable FeatureTable::select_features(std::span<const std::string> names) const {
  FeatureTable out;
  out.targets = targets;
  out.categorical = categorical;
  out.features.resize(features.rows(), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    out.features.col(static_cast<Eigen::Index>(j)) =
        features.col(static_cast<Eigen::Index>(feature_index(names[j])));
    out.feature_names.push_back(names[j]);
  }
  return out;
}

Schema FeatureTable::schema() const {
  Schema s;
  for (const auto& f : feature_names) s[f] = ColumnRole::kFeature;
  for (const auto& t : targets) s[t.name] = ColumnRole::kTarget;
  for (const auto& c : categorical) s[c.name] = ColumnRole::kCategorical;
  return s;
}

bool IsMissingMarker(std::string_view cell) {
  const std::string lower = ToLower(Trim(cell));
  return lower.empty() || lower == "na" || lower == "nan";
}

FeatureTable ParseCsvTable(std::string_view text, const Schema& schema) {
  const csv::Document doc = csv::Parse(text);

  std::set<std::string> seen;
  for (const auto& name : doc.header) {
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kMalformedCsv, "duplicate header column '" + name + "'");
    }
    if (!schema.contains(name)) {
      throw Error(ErrorCode::kUnknownColumn,
                  "header column '" + name + "' has no role in the schema");
    }
  }
  for (const auto& [name, role] : schema) {
    if (!seen.contains(name)) {
      throw Error(ErrorCode::kUnknownColumn,
                  "schema column '" + name + "' is absent from the CSV header");
    }
  }

  FeatureTable table;
  std::vector<std::size_t> feature_cols;
  std::vector<std::size_t> target_cols;
  std::vector<std::size_t> category_cols;
  for (std::size_t c = 0; c < doc.header.size(); ++c) {
    switch (schema.at(doc.header[c])) {
      case ColumnRole::kFeature:
        feature_cols.push_back(c);
        table.feature_names.push_back(doc.header[c]);
        break;
      case ColumnRole::kTarget:
        target_cols.push_back(c);
        break;
      case ColumnRole::kCategorical:
        category_cols.push_back(c);
        break;
      case ColumnRole::kIgnore:
        break;
    }
  }

  const auto n = static_cast<Eigen::Index>(doc.rows.size());
  auto parse_cell = [&](std::size_t row, std::size_t col) {
    const std::string& cell = doc.rows[row][col];
    if (IsMissingMarker(cell)) return kMissing;
    const auto value = ParseDouble(cell);
    if (!value || !std::isfinite(*value)) {
      throw Error(ErrorCode::kMalformedCsv,
                  "unparseable numeric cell '" + cell + "' in column '" +
                      doc.header[col] + "', data row " + std::to_string(row + 1));
    }
    return *value;
  };

  table.features.resize(n, static_cast<Eigen::Index>(feature_cols.size()));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < feature_cols.size(); ++j) {
      table.features(r, static_cast<Eigen::Index>(j)) =
          parse_cell(static_cast<std::size_t>(r), feature_cols[j]);
    }
  }
  for (std::size_t c : target_cols) {
    TargetColumn col{doc.header[c], Eigen::VectorXd(n)};
    for (Eigen::Index r = 0; r < n; ++r) {
      col.values[r] = parse_cell(static_cast<std::size_t>(r), c);
    }
    table.targets.push_back(std::move(col));
  }
  for (std::size_t c : category_cols) {
    CategoricalColumn col{doc.header[c], {}};
    col.values.reserve(doc.rows.size());
    for (const auto& row : doc.rows) col.values.emplace_back(Trim(row[c]));
    table.categorical.push_back(std::move(col));
  }
  return table;
}

FeatureTable LoadCsv(const std::filesystem::path& path, const Schema& schema) {
  return ParseCsvTable(ReadFile(path), schema);
}

std::string TableToCsv(const FeatureTable& table) {
  std::ostringstream out;
  std::vector<std::string> fields = table.feature_names;
  for (const auto& t : table.targets) fields.push_back(t.name);
  for (const auto& c : table.categorical) fields.push_back(c.name);
  csv::WriteRow(out, fields);

  auto cell = [](double v) { return std::isnan(v) ? std::string() : FormatDouble(v); };
  for (std::size_t r = 0; r < table.rows(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    fields.clear();
    for (Eigen::Index j = 0; j < table.features.cols(); ++j) {
      fields.push_back(cell(table.features(ri, j)));
    }
    for (const auto& t : table.targets) fields.push_back(cell(t.values[ri]));
    for (const auto& c : table.categorical) fields.push_back(c.values[r]);
    csv::WriteRow(out, fields);
  }
  return out.str();
}

void SaveCsv(const FeatureTable& table, const std::filesystem::path& path) {
  WriteFileAtomic(path, TableToCsv(table));
}

FeatureTable DropIncomplete(const FeatureTable& table) {
  const std::vector<std::size_t> bad = table.incomplete_rows();
  std::vector<std::size_t> keep;
  keep.reserve(table.rows());
  std::size_t b = 0;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    if (b < bad.size() && bad[b] == r) {
      ++b;
      continue;
    }
    keep.push_back(r);
  }
  if (keep.empty()) {
    throw Error(ErrorCode::kEmptyAfterCleaning,
                "no complete rows remain out of " + std::to_string(table.rows()));
  }
  return table.select_rows(keep);
}

bool RowSelector::matches(std::string_view value) const {
  if (!column) return true;
  for (const auto& level : levels) {
    if (ignore_case ? ToLower(level) == ToLower(value) : level == value) return true;
  }
  return false;
}

FeatureTable FilterDataset(const FeatureTable& table, const RowSelector& selector) {
  if (!selector.column) return table;
  const CategoricalColumn& col = table.category(*selector.column);
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < col.values.size(); ++r) {
    if (selector.matches(col.values[r])) keep.push_back(r);
  }
  return table.select_rows(keep);
}

NormalizationParams FitZScore(const Eigen::MatrixXd& data,
                              std::span<const std::size_t> rows) {
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptyFitSet, "z-score fit needs at least one row");
  }
  const Eigen::Index m = data.cols();
  NormalizationParams params{Eigen::VectorXd::Zero(m), Eigen::VectorXd::Zero(m)};
  const double count = static_cast<double>(rows.size());
  for (std::size_t r : rows) params.mean += data.row(static_cast<Eigen::Index>(r)).transpose();
  params.mean /= count;
  for (std::size_t r : rows) {
    params.sd += (data.row(static_cast<Eigen::Index>(r)).transpose() - params.mean)
                     .array()
                     .square()
                     .matrix();
  }
  params.sd = (params.sd / count).array().sqrt().matrix();
  return params;
}

NormalizationParams FitZScore(const FeatureTable& table,
                              std::span<const std::size_t> rows) {
  return FitZScore(table.features, rows);
}

NormalizationParams FitZScore(const Eigen::MatrixXd& data) {
  std::vector<std::size_t> all(static_cast<std::size_t>(data.rows()));
  std::iota(all.begin(), all.end(), std::size_t{0});
  return FitZScore(data, all);
}

Eigen::MatrixXd ApplyZScore(const Eigen::MatrixXd& data,
                            const NormalizationParams& params,
                            std::span<const std::string> names) {
  if (params.mean.size() != data.cols() || params.sd.size() != data.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "normalization covers " + std::to_string(params.mean.size()) +
                    " columns, data has " + std::to_string(data.cols()));
  }
  Eigen::MatrixXd out(data.rows(), data.cols());
  std::string constant;
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    if (params.sd[j] > 0.0) {
      out.col(j) = (data.col(j).array() - params.mean[j]) / params.sd[j];
    } else {
      out.col(j).setZero();
      if (!constant.empty()) constant += ", ";
      constant += names.empty() ? "#" + std::to_string(j)
                                : names[static_cast<std::size_t>(j)];
    }
  }
  if (!constant.empty()) {
    log::Warn("z-score: constant column(s) mapped to 0: " + constant);
  }
  return out;
}

FeatureTable ApplyZScore(const FeatureTable& table,
                         const NormalizationParams& params) {
  FeatureTable out = table;
  out.features = ApplyZScore(table.features, params, table.feature_names);
  return out;
}

double PearsonCorrelation(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch, "correlation of unequal-length vectors");
  }
  const Eigen::ArrayXd dx = x.array() - x.mean();
  const Eigen::ArrayXd dy = y.array() - y.mean();
  const double sxx = dx.square().sum();
  const double syy = dy.square().sum();
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return (dx * dy).sum() / std::sqrt(sxx * syy);
}

std::vector<FeatureCorrelation> PearsonRank(const FeatureTable& table,
                                            std::string_view target,
                                            std::size_t top_n) {
  if (top_n > table.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "top_n=" + std::to_string(top_n) + " exceeds " +
                    std::to_string(table.cols()) + " feature columns");
  }
  const Eigen::VectorXd& y = table.target(target);
  if (y.size() == 0 || (y.array() == y[0]).all()) {
    throw Error(ErrorCode::kZeroVariance,
                "target '" + std::string(target) + "' is constant");
  }
  std::vector<FeatureCorrelation> ranked;
  ranked.reserve(table.cols());
  for (std::size_t j = 0; j < table.cols(); ++j) {
    ranked.push_back({table.feature_names[j],
                      PearsonCorrelation(table.features.col(static_cast<Eigen::Index>(j)), y)});
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return std::abs(a.r) > std::abs(b.r);
  });
  ranked.resize(top_n);
  return ranked;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFileAtomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorCode::kIoError, "cannot write '" + tmp.string() + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      throw Error(ErrorCode::kIoError, "write failed for '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace plapreg
