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
#include "plapreg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "plapreg/baselines.hpp"
#include "plapreg/dataio.hpp"
#include "plapreg/error.hpp"
#include "plapreg/eval.hpp"
#include "plapreg/graph.hpp"
#include "plapreg/log.hpp"
#include "plapreg/plaplace.hpp"
#include "plapreg/report.hpp"
#include "plapreg/synth.hpp"
#include "plapreg/text.hpp"

namespace plapreg::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Failure {
  int exit_code;
  std::string message;
};

[[noreturn]] void ConfigFail(const std::string& message) {
  throw Failure{kExitInputError, message};
}

// Runs f, turning any exception other than Failure into one with exit_code.
template <typename F>
auto Stage(int exit_code, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Failure&) {
    throw;
  } catch (const std::exception& e) {
    throw Failure{exit_code, e.what()};
  }
}

std::string NormalizeKey(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

Json NumberJson(double v) {
  if (std::isfinite(v)) return v;
  return FormatDouble(v);
}

std::string JsonScalarText(const Json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return FormatDouble(v.get<double>());
  ConfigFail("config key '" + key + "' must be a scalar or a list of scalars");
}

// Resolves settings with precedence: flag, then config file, then default.
// Every resolved value is recorded for echoing into the outputs.
class Options {
 public:
  void SetFlag(const std::string& key, std::string value) { flags_[key] = std::move(value); }

  void LoadConfig(const fs::path& path) {
    Json doc;
    try {
      doc = Json::parse(ReadFile(path));
    } catch (const nlohmann::json::exception& e) {
      ConfigFail("config " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_object()) ConfigFail("config " + path.string() + " must be a JSON object");
    for (const auto& [raw_key, value] : doc.items()) {
      const std::string key = NormalizeKey(raw_key);
      if (value.is_null()) continue;
      if (value.is_array()) {
        std::string joined;
        for (const auto& item : value) {
          if (!joined.empty()) joined += ",";
          joined += JsonScalarText(item, key);
        }
        config_[key] = joined;
      } else {
        config_[key] = JsonScalarText(value, key);
      }
    }
  }

  std::optional<std::string> Raw(const std::string& key) const {
    if (auto it = flags_.find(key); it != flags_.end()) return it->second;
    if (auto it = config_.find(key); it != config_.end()) return it->second;
    return std::nullopt;
  }

  bool Given(const std::string& key) const { return Raw(key).has_value(); }

  std::string Str(const std::string& key, const std::string& fallback) {
    const std::string v = Raw(key).value_or(fallback);
    effective_[key] = v;
    return v;
  }

  std::string Required(const std::string& key) {
    if (!Given(key)) ConfigFail("--" + key + " is required");
    return Str(key, {});
  }

  // Output location; not echoed, so outputs do not depend on where they go.
  fs::path OutputDir() const {
    if (!Given("out")) ConfigFail("--out is required");
    return *Raw("out");
  }

  std::string Choice(const std::string& key, const std::string& fallback,
                     const std::vector<std::string>& allowed) {
    const std::string v = ToLower(Str(key, fallback));
    for (const auto& a : allowed) {
      if (v == a) {
        effective_[key] = v;
        return v;
      }
    }
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    ConfigFail("--" + key + " must be one of {" + list + "}, got '" + v + "'");
  }

  double Real(const std::string& key, double fallback) {
    double v = fallback;
    if (auto raw = Raw(key)) v = ParseReal(*raw, key);
    effective_[key] = NumberJson(v);
    return v;
  }

  std::size_t Count(const std::string& key, std::size_t fallback) {
    std::size_t v = fallback;
    if (auto raw = Raw(key)) v = ParseCount(*raw, key);
    effective_[key] = v;
    return v;
  }

  std::uint64_t Seed(const std::string& key, std::uint64_t fallback) {
    std::uint64_t v = fallback;
    if (auto raw = Raw(key)) {
      const std::string text(Trim(*raw));
      std::size_t used = 0;
      try {
        v = std::stoull(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (text.empty() || used != text.size() || text.front() == '-') {
        ConfigFail("--" + key + " must be a nonnegative integer, got '" + *raw + "'");
      }
    }
    effective_[key] = v;
    return v;
  }

  bool Flag(const std::string& key) {
    bool v = false;
    if (auto raw = Raw(key)) {
      const std::string t = ToLower(Trim(*raw));
      if (t == "true" || t == "1") {
        v = true;
      } else if (t != "false" && t != "0") {
        ConfigFail("--" + key + " must be true or false, got '" + *raw + "'");
      }
    }
    effective_[key] = v;
    return v;
  }

  void Record(const std::string& key, Json value) { effective_[key] = std::move(value); }
  const Json& effective() const { return effective_; }

  static double ParseReal(const std::string& raw, const std::string& key) {
    const auto v = ParseDouble(raw);
    if (!v) ConfigFail("--" + key + " expects a number, got '" + raw + "'");
    return *v;
  }

  static std::size_t ParseCount(const std::string& raw, const std::string& key) {
    const auto v = ParseDouble(raw);
    if (!v || !std::isfinite(*v) || *v < 0 || std::floor(*v) != *v || *v > 1e15) {
      ConfigFail("--" + key + " expects a nonnegative integer, got '" + raw + "'");
    }
    return static_cast<std::size_t>(*v);
  }

 private:
  std::map<std::string, std::string> flags_;
  std::map<std::string, std::string> config_;
  Json effective_ = Json::object();
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == ',') {
      out.emplace_back(Trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  out.emplace_back(Trim(current));
  return out;
}

// --------------------------------------------------------------------------
// Datasets

struct Dataset {
  FeatureTable table;
  std::string name;
  std::string target;
  std::vector<std::string> features;  // empty: all
};

RowSelector SelectorFor(const std::string& dataset, const std::string& gender_column) {
  if (dataset == "combined") return RowSelector::All();
  RowSelector s;
  s.column = gender_column;
  s.ignore_case = true;
  s.levels = dataset == "male" ? std::vector<std::string>{"m", "male"}
                               : std::vector<std::string>{"f", "female"};
  return s;
}

std::string DefaultTarget(const FeatureTable& table) {
  if (table.targets.size() == 1) return table.targets.front().name;
  ConfigFail("--target is required when the schema declares " +
             std::to_string(table.targets.size()) + " target columns");
}

Dataset LoadDataset(Options& o) {
  const std::string input = o.Required("input");
  const std::string schema_path = o.Required("schema");
  const std::string dataset = o.Choice("dataset", "combined", {"male", "female", "combined"});
  const std::string gender = o.Str("gender-column", kSynthGender);
  return Stage(kExitInputError, [&] {
    const Schema schema = LoadSchema(schema_path);
    const FeatureTable clean = DropIncomplete(LoadCsv(input, schema));
    Dataset d;
    d.name = dataset;
    d.table = FilterDataset(clean, SelectorFor(dataset, gender));
    if (d.table.rows() == 0) {
      throw Error(ErrorCode::kEmptyAfterCleaning, "dataset '" + dataset + "' selects no rows");
    }
    d.target = o.Given("target") ? o.Str("target", {}) : DefaultTarget(d.table);
    o.Record("target", d.target);
    d.table.target(d.target);
    const std::size_t top = o.Count("top-features", 0);
    if (top > 0) {
      for (const auto& fc : PearsonRank(d.table, d.target, top)) d.features.push_back(fc.name);
      o.Record("selected-features", d.features);
    }
    return d;
  });
}

// --------------------------------------------------------------------------
// Parameter parsing

std::optional<EpsilonMode> ParseEpsMode(const std::string& text) {
  const std::string t = ToLower(Trim(text));
  const auto colon = t.find(':');
  const std::string head = t.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : t.substr(colon + 1);
  if (head == "self-tuning") {
    if (arg.empty()) return std::nullopt;
    const std::size_t k = Options::ParseCount(arg, "eps-mode");
    if (k == 0) ConfigFail("--eps-mode self-tuning scale must be positive");
    return SelfTuningEpsilon{k};
  }
  if (head == "global" && !arg.empty()) {
    const double eps = Options::ParseReal(arg, "eps-mode");
    if (!(eps > 0.0) || !std::isfinite(eps)) ConfigFail("--eps-mode global epsilon must be positive");
    return GlobalEpsilon{eps};
  }
  ConfigFail("--eps-mode must be 'self-tuning', 'self-tuning:K' or 'global:EPS', got '" + text +
             "'");
}

double ParsePValue(const std::string& text) {
  const double p = Options::ParseReal(text, "p");
  if (!(p >= 2.0)) ConfigFail("--p must lie in [2, inf], got '" + text + "'");
  return p;
}

FoldMode ParseFoldMode(const std::string& text) {
  return text == "modified" ? FoldMode::kModified : FoldMode::kStandard;
}

SolverConfig ReadSolver(Options& o) {
  SolverConfig cfg;
  cfg.tol = o.Real("tol", cfg.tol);
  cfg.max_iter = o.Count("max-iter", cfg.max_iter);
  if (!(cfg.tol > 0.0)) ConfigFail("--tol must be positive");
  return cfg;
}

FoldSpec ReadFolds(Options& o) {
  if (o.Given("train-pct")) {
    const double pct = o.Real("train-pct", 0.0);
    return Stage(kExitInputError, [&] { return FoldSpecForTrainingPct(pct); });
  }
  FoldSpec spec;
  spec.k = o.Count("folds", 5);
  spec.mode = ParseFoldMode(o.Choice("fold-mode", "standard", {"standard", "modified"}));
  return spec;
}

EvalSettings ReadSettings(Options& o) {
  EvalSettings s;
  s.repeats = o.Count("repeats", 10);
  s.master_seed = o.Seed("seed", 0);
  if (s.repeats == 0) ConfigFail("--repeats must be at least 1");
  return s;
}

void WriteOutput(const fs::path& dir, const std::string& name, const std::string& content) {
  Stage(kExitInputError, [&] {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string() + ": " + ec.message());
    WriteFileAtomic(dir / name, content);
    return 0;
  });
}

std::string Fixed(double v, int digits = 4) {
  if (!std::isfinite(v)) return FormatDouble(v);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Json ParseJson(const std::string& text) { return Json::parse(text); }

// --------------------------------------------------------------------------
// Commands

int CmdIngest(Options& o, std::ostream& out) {
  const std::string input = o.Required("input");
  const std::string schema_path = o.Required("schema");
  const fs::path dir = o.OutputDir();
  const std::string dataset = o.Choice("dataset", "combined", {"male", "female", "combined"});
  const std::string gender = o.Str("gender-column", kSynthGender);
  const std::optional<std::size_t> graph_k =
      o.Given("k") ? std::optional<std::size_t>(o.Count("k", 0)) : std::nullopt;
  const std::size_t top = o.Count("top-features", 0);

  Json summary;
  const FeatureTable selected = Stage(kExitInputError, [&] {
    const Schema schema = LoadSchema(schema_path);
    const FeatureTable raw = LoadCsv(input, schema);
    const FeatureTable clean = DropIncomplete(raw);
    summary["input"] = input;
    summary["rows_before"] = raw.rows();
    summary["rows_after"] = clean.rows();
    summary["rows_dropped"] = raw.rows() - clean.rows();
    Json missing = Json::object();
    for (const auto& [name, count] : raw.missing_counts()) missing[name] = count;
    summary["missing_counts"] = missing;
    Json counts = Json::object();
    if (clean.has_category(gender)) {
      counts["male"] = FilterDataset(clean, SelectorFor("male", gender)).rows();
      counts["female"] = FilterDataset(clean, SelectorFor("female", gender)).rows();
    }
    counts["combined"] = clean.rows();
    summary["datasets"] = counts;
    FeatureTable sel = FilterDataset(clean, SelectorFor(dataset, gender));
    summary["dataset"] = dataset;
    summary["rows_selected"] = sel.rows();
    if (graph_k && sel.rows() > 0) {
      const Eigen::MatrixXd z = ApplyZScore(sel.features, FitZScore(sel.features), sel.feature_names);
      const WeightedGraph g = KnnGraph(z, *graph_k, SelfTuningEpsilon{*graph_k});
      summary["graph"] = {{"k", *graph_k},
                          {"edges", g.edge_count()},
                          {"components", ConnectedComponents(g).count()}};
    }
    if (top > 0 && sel.rows() > 0) {
      const std::string target = o.Given("target") ? o.Str("target", {}) : DefaultTarget(sel);
      Json ranked = Json::array();
      for (const auto& fc : PearsonRank(sel, target, top)) {
        ranked.push_back({{"feature", fc.name}, {"r", NumberJson(fc.r)}});
      }
      summary["top_features"] = {{"target", target}, {"ranking", ranked}};
    }
    return sel;
  });
  summary["config"] = o.effective();

  WriteOutput(dir, "cleaned.csv", TableToCsv(selected));
  WriteOutput(dir, "summary.json", summary.dump(2) + "\n");
  out << "rows before " << summary["rows_before"].get<std::size_t>() << ", after "
      << summary["rows_after"].get<std::size_t>() << ", selected ("
      << dataset << ") " << selected.rows() << "\n";
  if (summary.contains("graph")) {
    out << "k-NN graph (k=" << *graph_k << "): "
        << summary["graph"]["components"].get<std::size_t>() << " component(s)\n";
  }
  return kExitOk;
}

int CmdSynth(Options& o, std::ostream& out) {
  const fs::path dir = o.OutputDir();
  SynthSpec spec;
  spec.n = o.Count("n", spec.n);
  spec.dim = o.Count("dim", spec.dim);
  spec.noise_sd = o.Real("noise-sd", spec.noise_sd);
  spec.seed = o.Seed("seed", spec.seed);
  const std::string structure = o.Choice("structure", "blobs", {"blobs", "curve"});
  if (structure == "blobs") {
    const double spread = o.Real("spread", 1.0);
    const double separation = o.Real("separation", 0.0);
    spec.structure = separation > 0.0 ? TwoBlobs(spec.dim, separation, spread)
                                      : GaussianBlobs{{}, spread};
  } else {
    spec.structure = ManifoldCurve{o.Real("ambient-noise", 0.05)};
  }
  const std::string target_fn = o.Choice("target-fn", "smooth", {"smooth", "linear"});
  if (target_fn == "linear") spec.target_fn = LinearCombo{};

  const FeatureTable table = Stage(kExitInputError, [&] { return Generate(spec); });
  WriteOutput(dir, "data.csv", TableToCsv(table));
  WriteOutput(dir, "schema.json", SchemaToJson(table.schema()));
  out << "wrote " << table.rows() << " rows x " << table.cols() << " features to "
      << (dir / "data.csv").string() << "\n";
  return kExitOk;
}

void PrintReportTable(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "model  target  dataset  train%  RMSE% (mean +- std)  entries  nonconverged  failed\n";
  for (const auto& r : reports) {
    out << r.model << "  " << r.target << "  " << r.dataset << "  "
        << FormatDouble(r.training_pct) << "  " << Fixed(r.rmse_mean) << " +- "
        << Fixed(r.rmse_std) << "  " << r.entries.size() << "  " << r.nonconverged_count
        << "  " << r.failed_count << "\n";
  }
}

int CmdEval(Options& o, std::ostream& out, std::ostream& err) {
  const fs::path dir = o.OutputDir();
  const std::string model = o.Choice("model", "plaplace", {"plaplace", "ridge", "polyridge", "lssvr"});
  const FoldSpec folds = ReadFolds(o);
  const EvalSettings settings = ReadSettings(o);

  std::optional<ModelSpec> baseline;
  GraphConfig graph;
  SolverConfig solver;
  if (model == "plaplace") {
    solver = ReadSolver(o);
    solver.p = ParsePValue(o.Str("p", "2"));
    graph.k = o.Count("k", graph.k);
    graph.eps_mode = ParseEpsMode(o.Str("eps-mode", "self-tuning"));
  } else if (model == "lssvr") {
    baseline = LssvrSpec{o.Real("gamma", LssvrSpec{}.gamma), o.Real("c", LssvrSpec{}.c)};
  } else {
    const int degree = static_cast<int>(o.Count("degree", model == "ridge" ? 1 : 2));
    if (model == "ridge" && degree != 1) ConfigFail("--model ridge requires --degree 1");
    if (model == "polyridge" && degree != 2 && degree != 3) {
      ConfigFail("--model polyridge requires --degree 2 or 3");
    }
    baseline = RidgeSpec{o.Real("lambda", RidgeSpec{}.lambda), degree};
  }
  const Dataset data = LoadDataset(o);
  graph.features = data.features;

  const EvalReport report = Stage(kExitEvalError, [&] {
    if (baseline) {
      return RunBaselineEval(data.table, data.target, *baseline, folds, settings, data.features,
                             data.name);
    }
    return RunPlaplaceEval(data.table, data.target, graph, solver, folds, settings, data.name);
  });
  const std::vector<EvalReport> reports{report};
  const std::string config = o.effective().dump();
  WriteOutput(dir, "report.json", ReportsToJson(reports, config));
  WriteOutput(dir, "report.csv", ReportsToCsv(reports));
  PrintReportTable(out, reports);
  if (!report.error.empty()) {
    err << "error: " << report.error << "\n";
    return kExitEvalError;
  }
  if (report.failed_count > 0) {
    err << "warning: " << report.failed_count << " fold(s) failed; see report.json\n";
  }
  return kExitOk;
}

SweepOptions ReadSweepOptions(Options& o, const Dataset& data) {
  SweepOptions opts;
  opts.eps_mode = ParseEpsMode(o.Str("eps-mode", "self-tuning"));
  opts.features = data.features;
  opts.solver = ReadSolver(o);
  opts.settings = ReadSettings(o);
  opts.dataset = data.name;
  return opts;
}

std::vector<double> ReadRealGrid(Options& o, const std::string& key, const std::string& fallback) {
  const std::string text = o.Str(key, fallback);
  return Stage(kExitInputError, [&] { return ParseRealList(text); });
}

std::vector<std::size_t> ReadCountGrid(Options& o, const std::string& key,
                                       const std::string& fallback) {
  const std::string text = o.Str(key, fallback);
  return Stage(kExitInputError, [&] { return ParseCountList(text); });
}

std::string JoinReals(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + FormatDouble(x);
  return s;
}

int CmdAsymptotic(Options& o, std::ostream& out) {
  const fs::path dir = o.OutputDir();
  AsymptoticOptions opts;
  opts.k_list = ReadCountGrid(o, "grid-k", "10,30,50");
  opts.p_list = ReadRealGrid(o, "grid-p", JoinReals(AsymptoticOptions::DefaultPList()));
  const auto pct = ReadRealGrid(o, "grid-train-pct", "20");
  if (pct.size() != 1) ConfigFail("asymptotic mode takes a single --grid-train-pct value");
  opts.training_pct = pct.front();
  opts.tolerance = o.Real("tolerance", opts.tolerance);
  const Dataset data = LoadDataset(o);
  opts.sweep = ReadSweepOptions(o, data);

  const AsymptoticResult result =
      Stage(kExitEvalError, [&] { return AsymptoticStudy(data.table, data.target, opts); });
  for (const auto& series : result.series) {
    WriteOutput(dir, "asymptotic_k" + std::to_string(series.k) + ".csv", SeriesToCsv(series));
  }
  WriteOutput(dir, "asymptotic.json", AsymptoticToJson(result, o.effective().dump()));
  out << "k  |RMSE(p_last) - RMSE(inf)|  max ||u_last - u_inf||  within " << FormatDouble(opts.tolerance) << "\n";
  for (const auto& series : result.series) {
    out << series.k << "  " << Fixed(series.rmse_gap, 6) << "  "
        << Fixed(series.max_solution_gap, 6) << "  " << (series.within_tolerance ? "yes" : "no")
        << "\n";
  }
  return kExitOk;
}

int CmdSweep(Options& o, std::ostream& out) {
  if (o.Flag("asymptotic")) return CmdAsymptotic(o, out);
  const fs::path dir = o.OutputDir();
  const SweepGrid defaults = SweepGrid::Default();
  SweepGrid grid;
  grid.p = ReadRealGrid(o, "grid-p", "2:0.5:10");
  grid.k = ReadCountGrid(o, "grid-k", "10:5:60");
  grid.training_pct = ReadRealGrid(o, "grid-train-pct", JoinReals(defaults.training_pct));
  for (double p : grid.p) {
    if (!(p >= 2.0)) ConfigFail("--grid-p values must lie in [2, inf], got " + FormatDouble(p));
  }
  const Dataset data = LoadDataset(o);
  const SweepOptions opts = ReadSweepOptions(o, data);

  const SweepResult result =
      Stage(kExitEvalError, [&] { return Sweep(data.table, data.target, grid, opts); });
  const std::string config = o.effective().dump();
  Json doc;
  doc["config"] = ParseJson(config);
  doc["reports"] = ParseJson(ReportsToJson(result.reports));
  Json optima = Json::array();
  for (const auto& opt : result.optima) {
    Json row;
    row["training_pct"] = NumberJson(opt.training_pct);
    if (opt.report) {
      row["report"] = *opt.report;
      row["best_p"] = NumberJson(opt.best_p);
      row["best_k"] = opt.best_k;
      row["rmse_mean"] = NumberJson(opt.rmse_mean);
    } else {
      row["report"] = nullptr;
    }
    optima.push_back(row);
  }
  doc["optima"] = optima;
  WriteOutput(dir, "sweep.json", doc.dump(2) + "\n");
  WriteOutput(dir, "sweep.csv", ReportsToCsv(result.reports));
  WriteOutput(dir, "optima.csv", OptimaToCsv(result.optima));
  out << "train%  best_p  best_k  RMSE%\n";
  for (const auto& opt : result.optima) {
    if (opt.report) {
      out << FormatDouble(opt.training_pct) << "  " << FormatDouble(opt.best_p) << "  "
          << opt.best_k << "  " << Fixed(opt.rmse_mean) << "\n";
    } else {
      out << FormatDouble(opt.training_pct) << "  (no valid cell)\n";
    }
  }
  return kExitOk;
}

// --------------------------------------------------------------------------
// Command-line surface

void AddValue(CLI::App* sub, Options& o, const std::string& key, const std::string& help) {
  sub->add_option_function<std::string>(
      "--" + key, [&o, key](const std::string& v) { o.SetFlag(key, v); }, help);
}

void AddDataFlags(CLI::App* sub, Options& o) {
  AddValue(sub, o, "input", "CSV dataset");
  AddValue(sub, o, "schema", "JSON column-role schema");
  AddValue(sub, o, "dataset", "male | female | combined (default combined)");
  AddValue(sub, o, "gender-column", "categorical column used by --dataset (default gender)");
  AddValue(sub, o, "target", "target column (default: the schema's only target)");
  AddValue(sub, o, "top-features", "keep the N features with the largest |Pearson r|");
}

void AddSolverFlags(CLI::App* sub, Options& o) {
  AddValue(sub, o, "eps-mode", "self-tuning[:K] | global:EPS (default self-tuning)");
  AddValue(sub, o, "tol", "solver tolerance (default 1e-6)");
  AddValue(sub, o, "max-iter", "solver sweep limit (default 100000)");
  AddValue(sub, o, "repeats", "repeated randomized runs (default 10)");
}

void AddCommon(CLI::App* sub, Options& o, std::string& config_path) {
  sub->add_option("--config", config_path, "JSON config; flags override its values");
  AddValue(sub, o, "out", "output directory");
  AddValue(sub, o, "seed", "master seed (default 0)");
}

}  // namespace

std::vector<double> ParseRealList(const std::string& text) {
  std::vector<double> out;
  for (const std::string& token : SplitList(text)) {
    if (token.empty()) ConfigFail("empty entry in list '" + text + "'");
    const auto first = token.find(':');
    if (first == std::string::npos) {
      out.push_back(Options::ParseReal(token, "list"));
      continue;
    }
    const auto second = token.find(':', first + 1);
    if (second == std::string::npos || token.find(':', second + 1) != std::string::npos) {
      ConfigFail("range '" + token + "' must look like start:step:stop");
    }
    const double a = Options::ParseReal(token.substr(0, first), "list");
    const double step = Options::ParseReal(token.substr(first + 1, second - first - 1), "list");
    const double b = Options::ParseReal(token.substr(second + 1), "list");
    if (!std::isfinite(a) || !std::isfinite(b) || !(step > 0.0) || !std::isfinite(step) || b < a) {
      ConfigFail("range '" + token + "' needs finite start <= stop and a positive step");
    }
    const auto steps = static_cast<long long>(std::floor((b - a) / step + 1e-9));
    for (long long i = 0; i <= steps; ++i) out.push_back(a + static_cast<double>(i) * step);
  }
  return out;
}

std::vector<std::size_t> ParseCountList(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : ParseRealList(text)) {
    if (!std::isfinite(v) || v < 1 || std::floor(v) != v) {
      ConfigFail("list '" + text + "' must contain positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph p-Laplacian semi-supervised regression toolkit", "plapreg"};
  app.require_subcommand(1);
  Options o;
  std::string config_path;

  CLI::App* ingest = app.add_subcommand("ingest", "clean a CSV dataset and summarize it");
  AddCommon(ingest, o, config_path);
  AddDataFlags(ingest, o);
  AddValue(ingest, o, "k", "also report components of the k-NN graph");

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  AddCommon(synth, o, config_path);
  for (const char* key : {"n", "dim", "noise-sd", "structure", "separation", "spread",
                          "ambient-noise", "target-fn"}) {
    AddValue(synth, o, key, "synthetic spec field");
  }

  CLI::App* eval = app.add_subcommand("eval", "cross-validated evaluation of one model");
  AddCommon(eval, o, config_path);
  AddDataFlags(eval, o);
  AddSolverFlags(eval, o);
  AddValue(eval, o, "model", "plaplace | ridge | polyridge | lssvr (default plaplace)");
  AddValue(eval, o, "p", "p in [2, inf] (default 2)");
  AddValue(eval, o, "k", "neighbors per vertex (default 10)");
  AddValue(eval, o, "folds", "K (default 5)");
  AddValue(eval, o, "fold-mode", "standard | modified (default standard)");
  AddValue(eval, o, "train-pct", "training percentage; overrides --folds/--fold-mode");
  AddValue(eval, o, "gamma", "LSSVR kernel width (default 0.01)");
  AddValue(eval, o, "c", "LSSVR regularization (default 100)");
  AddValue(eval, o, "lambda", "ridge penalty (default 1)");
  AddValue(eval, o, "degree", "polynomial degree (ridge 1, polyridge 2 or 3)");

  CLI::App* sweep = app.add_subcommand("sweep", "grid sweep over p, k and training percentage");
  AddCommon(sweep, o, config_path);
  AddDataFlags(sweep, o);
  AddSolverFlags(sweep, o);
  AddValue(sweep, o, "grid-p", "p values, e.g. 2:0.5:10 or 2,4,inf");
  AddValue(sweep, o, "grid-k", "k values, e.g. 10:5:60");
  AddValue(sweep, o, "grid-train-pct", "training percentages (default 5,10,20,25,33,50,80)");
  AddValue(sweep, o, "tolerance", "asymptotic mode: RMSE gap tolerance (default 0.5)");
  sweep->add_flag_callback("--asymptotic", [&o] { o.SetFlag("asymptotic", "true"); },
                           "run the p -> inf study instead of the grid");

  CLI::App* asym = app.add_subcommand("asymptotic", "RMSE versus p up to p = inf");
  AddCommon(asym, o, config_path);
  AddDataFlags(asym, o);
  AddSolverFlags(asym, o);
  AddValue(asym, o, "grid-p", "ascending p values ending with inf");
  AddValue(asym, o, "grid-k", "k values (default 10,30,50)");
  AddValue(asym, o, "grid-train-pct", "training percentage (default 20)");
  AddValue(asym, o, "tolerance", "RMSE gap tolerance in percentage points (default 0.5)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  log::WarningSink previous =
      log::SetWarningSink([&err](const std::string& m) { err << "warning: " << m << "\n"; });
  int code = kExitOk;
  try {
    if (!config_path.empty()) {
      Stage(kExitInputError, [&] {
        o.LoadConfig(config_path);
        return 0;
      });
      o.Record("config-file", config_path);
    }
    if (ingest->parsed()) {
      o.Record("command", "ingest");
      code = CmdIngest(o, out);
    } else if (synth->parsed()) {
      o.Record("command", "synth");
      code = CmdSynth(o, out);
    } else if (eval->parsed()) {
      o.Record("command", "eval");
      code = CmdEval(o, out, err);
    } else if (sweep->parsed()) {
      o.Record("command", "sweep");
      code = CmdSweep(o, out);
    } else {
      o.Record("command", "asymptotic");
      code = CmdAsymptotic(o, out);
    }
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    code = f.exit_code;
  }
  log::SetWarningSink(std::move(previous));
  return code;
}

int Main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return Run(args, std::cout, std::cerr);
}

}  // namespace plapreg::cli
