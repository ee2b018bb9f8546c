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
#include "plapreg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "plapreg/error.hpp"
#include "plapreg/rng.hpp"
#include "plapreg/text.hpp"

namespace plapreg {

double RmsePercent(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size() || y_true.empty()) {
    throw Error(ErrorCode::kLengthMismatch,
                "RMSE needs equal nonzero lengths, got " + std::to_string(y_true.size()) +
                    " and " + std::to_string(y_pred.size()));
  }
  double err = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double d = y_pred[i] - y_true[i];
    err += d * d;
    ref += y_true[i] * y_true[i];
  }
  if (!(ref > 0.0)) {
    throw Error(ErrorCode::kZeroDenominator, "all true values are zero");
  }
  const double count = static_cast<double>(y_true.size());
  return 100.0 * std::sqrt(err / count) / std::sqrt(ref / count);
}

double RmsePercent(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  return RmsePercent(std::span<const double>(y_true.data(), static_cast<std::size_t>(y_true.size())),
                     std::span<const double>(y_pred.data(), static_cast<std::size_t>(y_pred.size())));
}

std::string FoldModeName(FoldMode mode) {
  return mode == FoldMode::kStandard ? "standard" : "modified";
}

std::vector<std::size_t> FoldPlan::fold_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < assignments.size(); ++r) {
    if (assignments[r] == fold) out.push_back(r);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t rotation) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < assignments.size(); ++r) {
    const bool in_fold = assignments[r] == rotation;
    if (in_fold == (mode == FoldMode::kModified)) out.push_back(r);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t rotation) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < assignments.size(); ++r) {
    const bool in_fold = assignments[r] == rotation;
    if (in_fold != (mode == FoldMode::kModified)) out.push_back(r);
  }
  return out;
}

FoldPlan MakeFolds(std::size_t n, std::size_t k, FoldMode mode, std::uint64_t seed) {
  if (k < 2 || k > n) {
    throw Error(ErrorCode::kKOutOfRange,
                "fold count k=" + std::to_string(k) + " must satisfy 2 <= k <= n=" +
                    std::to_string(n));
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  rng.Shuffle(std::span<std::uint32_t>(order));

  FoldPlan plan;
  plan.k = k;
  plan.mode = mode;
  plan.seed = seed;
  plan.assignments.assign(n, 0);
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = base + (f < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) {
      plan.assignments[order[pos++]] = static_cast<std::uint32_t>(f);
    }
  }
  return plan;
}

FoldSpec FoldSpecForTrainingPct(double training_pct) {
  if (!(training_pct > 0.0 && training_pct < 100.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "training percentage must lie in (0, 100), got " + FormatDouble(training_pct));
  }
  if (training_pct <= 50.0) {
    return {static_cast<std::size_t>(std::lround(100.0 / training_pct)), FoldMode::kModified};
  }
  return {static_cast<std::size_t>(std::lround(100.0 / (100.0 - training_pct))),
          FoldMode::kStandard};
}

double TrainingPct(const FoldSpec& spec) {
  const double k = static_cast<double>(spec.k);
  return spec.mode == FoldMode::kModified ? 100.0 / k : 100.0 * (k - 1.0) / k;
}

std::vector<double> EvalReport::rmse_values() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.rmse) out.push_back(*e.rmse);
  }
  return out;
}

void Summarize(EvalReport& report) {
  const std::vector<double> values = report.rmse_values();
  report.failed_count = report.entries.size() - values.size();
  report.nonconverged_count = static_cast<std::size_t>(
      std::count_if(report.entries.begin(), report.entries.end(),
                    [](const FoldOutcome& e) { return e.rmse && !e.converged; }));
  if (values.empty()) {
    report.rmse_mean = std::nan("");
    report.rmse_std = std::nan("");
    return;
  }
  const double count = static_cast<double>(values.size());
  report.rmse_mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
  double ss = 0.0;
  for (double v : values) ss += (v - report.rmse_mean) * (v - report.rmse_mean);
  report.rmse_std = std::sqrt(ss / count);
}

namespace {

void RequireComplete(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (!x.allFinite() || !y.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument,
                "evaluation needs a complete table; run drop_incomplete first");
  }
}

Eigen::MatrixXd SelectedFeatures(const FeatureTable& table,
                                 const std::vector<std::string>& features) {
  if (features.empty()) return table.features;
  return table.select_features(features).features;
}

std::vector<std::string> SelectedNames(const FeatureTable& table,
                                       const std::vector<std::string>& features) {
  return features.empty() ? table.feature_names : features;
}

// Features standardized over every row: unlabeled rows legitimately take
// part in graph construction.
Eigen::MatrixXd GraphPoints(const FeatureTable& table,
                            const std::vector<std::string>& features) {
  const Eigen::MatrixXd x = SelectedFeatures(table, features);
  const std::vector<std::string> names = SelectedNames(table, features);
  return ApplyZScore(x, FitZScore(x), names);
}

Eigen::MatrixXd Rows(const Eigen::MatrixXd& x, std::span<const std::size_t> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

Eigen::VectorXd Rows(const Eigen::VectorXd& y, std::span<const std::size_t> rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
  }
  return out;
}

// Labels standardized by the training mean/sd; the solver's absolute
// tolerance then has the same meaning for every target.
struct ScaledLabels {
  LabelAssignment labels;
  double mean = 0.0;
  double sd = 1.0;
};

ScaledLabels MakeScaledLabels(std::size_t n, const Eigen::VectorXd& y,
                              std::span<const std::size_t> train) {
  const Eigen::VectorXd values = Rows(y, train);
  ScaledLabels out;
  out.mean = values.mean();
  const double sd =
      std::sqrt((values.array() - out.mean).square().sum() / static_cast<double>(values.size()));
  out.sd = sd > 0.0 ? sd : 1.0;
  std::vector<VertexId> ids(train.begin(), train.end());
  std::vector<double> scaled(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    scaled[i] = (values[static_cast<Eigen::Index>(i)] - out.mean) / out.sd;
  }
  out.labels = LabelAssignment::Make(n, std::move(ids), std::move(scaled));
  return out;
}

double ScoreSolution(const std::vector<double>& u, const ScaledLabels& scaled,
                     const Eigen::VectorXd& y, std::span<const std::size_t> test) {
  std::vector<double> truth(test.size());
  std::vector<double> pred(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    truth[i] = y[static_cast<Eigen::Index>(test[i])];
    pred[i] = u[test[i]] * scaled.sd + scaled.mean;
  }
  return RmsePercent(truth, pred);
}

FoldPlan PlanForRepeat(std::size_t n, const FoldSpec& folds, const EvalSettings& settings,
                       std::size_t repeat) {
  return MakeFolds(n, folds.k, folds.mode,
                   DeriveSeed(settings.master_seed, kRepeatStream, repeat));
}

}  // namespace

EvalReport RunPlaplaceEvalOnGraph(const WeightedGraph& graph, const Eigen::VectorXd& y,
                                  const SolverConfig& solver_cfg, const FoldSpec& folds,
                                  const EvalSettings& settings) {
  const std::size_t n = graph.size();
  if (static_cast<std::size_t>(y.size()) != n) {
    throw Error(ErrorCode::kLengthMismatch, "target length differs from graph size");
  }
  solver_cfg.validate();
  EvalReport report;
  report.model = "plaplace";
  report.params.p = solver_cfg.p;
  report.folds = folds;
  report.repeats = settings.repeats;
  report.training_pct = TrainingPct(folds);

  for (std::size_t r = 0; r < settings.repeats; ++r) {
    const FoldPlan plan = PlanForRepeat(n, folds, settings, r);
    for (std::size_t f = 0; f < plan.rotations(); ++f) {
      FoldOutcome outcome;
      outcome.repeat = r;
      outcome.fold = f;
      try {
        const auto train = plan.train_rows(f);
        const auto test = plan.test_rows(f);
        const ScaledLabels scaled = MakeScaledLabels(n, y, train);
        const Solution sol = Solve(graph, scaled.labels, solver_cfg);
        outcome.converged = sol.converged;
        outcome.iterations = sol.iterations;
        outcome.rmse = ScoreSolution(sol.u, scaled, y, test);
      } catch (const Error& e) {
        outcome.error = e.what();
      }
      report.entries.push_back(std::move(outcome));
    }
  }
  Summarize(report);
  return report;
}

EvalReport RunPlaplaceEval(const FeatureTable& table, const std::string& target,
                           const GraphConfig& graph_cfg, const SolverConfig& solver_cfg,
                           const FoldSpec& folds, const EvalSettings& settings,
                           const std::string& dataset) {
  const Eigen::VectorXd& y = table.target(target);
  RequireComplete(SelectedFeatures(table, graph_cfg.features), y);
  const EpsilonMode eps = graph_cfg.resolved_eps();
  const WeightedGraph graph = KnnGraph(GraphPoints(table, graph_cfg.features), graph_cfg.k, eps);
  EvalReport report = RunPlaplaceEvalOnGraph(graph, y, solver_cfg, folds, settings);
  report.target = target;
  report.dataset = dataset;
  report.params.k = graph_cfg.k;
  report.params.eps_mode = DescribeEpsilon(eps);
  return report;
}

EvalReport RunBaselineEval(const FeatureTable& table, const std::string& target,
                           const ModelSpec& model, const FoldSpec& folds,
                           const EvalSettings& settings,
                           const std::vector<std::string>& features,
                           const std::string& dataset) {
  const Eigen::VectorXd& y = table.target(target);
  const Eigen::MatrixXd x = SelectedFeatures(table, features);
  const std::vector<std::string> names = SelectedNames(table, features);
  RequireComplete(x, y);
  const auto n = static_cast<std::size_t>(x.rows());

  EvalReport report;
  report.target = target;
  report.dataset = dataset;
  report.folds = folds;
  report.repeats = settings.repeats;
  report.training_pct = TrainingPct(folds);
  if (const auto* ridge = std::get_if<RidgeSpec>(&model)) {
    report.model = ridge->degree == 1 ? "ridge" : "polyridge";
    report.params.lambda = ridge->lambda;
    report.params.degree = ridge->degree;
  } else {
    const auto& lssvr = std::get<LssvrSpec>(model);
    report.model = "lssvr";
    report.params.gamma = lssvr.gamma;
    report.params.c = lssvr.c;
  }

  for (std::size_t r = 0; r < settings.repeats; ++r) {
    const FoldPlan plan = PlanForRepeat(n, folds, settings, r);
    for (std::size_t f = 0; f < plan.rotations(); ++f) {
      FoldOutcome outcome;
      outcome.repeat = r;
      outcome.fold = f;
      try {
        const auto train = plan.train_rows(f);
        const auto test = plan.test_rows(f);
        const NormalizationParams norm = FitZScore(x, train);
        const Eigen::MatrixXd x_train = ApplyZScore(Rows(x, train), norm, names);
        const Eigen::MatrixXd x_test = ApplyZScore(Rows(x, test), norm, names);
        const Eigen::VectorXd y_train = Rows(y, train);
        Eigen::VectorXd pred;
        if (const auto* ridge = std::get_if<RidgeSpec>(&model)) {
          pred = Predict(RidgeFit(x_train, y_train, ridge->lambda, ridge->degree), x_test);
        } else {
          const auto& lssvr = std::get<LssvrSpec>(model);
          pred = Predict(LssvrFit(x_train, y_train, lssvr.gamma, lssvr.c), x_test);
        }
        outcome.rmse = RmsePercent(Rows(y, test), pred);
      } catch (const Error& e) {
        outcome.error = e.what();
      }
      report.entries.push_back(std::move(outcome));
    }
  }
  Summarize(report);
  return report;
}

SweepGrid SweepGrid::Default() {
  SweepGrid grid;
  for (int i = 0; i <= 16; ++i) grid.p.push_back(2.0 + 0.5 * i);
  for (std::size_t k = 10; k <= 60; k += 5) grid.k.push_back(k);
  grid.training_pct = {5, 10, 20, 25, 33, 50, 80};
  return grid;
}

namespace {

struct GraphCache {
  std::map<std::size_t, WeightedGraph> graphs;
  std::map<std::size_t, std::string> errors;
};

GraphCache BuildGraphs(const Eigen::MatrixXd& points, const std::vector<std::size_t>& k_list,
                       const std::optional<EpsilonMode>& eps_mode) {
  GraphCache cache;
  for (std::size_t k : k_list) {
    if (cache.graphs.contains(k) || cache.errors.contains(k)) continue;
    try {
      const EpsilonMode eps = eps_mode ? *eps_mode : EpsilonMode{SelfTuningEpsilon{k}};
      cache.graphs.emplace(k, KnnGraph(points, k, eps));
    } catch (const Error& e) {
      cache.errors.emplace(k, e.what());
    }
  }
  return cache;
}

}  // namespace

SweepResult Sweep(const FeatureTable& table, const std::string& target,
                  const SweepGrid& grid, const SweepOptions& options) {
  if (grid.p.empty() || grid.k.empty() || grid.training_pct.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sweep grid has an empty axis");
  }
  for (double p : grid.p) AlphaOfP(p);
  const Eigen::VectorXd& y = table.target(target);
  RequireComplete(SelectedFeatures(table, options.features), y);
  const GraphCache cache =
      BuildGraphs(GraphPoints(table, options.features), grid.k, options.eps_mode);

  SweepResult result;
  for (double pct : grid.training_pct) {
    const FoldSpec folds = FoldSpecForTrainingPct(pct);
    SweepOptimum best;
    best.training_pct = pct;
    for (double p : grid.p) {
      for (std::size_t k : grid.k) {
        SolverConfig cfg = options.solver;
        cfg.p = p;
        EvalReport report;
        if (const auto it = cache.graphs.find(k); it != cache.graphs.end()) {
          try {
            report = RunPlaplaceEvalOnGraph(it->second, y, cfg, folds, options.settings);
          } catch (const Error& e) {
            report.error = e.what();
          }
        } else {
          report.error = cache.errors.at(k);
        }
        report.model = "plaplace";
        report.target = target;
        report.dataset = options.dataset;
        report.params.p = p;
        report.params.k = k;
        report.params.eps_mode = DescribeEpsilon(
            options.eps_mode ? *options.eps_mode : EpsilonMode{SelfTuningEpsilon{k}});
        report.training_pct = pct;
        report.folds = folds;
        report.repeats = options.settings.repeats;
        Summarize(report);

        if (report.valid() && (!best.report || report.rmse_mean < best.rmse_mean)) {
          best.report = result.reports.size();
          best.best_p = p;
          best.best_k = k;
          best.rmse_mean = report.rmse_mean;
        }
        result.reports.push_back(std::move(report));
      }
    }
    if (!best.report) best.rmse_mean = std::nan("");
    result.optima.push_back(best);
  }
  return result;
}

std::vector<double> AsymptoticOptions::DefaultPList() {
  return {2, 3, 4, 5, 6, 8, 10, 15, 20, 30, 50, 100, 200, 500, 1000, kInfiniteP};
}

AsymptoticResult AsymptoticStudy(const FeatureTable& table, const std::string& target,
                                 const AsymptoticOptions& options) {
  const std::vector<double> p_list =
      options.p_list.empty() ? AsymptoticOptions::DefaultPList() : options.p_list;
  if (p_list.size() < 2 || !std::isinf(p_list.back()) ||
      !std::is_sorted(p_list.begin(), p_list.end()) ||
      std::adjacent_find(p_list.begin(), p_list.end()) != p_list.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "asymptotic p list must be strictly ascending with at least one finite "
                "value and end with inf");
  }
  for (double p : p_list) AlphaOfP(p);
  if (options.k_list.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "asymptotic study needs at least one k");
  }
  const Eigen::VectorXd& y = table.target(target);
  RequireComplete(SelectedFeatures(table, options.sweep.features), y);
  const Eigen::MatrixXd points = GraphPoints(table, options.sweep.features);
  const FoldSpec folds = FoldSpecForTrainingPct(options.training_pct);
  const std::size_t n = table.rows();
  const std::size_t last_finite = p_list.size() - 2;

  AsymptoticResult result;
  result.training_pct = options.training_pct;
  result.tolerance = options.tolerance;
  for (std::size_t k : options.k_list) {
    const EpsilonMode eps =
        options.sweep.eps_mode ? *options.sweep.eps_mode : EpsilonMode{SelfTuningEpsilon{k}};
    const WeightedGraph graph = KnnGraph(points, k, eps);

    // One report per p accumulates that p's fold outcomes.
    std::vector<EvalReport> per_p(p_list.size());
    AsymptoticSeries series;
    series.k = k;
    for (std::size_t r = 0; r < options.sweep.settings.repeats; ++r) {
      const FoldPlan plan = PlanForRepeat(n, folds, options.sweep.settings, r);
      for (std::size_t f = 0; f < plan.rotations(); ++f) {
        const auto train = plan.train_rows(f);
        const auto test = plan.test_rows(f);
        try {
          const ScaledLabels scaled = MakeScaledLabels(n, y, train);
          const std::vector<Solution> sols =
              SolveSweepP(graph, scaled.labels, options.sweep.solver, p_list);
          for (std::size_t i = 0; i < sols.size(); ++i) {
            FoldOutcome outcome;
            outcome.repeat = r;
            outcome.fold = f;
            outcome.converged = sols[i].converged;
            outcome.iterations = sols[i].iterations;
            outcome.rmse = ScoreSolution(sols[i].u, scaled, y, test);
            per_p[i].entries.push_back(outcome);
          }
          double gap = 0.0;
          for (std::size_t x = 0; x < n; ++x) {
            gap = std::max(gap, std::abs(sols[last_finite].u[x] - sols.back().u[x]));
          }
          series.max_solution_gap = std::max(series.max_solution_gap, gap);
        } catch (const Error&) {
          ++series.failed_folds;
        }
      }
    }
    for (std::size_t i = 0; i < p_list.size(); ++i) {
      Summarize(per_p[i]);
      series.points.push_back(
          {p_list[i], per_p[i].rmse_mean, per_p[i].rmse_std, per_p[i].nonconverged_count});
    }
    series.rmse_gap =
        std::abs(series.points[last_finite].rmse_mean - series.points.back().rmse_mean);
    series.within_tolerance = series.failed_folds == 0 && series.rmse_gap <= options.tolerance;
    result.series.push_back(std::move(series));
  }
  return result;
}

}  // namespace plapreg
