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
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "plapreg/baselines.hpp"
#include "plapreg/dataio.hpp"
#include "plapreg/graph.hpp"
#include "plapreg/plaplace.hpp"

namespace plapreg {

// 100 * rms(pred - true) / rms(true), both over the same rows.
// Throws LengthMismatch (including empty input) or ZeroDenominator.
double RmsePercent(std::span<const double> y_true, std::span<const double> y_pred);
double RmsePercent(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

enum class FoldMode {
  kStandard,  // train on k - 1 folds, test on the remaining one
  kModified,  // train on one fold, test on the other k - 1
};

std::string FoldModeName(FoldMode mode);

struct FoldPlan {
  std::size_t k = 0;
  FoldMode mode = FoldMode::kStandard;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> assignments;  // fold id per row

  std::size_t rotations() const { return k; }
  std::vector<std::size_t> fold_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t rotation) const;
  std::vector<std::size_t> test_rows(std::size_t rotation) const;
};

// Uniform random permutation of 0..n-1 from the seed, cut into k blocks whose
// sizes differ by at most one (the first n % k blocks get the extra row).
// Throws KOutOfRange unless 2 <= k <= n.
FoldPlan MakeFolds(std::size_t n, std::size_t k, FoldMode mode, std::uint64_t seed);

struct FoldSpec {
  std::size_t k = 5;
  FoldMode mode = FoldMode::kStandard;
};

// Training% -> fold scheme: pct <= 50 uses Modified with k = round(100/pct)
// (5 -> 20, 10 -> 10, 20 -> 5, 25 -> 4, 33 -> 3, 50 -> 2); pct > 50 uses
// Standard with k = round(100/(100 - pct)) (80 -> 5).
FoldSpec FoldSpecForTrainingPct(double training_pct);
double TrainingPct(const FoldSpec& spec);

struct EvalSettings {
  std::size_t repeats = 10;
  std::uint64_t master_seed = 0;
};

struct GraphConfig {
  std::size_t k = 10;
  // nullopt selects self-tuning with k_scale = k.
  std::optional<EpsilonMode> eps_mode;
  // Feature subset; empty means every feature column.
  std::vector<std::string> features;

  EpsilonMode resolved_eps() const {
    return eps_mode ? *eps_mode : EpsilonMode{SelfTuningEpsilon{k}};
  }
};

struct FoldOutcome {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  std::optional<double> rmse;  // empty when the fold failed
  bool converged = true;
  std::size_t iterations = 0;
  std::string error;
};

struct ModelParams {
  std::optional<double> p;
  std::optional<std::size_t> k;
  std::optional<double> gamma;
  std::optional<double> c;
  std::optional<double> lambda;
  std::optional<int> degree;
  std::string eps_mode;
};

struct EvalReport {
  std::string target;
  std::string dataset;
  std::string model;  // plaplace | ridge | polyridge | lssvr
  ModelParams params;
  double training_pct = 0.0;
  FoldSpec folds;
  std::size_t repeats = 0;
  std::vector<FoldOutcome> entries;  // repeat-major, then fold
  double rmse_mean = 0.0;            // over successful entries
  double rmse_std = 0.0;             // population standard deviation
  std::size_t nonconverged_count = 0;
  std::size_t failed_count = 0;
  std::string error;  // set when the whole cell could not run

  std::vector<double> rmse_values() const;
  // A cell is valid when it ran and every fold produced an RMSE.
  bool valid() const { return error.empty() && failed_count == 0 && !entries.empty(); }
};

// Recomputes mean/std/counts from entries.
void Summarize(EvalReport& report);

// Transductive p-Laplacian evaluation. Features (optionally a subset) are
// z-scored over all rows and one graph is built. For every repeat r a fold
// plan is drawn from DeriveSeed(master_seed, kRepeatStream, r); each
// rotation labels the training rows (targets standardized by the training
// mean/sd), solves, and scores the test rows in original units. Fold
// failures such as ComponentWithoutLabel are recorded, not thrown.
EvalReport RunPlaplaceEval(const FeatureTable& table, const std::string& target,
                           const GraphConfig& graph_cfg, const SolverConfig& solver_cfg,
                           const FoldSpec& folds, const EvalSettings& settings,
                           const std::string& dataset = "combined");

// Same solve loop against a prebuilt graph over the table's rows.
EvalReport RunPlaplaceEvalOnGraph(const WeightedGraph& graph, const Eigen::VectorXd& y,
                                  const SolverConfig& solver_cfg, const FoldSpec& folds,
                                  const EvalSettings& settings);

// Supervised evaluation: per rotation, z-score fit on the training rows,
// fit the model, predict the test rows, score. Fit errors are recorded.
EvalReport RunBaselineEval(const FeatureTable& table, const std::string& target,
                           const ModelSpec& model, const FoldSpec& folds,
                           const EvalSettings& settings,
                           const std::vector<std::string>& features = {},
                           const std::string& dataset = "combined");

struct SweepGrid {
  std::vector<double> p;
  std::vector<std::size_t> k;
  std::vector<double> training_pct;

  // p in {2, 2.5, ..., 10}, k in {10, 15, ..., 60},
  // training_pct in {5, 10, 20, 25, 33, 50, 80}.
  static SweepGrid Default();
};

struct SweepOptimum {
  double training_pct = 0.0;
  std::optional<std::size_t> report;  // index into SweepResult::reports
  double best_p = 0.0;
  std::size_t best_k = 0;
  double rmse_mean = 0.0;
};

struct SweepResult {
  std::vector<EvalReport> reports;  // training_pct, then p, then k
  std::vector<SweepOptimum> optima;  // one per training_pct
};

struct SweepOptions {
  std::optional<EpsilonMode> eps_mode;  // nullopt: self-tuning at each k
  std::vector<std::string> features;
  SolverConfig solver;
  EvalSettings settings;
  std::string dataset = "combined";
};

// Every (training_pct, p, k) cell evaluated with the same fold plans per
// training_pct. The optimum per training_pct is the lowest-RMSE valid cell,
// ties going to the earlier cell (lower p, then lower k).
SweepResult Sweep(const FeatureTable& table, const std::string& target,
                  const SweepGrid& grid, const SweepOptions& options);

struct AsymptoticPoint {
  double p = 2.0;
  double rmse_mean = 0.0;
  double rmse_std = 0.0;
  std::size_t nonconverged_count = 0;
};

struct AsymptoticSeries {
  std::size_t k = 0;
  std::vector<AsymptoticPoint> points;
  // |RMSE(last finite p) - RMSE(inf)| in percentage points.
  double rmse_gap = 0.0;
  // max over folds of ||u_last_finite - u_inf||_inf, in standardized
  // target units.
  double max_solution_gap = 0.0;
  bool within_tolerance = false;
  std::size_t failed_folds = 0;
};

struct AsymptoticResult {
  double training_pct = 20.0;
  double tolerance = 0.5;
  std::vector<AsymptoticSeries> series;
};

struct AsymptoticOptions {
  std::vector<std::size_t> k_list{10, 30, 50};
  std::vector<double> p_list;  // ascending, last entry inf; empty -> default
  double training_pct = 20.0;
  double tolerance = 0.5;
  SweepOptions sweep;

  static std::vector<double> DefaultPList();
};

// Per k and fold, solves the whole p_list with warm starts and aggregates
// RMSE per p. Throws InvalidArgument if p_list is not ascending or does not
// end with inf.
AsymptoticResult AsymptoticStudy(const FeatureTable& table, const std::string& target,
                                 const AsymptoticOptions& options);

}  // namespace plapreg
