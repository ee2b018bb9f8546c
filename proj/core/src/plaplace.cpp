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
#include "plapreg/plaplace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "json.hpp"
#include "plapreg/error.hpp"
#include "plapreg/text.hpp"

namespace plapreg {

double AlphaOfP(double p) {
  if (!(p >= 2.0)) {
    throw Error(ErrorCode::kPOutOfRange, "p must lie in [2, inf], got " + FormatDouble(p));
  }
  if (std::isinf(p)) return 0.0;
  return 1.0 / (p - 1.0);
}

LabelAssignment LabelAssignment::Make(std::size_t n, std::vector<VertexId> labeled,
                                      std::vector<double> values) {
  if (labeled.size() != values.size()) {
    throw Error(ErrorCode::kInvalidArgument, "labeled ids and values differ in length");
  }
  if (labeled.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one labeled vertex is required");
  }
  std::vector<std::size_t> order(labeled.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return labeled[a] < labeled[b]; });
  LabelAssignment out;
  out.n = n;
  out.labeled.reserve(labeled.size());
  out.values.reserve(values.size());
  for (std::size_t i : order) {
    if (labeled[i] >= n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "labeled vertex " + std::to_string(labeled[i]) + " out of range");
    }
    if (!out.labeled.empty() && out.labeled.back() == labeled[i]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "vertex " + std::to_string(labeled[i]) + " labeled twice");
    }
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label for vertex " + std::to_string(labeled[i]) + " is not finite");
    }
    out.labeled.push_back(labeled[i]);
    out.values.push_back(values[i]);
  }
  return out;
}

double LabelAssignment::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double LabelAssignment::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

double LabelAssignment::mean_value() const {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

void SolverConfig::validate() const {
  AlphaOfP(p);
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tol must be positive");
  }
}

double DppUpdate(const WeightedGraph& graph, std::span<const double> u,
                 std::size_t x, double alpha) {
  const auto nbrs = graph.neighbors(x);
  if (nbrs.empty()) {
    throw Error(ErrorCode::kIsolatedVertex,
                "vertex " + std::to_string(x) + " has no neighbors");
  }
  // alpha == 1 and alpha == 0 skip the term whose coefficient vanishes.
  double weighted = 0.0;
  if (alpha > 0.0) {
    for (const Neighbor& nb : nbrs) weighted += nb.weight * u[nb.id];
    if (alpha == 1.0) return weighted / graph.degree(x);
  }
  double lo = u[nbrs.front().id];
  double hi = lo;
  for (const Neighbor& nb : nbrs) {
    lo = std::min(lo, u[nb.id]);
    hi = std::max(hi, u[nb.id]);
  }
  const double midpoint_term = 0.5 * (1.0 - alpha) * (lo + hi);
  if (alpha == 0.0) return midpoint_term;
  return alpha / graph.degree(x) * weighted + midpoint_term;
}

namespace {

void CheckSizes(const WeightedGraph& graph, const LabelAssignment& labels) {
  if (graph.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "graph has no vertices");
  }
  if (labels.n != graph.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "labels cover " + std::to_string(labels.n) + " vertices, graph has " +
                    std::to_string(graph.size()));
  }
}

std::vector<bool> LabeledMask(const LabelAssignment& labels) {
  std::vector<bool> mask(labels.n, false);
  for (VertexId x : labels.labeled) mask[x] = true;
  return mask;
}

}  // namespace

Solution Solve(const WeightedGraph& graph, const LabelAssignment& labels,
               const SolverConfig& cfg) {
  cfg.validate();
  CheckSizes(graph, labels);
  AssertLabelsCoverComponents(graph, labels.labeled);
  const double alpha = AlphaOfP(cfg.p);
  const std::size_t n = graph.size();

  Solution sol;
  sol.p = cfg.p;
  switch (cfg.init) {
    case InitMode::kLabelMean:
      sol.u.assign(n, labels.mean_value());
      break;
    case InitMode::kZero:
      sol.u.assign(n, 0.0);
      break;
    case InitMode::kCustom:
      if (cfg.custom_init.size() != n) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "custom initial vector has length " +
                        std::to_string(cfg.custom_init.size()) + ", expected " +
                        std::to_string(n));
      }
      sol.u = cfg.custom_init;
      break;
  }
  for (std::size_t i = 0; i < labels.labeled.size(); ++i) {
    sol.u[labels.labeled[i]] = labels.values[i];
  }

  const std::vector<bool> is_labeled = LabeledMask(labels);
  std::vector<VertexId> free_vertices;
  free_vertices.reserve(n - labels.labeled.size());
  for (std::size_t x = 0; x < n; ++x) {
    if (!is_labeled[x]) free_vertices.push_back(static_cast<VertexId>(x));
  }
  if (free_vertices.empty()) {
    sol.converged = true;
    return sol;
  }

  // A small sweep change alone certifies little when the iteration contracts
  // slowly, so convergence also requires the geometric tail estimate
  // change * rho / (1 - rho) to be within tol. rho is the largest ratio of
  // successive changes over the last kRateWindow sweeps.
  constexpr std::size_t kRateWindow = 3;
  std::vector<double> recent;
  while (sol.iterations < cfg.max_iter) {
    ++sol.iterations;
    double change = 0.0;
    for (VertexId x : free_vertices) {
      const double next = DppUpdate(graph, sol.u, x, alpha);
      change = std::max(change, std::abs(next - sol.u[x]));
      sol.u[x] = next;
    }
    sol.residual = change;
    recent.push_back(change);
    if (recent.size() > kRateWindow + 1) recent.erase(recent.begin());
    if (change > cfg.tol) continue;
    if (change == 0.0) {
      sol.converged = true;
      break;
    }
    if (recent.size() < 2) continue;
    double rho = 0.0;
    for (std::size_t i = 1; i < recent.size(); ++i) {
      rho = std::max(rho, recent[i] / recent[i - 1]);
    }
    if (rho < 1.0 && change * rho <= cfg.tol * (1.0 - rho)) {
      sol.converged = true;
      break;
    }
  }
  return sol;
}

Solution SolveP2Direct(const WeightedGraph& graph, const LabelAssignment& labels) {
  CheckSizes(graph, labels);
  AssertLabelsCoverComponents(graph, labels.labeled);
  const std::size_t n = graph.size();
  const std::vector<bool> is_labeled = LabeledMask(labels);

  std::vector<double> boundary(n, 0.0);
  for (std::size_t i = 0; i < labels.labeled.size(); ++i) {
    boundary[labels.labeled[i]] = labels.values[i];
  }
  constexpr auto kNone = static_cast<Eigen::Index>(-1);
  std::vector<Eigen::Index> slot(n, kNone);
  Eigen::Index unknowns = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (!is_labeled[x]) slot[x] = unknowns++;
  }

  Solution sol;
  sol.p = 2.0;
  sol.u = boundary;
  sol.converged = true;
  if (unknowns == 0) return sol;

  // (D - W) restricted to unlabeled vertices; labeled neighbors move to the
  // right-hand side.
  Eigen::MatrixXd system = Eigen::MatrixXd::Zero(unknowns, unknowns);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(unknowns);
  for (std::size_t x = 0; x < n; ++x) {
    if (is_labeled[x]) continue;
    const Eigen::Index i = slot[x];
    system(i, i) = graph.degree(x);
    for (const Neighbor& nb : graph.neighbors(x)) {
      if (is_labeled[nb.id]) {
        rhs[i] += nb.weight * boundary[nb.id];
      } else {
        system(i, slot[nb.id]) -= nb.weight;
      }
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularSystem,
                "harmonic system is not positive definite");
  }
  const Eigen::VectorXd solved = llt.solve(rhs);
  if (!solved.allFinite()) {
    throw Error(ErrorCode::kSingularSystem, "harmonic solve produced non-finite values");
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!is_labeled[x]) sol.u[x] = solved[slot[x]];
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!is_labeled[x]) {
      sol.residual =
          std::max(sol.residual, std::abs(DppUpdate(graph, sol.u, x, 1.0) - sol.u[x]));
    }
  }
  return sol;
}

std::vector<Solution> SolveSweepP(const WeightedGraph& graph,
                                  const LabelAssignment& labels,
                                  const SolverConfig& cfg,
                                  std::span<const double> p_list) {
  for (double p : p_list) AlphaOfP(p);
  std::vector<Solution> out;
  out.reserve(p_list.size());
  SolverConfig step = cfg;
  for (double p : p_list) {
    step.p = p;
    out.push_back(Solve(graph, labels, step));
    step.init = InitMode::kCustom;
    step.custom_init = out.back().u;
  }
  return out;
}

std::string SolutionToJson(const Solution& solution) {
  nlohmann::ordered_json doc;
  if (std::isinf(solution.p)) {
    doc["p"] = "inf";
  } else {
    doc["p"] = solution.p;
  }
  doc["iterations"] = solution.iterations;
  doc["residual"] = solution.residual;
  doc["converged"] = solution.converged;
  doc["u"] = solution.u;
  return doc.dump() + "\n";
}

}  // namespace plapreg
