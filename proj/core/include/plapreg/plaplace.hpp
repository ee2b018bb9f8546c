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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "plapreg/graph.hpp"

namespace plapreg {

// p ranges over [2, inf]; infinity is the pure tug-of-war (midpoint) limit.
inline constexpr double kInfiniteP = std::numeric_limits<double>::infinity();

// 1 / (p - 1), with p = inf mapped to exactly 0. Throws POutOfRange.
double AlphaOfP(double p);

// The labeled set and its known values. Ids are sorted and unique.
struct LabelAssignment {
  std::size_t n = 0;
  std::vector<VertexId> labeled;
  std::vector<double> values;  // parallel to labeled

  // Sorts by vertex id; throws InvalidArgument on an empty set, duplicate or
  // out-of-range ids, or non-finite values.
  static LabelAssignment Make(std::size_t n, std::vector<VertexId> labeled,
                              std::vector<double> values);

  double min_value() const;
  double max_value() const;
  double mean_value() const;
};

enum class InitMode { kLabelMean, kZero, kCustom };

struct SolverConfig {
  double p = 2.0;
  double tol = 1e-6;
  std::size_t max_iter = 100000;
  InitMode init = InitMode::kLabelMean;
  std::vector<double> custom_init;  // length n when init == kCustom

  // Throws POutOfRange / InvalidArgument.
  void validate() const;
};

struct Solution {
  double p = 2.0;
  std::vector<double> u;
  std::size_t iterations = 0;
  double residual = 0.0;  // max |change| of the last sweep
  bool converged = false;
};

// One tug-of-war dynamic programming step at x:
//   alpha / d_x * sum_y w_xy u(y) + (1 - alpha) / 2 * (min_N u + max_N u)
// Throws IsolatedVertex when x has no neighbors.
double DppUpdate(const WeightedGraph& graph, std::span<const double> u,
                 std::size_t x, double alpha);

// Gauss-Seidel sweeps of DppUpdate over unlabeled vertices in ascending id
// order until the largest change in a sweep is <= tol and the estimated
// remaining error (from the observed contraction rate) is <= tol, or until
// max_iter sweeps have run. Not converging is reported in the Solution, not thrown. Throws
// ComponentWithoutLabel when some component has no labeled vertex.
Solution Solve(const WeightedGraph& graph, const LabelAssignment& labels,
               const SolverConfig& cfg);

// p = 2 reference: dense Cholesky solve of the random-walk harmonic system
// with labeled values as boundary data. Throws SingularSystem.
Solution SolveP2Direct(const WeightedGraph& graph, const LabelAssignment& labels);

// One Solve per entry of p_list, each warm-started from the previous
// entry's solution.
std::vector<Solution> SolveSweepP(const WeightedGraph& graph,
                                  const LabelAssignment& labels,
                                  const SolverConfig& cfg,
                                  std::span<const double> p_list);

// {"p": ..., "iterations": ..., "residual": ..., "converged": ..., "u": [...]}
// with p = inf written as the string "inf".
std::string SolutionToJson(const Solution& solution);

}  // namespace plapreg
