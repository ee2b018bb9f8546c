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
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace plapreg {

// Number of monomials of total degree 1..degree in m variables,
// C(m + degree, degree) - 1.
std::size_t ExpandedDimension(std::size_t m, int degree);

// All monomials of total degree 1..degree in graded lexicographic order:
// x_i, then x_i x_j (i <= j), then x_i x_j x_l (i <= j <= l). The constant
// term is left to the intercept. Throws UnsupportedDegree unless degree is
// 1, 2 or 3.
Eigen::MatrixXd PolynomialExpand(const Eigen::MatrixXd& x, int degree);
Eigen::VectorXd PolynomialExpand(const Eigen::VectorXd& x, int degree);

struct RidgeModel {
  // Coefficients over the raw expanded features; the per-column
  // standardization used during fitting is folded in.
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  int degree = 1;
  double lambda = 0.0;
  Eigen::Index input_dim = 0;
};

struct LssvrModel {
  Eigen::VectorXd dual_coefficients;
  double bias = 0.0;
  double gamma = 1.0;
  double c = 1.0;
  Eigen::MatrixXd training_points;
};

// Minimizes ||y - Z beta - b||^2 + lambda ||beta||^2 where Z is the
// expanded then per-column standardized design; the intercept is not
// penalized and constant columns get a zero coefficient. Solves the D x D
// normal equations when D <= rows, otherwise the rows x rows dual system.
// Throws SingularNormalMatrix for lambda = 0 with a rank-deficient design.
RidgeModel RidgeFit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                    int degree);

// Least-squares SVR with K_ij = exp(-gamma ||x_i - x_j||^2):
//   [0  1^T        ] [b]   [0]
//   [1  K + I / c  ] [a] = [y]
// Solved through the Cholesky factor of K + I/c. Throws
// SingularKernelSystem when that factorization or the residual check fails.
LssvrModel LssvrFit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double gamma,
                    double c);

// Throw DimensionMismatch when the column count differs from training.
Eigen::VectorXd Predict(const RidgeModel& model, const Eigen::MatrixXd& x);
Eigen::VectorXd Predict(const LssvrModel& model, const Eigen::MatrixXd& x);

struct RidgeSpec {
  double lambda = 1.0;
  int degree = 1;
};

struct LssvrSpec {
  double gamma = 0.01;
  double c = 100.0;
};

using ModelSpec = std::variant<RidgeSpec, LssvrSpec>;

// c in {10, 25, 100, 250, 500, 1000} x gamma in {0.001, 0.01}.
std::vector<LssvrSpec> DefaultLssvrGrid();

std::string ModelToJson(const RidgeModel& model);
std::string ModelToJson(const LssvrModel& model);

}  // namespace plapreg
