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
#include "plapreg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "json.hpp"
#include "plapreg/error.hpp"
#include "plapreg/log.hpp"
#include "plapreg/text.hpp"

namespace plapreg {
namespace {

constexpr double kConditionWarning = 1e12;

void CheckDegree(int degree) {
  if (degree < 1 || degree > 3) {
    throw Error(ErrorCode::kUnsupportedDegree,
                "polynomial degree must be 1, 2 or 3, got " + std::to_string(degree));
  }
}

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

std::size_t ExpandedDimension(std::size_t m, int degree) {
  CheckDegree(degree);
  // sum_{d=1..degree} C(m + d - 1, d)
  std::size_t total = 0;
  std::size_t term = 1;
  for (int d = 1; d <= degree; ++d) {
    term = term * (m + static_cast<std::size_t>(d) - 1) / static_cast<std::size_t>(d);
    total += term;
  }
  return total;
}

Eigen::MatrixXd PolynomialExpand(const Eigen::MatrixXd& x, int degree) {
  const auto m = static_cast<std::size_t>(x.cols());
  const auto dim = static_cast<Eigen::Index>(ExpandedDimension(m, degree));
  Eigen::MatrixXd out(x.rows(), dim);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) out.col(col++) = x.col(i);
  if (degree >= 2) {
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      for (Eigen::Index j = i; j < x.cols(); ++j) {
        out.col(col++) = x.col(i).cwiseProduct(x.col(j));
      }
    }
  }
  if (degree >= 3) {
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      for (Eigen::Index j = i; j < x.cols(); ++j) {
        const Eigen::VectorXd ij = x.col(i).cwiseProduct(x.col(j));
        for (Eigen::Index l = j; l < x.cols(); ++l) {
          out.col(col++) = ij.cwiseProduct(x.col(l));
        }
      }
    }
  }
  return out;
}

Eigen::VectorXd PolynomialExpand(const Eigen::VectorXd& x, int degree) {
  return PolynomialExpand(Eigen::MatrixXd(x.transpose()), degree).row(0).transpose();
}

RidgeModel RidgeFit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda,
                    int degree) {
  CheckDegree(degree);
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "design has " + std::to_string(x.rows()) + " rows, target has " +
                    std::to_string(y.size()));
  }
  if (x.rows() < 1) throw Error(ErrorCode::kInvalidArgument, "ridge needs at least one row");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be a nonnegative finite value");
  }

  const Eigen::MatrixXd expanded = PolynomialExpand(x, degree);
  const Eigen::Index rows = expanded.rows();
  const Eigen::RowVectorXd mean = expanded.colwise().mean();
  const Eigen::RowVectorXd sd =
      ((expanded.rowwise() - mean).array().square().colwise().sum() /
       static_cast<double>(rows))
          .sqrt();

  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < expanded.cols(); ++j) {
    if (sd[j] > 0.0) active.push_back(j);
  }
  const auto dim = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd z(rows, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    const Eigen::Index j = active[static_cast<std::size_t>(a)];
    z.col(a) = (expanded.col(j).array() - mean[j]) / sd[j];
  }
  const double y_mean = y.mean();
  const Eigen::VectorXd centered = y.array() - y_mean;

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(dim);
  if (dim > 0) {
    const bool primal = dim < rows;
    if (lambda == 0.0 && !primal) {
      throw Error(ErrorCode::kSingularNormalMatrix,
                  "lambda = 0 with " + std::to_string(dim) + " varying features and only " +
                      std::to_string(rows) + " rows");
    }
    Eigen::MatrixXd gram = primal ? Eigen::MatrixXd(z.transpose() * z)
                                  : Eigen::MatrixXd(z * z.transpose());
    gram.diagonal().array() += lambda;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
    double rcond = 0.0;
    if (ldlt.info() == Eigen::Success) {
      // The pivot ratio catches exact zero pivots, which LDLT's estimate skips.
      const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
      rcond = std::min(ldlt.rcond(), pivots.minCoeff() / pivots.maxCoeff());
    }
    if (!(rcond > static_cast<double>(gram.rows()) *
                      std::numeric_limits<double>::epsilon()) ||
        !ldlt.isPositive()) {
      throw Error(ErrorCode::kSingularNormalMatrix,
                  "normal matrix is numerically singular (rcond " + FormatDouble(rcond) +
                      ")");
    }
    if (1.0 / rcond > kConditionWarning) {
      log::Warn("ridge: normal matrix condition estimate " + FormatDouble(1.0 / rcond) +
                " exceeds 1e12");
    }
    if (primal) {
      beta = ldlt.solve(z.transpose() * centered);
    } else {
      beta = z.transpose() * ldlt.solve(centered);
    }
  }

  RidgeModel model;
  model.degree = degree;
  model.lambda = lambda;
  model.input_dim = x.cols();
  model.coefficients = Eigen::VectorXd::Zero(expanded.cols());
  model.intercept = y_mean;
  for (Eigen::Index a = 0; a < dim; ++a) {
    const Eigen::Index j = active[static_cast<std::size_t>(a)];
    model.coefficients[j] = beta[a] / sd[j];
    model.intercept -= model.coefficients[j] * mean[j];
  }
  return model;
}

LssvrModel LssvrFit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double gamma,
                    double c) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "design has " + std::to_string(x.rows()) + " rows, target has " +
                    std::to_string(y.size()));
  }
  if (x.rows() < 1) throw Error(ErrorCode::kInvalidArgument, "LSSVR needs at least one row");
  if (!(gamma > 0.0) || !(c > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "LSSVR gamma and c must be positive");
  }
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd kernel(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    kernel(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = std::exp(-gamma * (x.row(i) - x.row(j)).squaredNorm());
      kernel(i, j) = v;
      kernel(j, i) = v;
    }
  }
  Eigen::MatrixXd h = kernel;
  h.diagonal().array() += 1.0 / c;

  const Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularKernelSystem, "K + I/c is not positive definite");
  }
  const Eigen::VectorXd eta = llt.solve(Eigen::VectorXd::Ones(n));
  const Eigen::VectorXd nu = llt.solve(y);
  const double s = eta.sum();
  if (!(std::abs(s) > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::kSingularKernelSystem, "degenerate LSSVR bias equation");
  }

  LssvrModel model;
  model.gamma = gamma;
  model.c = c;
  model.bias = nu.sum() / s;
  model.dual_coefficients = nu - model.bias * eta;
  model.training_points = x;

  const double residual = std::max(
      std::abs(model.dual_coefficients.sum()),
      (h * model.dual_coefficients + Eigen::VectorXd::Constant(n, model.bias) - y)
          .lpNorm<Eigen::Infinity>());
  const double scale = 1.0 + y.lpNorm<Eigen::Infinity>();
  if (!std::isfinite(residual) || residual > 1e-6 * scale) {
    throw Error(ErrorCode::kSingularKernelSystem,
                "LSSVR system residual " + FormatDouble(residual) + " is too large");
  }
  return model;
}

Eigen::VectorXd Predict(const RidgeModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.input_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model expects " + std::to_string(model.input_dim) + " features, got " +
                    std::to_string(x.cols()));
  }
  if (x.rows() == 0) return Eigen::VectorXd(0);
  return (PolynomialExpand(x, model.degree) * model.coefficients).array() +
         model.intercept;
}

Eigen::VectorXd Predict(const LssvrModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.training_points.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model expects " + std::to_string(model.training_points.cols()) +
                    " features, got " + std::to_string(x.cols()));
  }
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    double sum = model.bias;
    for (Eigen::Index i = 0; i < model.training_points.rows(); ++i) {
      sum += model.dual_coefficients[i] *
             std::exp(-model.gamma * (x.row(r) - model.training_points.row(i)).squaredNorm());
    }
    out[r] = sum;
  }
  return out;
}

std::vector<LssvrSpec> DefaultLssvrGrid() {
  std::vector<LssvrSpec> grid;
  for (double c : {10.0, 25.0, 100.0, 250.0, 500.0, 1000.0}) {
    for (double gamma : {0.001, 0.01}) grid.push_back({gamma, c});
  }
  return grid;
}

std::string ModelToJson(const RidgeModel& model) {
  nlohmann::ordered_json doc;
  doc["kind"] = model.degree == 1 ? "ridge" : "polyridge";
  doc["degree"] = model.degree;
  doc["lambda"] = model.lambda;
  doc["input_dim"] = model.input_dim;
  doc["intercept"] = model.intercept;
  doc["coefficients"] = ToStd(model.coefficients);
  return doc.dump(2) + "\n";
}

std::string ModelToJson(const LssvrModel& model) {
  nlohmann::ordered_json doc;
  doc["kind"] = "lssvr";
  doc["gamma"] = model.gamma;
  doc["c"] = model.c;
  doc["bias"] = model.bias;
  doc["dual_coefficients"] = ToStd(model.dual_coefficients);
  return doc.dump(2) + "\n";
}

}  // namespace plapreg
