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
#include "plapreg/synth.hpp"

#include <cmath>
#include <numbers>

#include "plapreg/error.hpp"
#include "plapreg/rng.hpp"

namespace plapreg {

void SynthSpec::validate() const {
  if (n == 0 || dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic spec needs n >= 1 and dim >= 1");
  }
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_sd must be a nonnegative finite value");
  }
  if (const auto* blobs = std::get_if<GaussianBlobs>(&structure)) {
    if (!(blobs->spread >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "blob spread must be nonnegative");
    }
    for (const auto& c : blobs->centers) {
      if (c.size() != dim) {
        throw Error(ErrorCode::kInvalidArgument, "blob center dimension differs from dim");
      }
    }
  } else if (!(std::get<ManifoldCurve>(structure).ambient_noise >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "curve noise must be nonnegative");
  }
  if (const auto* lin = std::get_if<LinearCombo>(&target_fn)) {
    if (!lin->weights.empty() && lin->weights.size() != dim) {
      throw Error(ErrorCode::kInvalidArgument, "linear weight count differs from dim");
    }
  }
}

GaussianBlobs TwoBlobs(std::size_t dim, double separation, double spread) {
  GaussianBlobs blobs;
  blobs.spread = spread;
  blobs.centers.assign(2, std::vector<double>(dim, 0.0));
  blobs.centers[1][0] = separation;
  return blobs;
}

FeatureTable Generate(const SynthSpec& spec) {
  spec.validate();
  Rng rng(DeriveSeed(spec.seed, kSynthStream, 0));
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto dim = static_cast<Eigen::Index>(spec.dim);

  FeatureTable table;
  for (Eigen::Index j = 0; j < dim; ++j) table.feature_names.push_back("x" + std::to_string(j));
  table.features.resize(n, dim);
  TargetColumn target{kSynthTarget, Eigen::VectorXd(n)};
  CategoricalColumn gender{kSynthGender, {}};
  gender.values.reserve(spec.n);

  for (Eigen::Index i = 0; i < n; ++i) {
    if (const auto* blobs = std::get_if<GaussianBlobs>(&spec.structure)) {
      const std::size_t count = blobs->centers.empty() ? 1 : blobs->centers.size();
      const auto which = static_cast<std::size_t>(rng.Below(count));
      for (Eigen::Index j = 0; j < dim; ++j) {
        const double center =
            blobs->centers.empty() ? 0.0 : blobs->centers[which][static_cast<std::size_t>(j)];
        table.features(i, j) = center + blobs->spread * rng.Normal();
      }
    } else {
      const double noise = std::get<ManifoldCurve>(spec.structure).ambient_noise;
      const double t = rng.Uniform();
      for (Eigen::Index j = 0; j < dim; ++j) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(j + 1) * t +
                             static_cast<double>(j);
        table.features(i, j) = std::sin(phase) + noise * rng.Normal();
      }
    }
    gender.values.emplace_back(rng.Uniform() < 0.5 ? "M" : "F");

    const auto x = table.features.row(i);
    double value = 0.0;
    if (const auto* lin = std::get_if<LinearCombo>(&spec.target_fn)) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        value += (lin->weights.empty() ? 1.0 : lin->weights[static_cast<std::size_t>(j)]) * x[j];
      }
    } else {
      value = x.squaredNorm() / static_cast<double>(dim) + std::sin(x[0]);
    }
    const double noise = rng.Normal();
    target.values[i] = value + spec.noise_sd * noise;
  }
  table.targets.push_back(std::move(target));
  table.categorical.push_back(std::move(gender));
  return table;
}

}  // namespace plapreg
