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
#include <string>
#include <variant>
#include <vector>

#include "plapreg/dataio.hpp"

namespace plapreg {

// Isotropic Gaussian clusters. No centers means one cluster at the origin.
struct GaussianBlobs {
  std::vector<std::vector<double>> centers;
  double spread = 1.0;
};

// Points along the closed curve x_j(t) = sin(2 pi (j + 1) t + j) for
// t ~ U[0, 1), plus isotropic noise.
struct ManifoldCurve {
  double ambient_noise = 0.05;
};

using SynthStructure = std::variant<GaussianBlobs, ManifoldCurve>;

// sum_j w_j x_j; no weights means all ones.
struct LinearCombo {
  std::vector<double> weights;
};

// ||x||^2 / dim + sin(x_0).
struct SmoothNonlinear {};

using SynthTarget = std::variant<LinearCombo, SmoothNonlinear>;

struct SynthSpec {
  std::size_t n = 500;
  std::size_t dim = 10;
  SynthStructure structure = GaussianBlobs{};
  SynthTarget target_fn = SmoothNonlinear{};
  double noise_sd = 0.05;
  std::uint64_t seed = 0;

  // Throws InvalidArgument on n == 0, dim == 0, negative noise, center
  // dimension or weight length mismatches.
  void validate() const;
};

// Two blobs whose centers sit separation apart along the first axis.
GaussianBlobs TwoBlobs(std::size_t dim, double separation, double spread = 1.0);

inline constexpr const char* kSynthTarget = "y";
inline constexpr const char* kSynthGender = "gender";

// Features x0..x{dim-1}, target "y" and a random binary "gender" (M/F).
// Deterministic in the seed; the draw sequence per row does not depend on
// noise_sd.
FeatureTable Generate(const SynthSpec& spec);

}  // namespace plapreg
