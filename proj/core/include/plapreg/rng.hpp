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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace plapreg {

// SplitMix64 finalizer. Used as the counter-based mix for deriving child
// seeds from a master seed.
std::uint64_t Mix64(std::uint64_t x) noexcept;

// Child seed for (stream, index) under a master seed:
//   Mix64(Mix64(master ^ Mix64(stream + 1)) + index * 0x9E3779B97F4A7C15).
// Repeat r of an evaluation uses DeriveSeed(master, kRepeatStream, r).
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t stream,
                         std::uint64_t index) noexcept;

inline constexpr std::uint64_t kRepeatStream = 1;
inline constexpr std::uint64_t kSynthStream = 2;

// Portable random source. Every draw is defined in terms of raw
// std::mt19937_64 output (whose sequence the standard fixes), so results are
// identical across standard libraries, unlike std::*_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer on [0, bound), unbiased. bound must be > 0.
  std::uint64_t Below(std::uint64_t bound);
  // Standard normal via Box-Muller.
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(Below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace plapreg
