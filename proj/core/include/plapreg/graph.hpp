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
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace plapreg {

using VertexId = std::uint32_t;

struct Neighbor {
  VertexId id;
  double weight;
};

struct Edge {
  VertexId u;
  VertexId v;
  double weight;
};

// Symmetric weighted graph in compressed adjacency form. Each vertex's
// neighbor list is sorted by id; degree(x) is the sum of incident weights.
// Immutable once built, so it can be shared between solver threads.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  // Builds the symmetric adjacency from undirected edges. An edge may be
  // listed once or in both directions; listing it twice requires equal
  // weights. Rejects self-loops, out-of-range ids, and non-positive or
  // non-finite weights with InvalidArgument.
  static WeightedGraph FromEdges(std::size_t n, std::span<const Edge> edges);

  std::size_t size() const { return degrees_.size(); }
  std::span<const Neighbor> neighbors(std::size_t x) const {
    return {adjacency_.data() + offsets_[x], adjacency_.data() + offsets_[x + 1]};
  }
  double degree(std::size_t x) const { return degrees_[x]; }
  std::size_t edge_count() const { return adjacency_.size() / 2; }

  // Undirected edges with u < v, ordered by (u, v).
  std::vector<Edge> edges() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<double> degrees_;
};

// Throws DimensionMismatch.
double EuclideanDistance(std::span<const double> x, std::span<const double> y);

// exp(-(d/eps)^2), floored at the smallest normal double so that far-apart
// neighbors keep a strictly positive weight. Throws NonPositiveEpsilon.
double GaussianWeight(double distance, double eps);

struct GlobalEpsilon {
  double eps = 1.0;
};

// eps_x is the distance from x to its k_scale-th nearest neighbor; an edge
// uses sqrt(eps_x * eps_y).
struct SelfTuningEpsilon {
  std::size_t k_scale = 10;
};

using EpsilonMode = std::variant<GlobalEpsilon, SelfTuningEpsilon>;

std::string DescribeEpsilon(const EpsilonMode& mode);

struct NeighborDistance {
  VertexId id;
  double distance;
};

// Exact brute-force k nearest neighbors of every row (excluding the row
// itself), ordered by (distance, id). Throws KTooLarge when k >= rows.
std::vector<std::vector<NeighborDistance>> NearestNeighbors(
    const Eigen::MatrixXd& points, std::size_t k);

// Directed k-NN with Gaussian weights, then the union of both directions.
// Every vertex ends with at least k neighbors. Coincident distinct rows get
// weight 1 and a warning.
WeightedGraph KnnGraph(const Eigen::MatrixXd& points, std::size_t k,
                       const EpsilonMode& eps_mode);

struct Components {
  std::vector<std::uint32_t> component_of;  // per vertex
  std::vector<std::vector<VertexId>> members;  // ordered by smallest vertex

  std::size_t count() const { return members.size(); }
};

Components ConnectedComponents(const WeightedGraph& graph);

// Throws ComponentWithoutLabel naming each component that has no labeled
// vertex.
void AssertLabelsCoverComponents(const WeightedGraph& graph,
                                 std::span<const VertexId> labeled);

// "u v w" lines (u < v, 17 significant digits) preceded by a
// "# vertices N" comment line.
std::string WriteEdgeList(const WeightedGraph& graph);
WeightedGraph ReadEdgeList(std::string_view text);

}  // namespace plapreg
