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
#include "plapreg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <sstream>

#include "plapreg/error.hpp"
#include "plapreg/log.hpp"
#include "plapreg/text.hpp"

namespace plapreg {

WeightedGraph WeightedGraph::FromEdges(std::size_t n, std::span<const Edge> edges) {
  std::vector<Edge> directed;
  directed.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") out of range for " + std::to_string(n) + " vertices");
    }
    if (e.u == e.v) {
      throw Error(ErrorCode::kInvalidArgument,
                  "self-loop at vertex " + std::to_string(e.u));
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") needs a positive finite weight");
    }
    directed.push_back(e);
    directed.push_back({e.v, e.u, e.weight});
  }
  std::sort(directed.begin(), directed.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  WeightedGraph g;
  g.offsets_.assign(n + 1, 0);
  g.degrees_.assign(n, 0.0);
  g.adjacency_.reserve(directed.size());
  for (std::size_t i = 0; i < directed.size(); ++i) {
    const Edge& e = directed[i];
    if (i > 0 && directed[i - 1].u == e.u && directed[i - 1].v == e.v) {
      if (directed[i - 1].weight != e.weight) {
        throw Error(ErrorCode::kInvalidArgument,
                    "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                        ") listed with two different weights");
      }
      continue;
    }
    g.adjacency_.push_back({e.v, e.weight});
    g.offsets_[e.u + 1]++;
    g.degrees_[e.u] += e.weight;
  }
  for (std::size_t x = 0; x < n; ++x) g.offsets_[x + 1] += g.offsets_[x];
  return g;
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t x = 0; x < size(); ++x) {
    for (const Neighbor& nb : neighbors(x)) {
      if (nb.id > x) out.push_back({static_cast<VertexId>(x), nb.id, nb.weight});
    }
  }
  return out;
}

double EuclideanDistance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "distance between vectors of dimension " + std::to_string(x.size()) +
                    " and " + std::to_string(y.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double GaussianWeight(double distance, double eps) {
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::kNonPositiveEpsilon,
                "epsilon must be positive, got " + FormatDouble(eps));
  }
  const double t = distance / eps;
  return std::max(std::exp(-t * t), std::numeric_limits<double>::min());
}

std::string DescribeEpsilon(const EpsilonMode& mode) {
  if (const auto* g = std::get_if<GlobalEpsilon>(&mode)) {
    return "global:" + FormatDouble(g->eps);
  }
  return "self-tuning:" + std::to_string(std::get<SelfTuningEpsilon>(mode).k_scale);
}

namespace {

// Row-major copy so every distance evaluation walks contiguous memory.
std::vector<double> RowMajor(const Eigen::MatrixXd& points) {
  const auto n = points.rows();
  const auto m = points.cols();
  std::vector<double> out(static_cast<std::size_t>(n * m));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      out[static_cast<std::size_t>(i * m + j)] = points(i, j);
    }
  }
  return out;
}

bool CloserThan(const NeighborDistance& a, const NeighborDistance& b) {
  return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
}

}  // namespace

std::vector<std::vector<NeighborDistance>> NearestNeighbors(
    const Eigen::MatrixXd& points, std::size_t k) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k >= n) {
    throw Error(ErrorCode::kKTooLarge,
                "k=" + std::to_string(k) + " needs more than " + std::to_string(n) +
                    " points");
  }
  if (!points.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "points contain non-finite values");
  }
  const auto m = static_cast<std::size_t>(points.cols());
  const std::vector<double> rows = RowMajor(points);
  auto row = [&](std::size_t i) {
    return std::span<const double>(rows.data() + i * m, m);
  };

  std::vector<std::vector<NeighborDistance>> out(n);
  std::vector<NeighborDistance> candidates;
  candidates.reserve(n);
  for (std::size_t x = 0; x < n; ++x) {
    candidates.clear();
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      candidates.push_back({static_cast<VertexId>(y), EuclideanDistance(row(x), row(y))});
    }
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                      candidates.end(), CloserThan);
    out[x].assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k));
  }
  return out;
}

WeightedGraph KnnGraph(const Eigen::MatrixXd& points, std::size_t k,
                       const EpsilonMode& eps_mode) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  const auto n = static_cast<std::size_t>(points.rows());

  std::size_t search_k = k;
  const auto* self_tuning = std::get_if<SelfTuningEpsilon>(&eps_mode);
  if (self_tuning) {
    if (self_tuning->k_scale < 1) {
      throw Error(ErrorCode::kInvalidArgument, "self-tuning k_scale must be at least 1");
    }
    search_k = std::max(search_k, self_tuning->k_scale);
  } else {
    const double eps = std::get<GlobalEpsilon>(eps_mode).eps;
    if (!(eps > 0.0)) {
      throw Error(ErrorCode::kNonPositiveEpsilon,
                  "epsilon must be positive, got " + FormatDouble(eps));
    }
  }
  const auto knn = NearestNeighbors(points, search_k);

  // Per-vertex bandwidth for self-tuning. A zero k_scale-th distance (many
  // duplicates) falls back to the nearest positive distance, then to 1.
  std::vector<double> local_eps(n, 1.0);
  if (self_tuning) {
    for (std::size_t x = 0; x < n; ++x) {
      local_eps[x] = knn[x][self_tuning->k_scale - 1].distance;
      if (local_eps[x] > 0.0) continue;
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t y = 0; y < n; ++y) {
        const double d = (points.row(static_cast<Eigen::Index>(x)) -
                          points.row(static_cast<Eigen::Index>(y)))
                             .norm();
        if (d > 0.0) nearest = std::min(nearest, d);
      }
      local_eps[x] = std::isfinite(nearest) ? nearest : 1.0;
    }
  }

  std::vector<Edge> edges;
  edges.reserve(n * k);
  std::size_t duplicates = 0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t j = 0; j < k; ++j) {
      const NeighborDistance& nb = knn[x][j];
      const double scale = self_tuning ? std::sqrt(local_eps[x] * local_eps[nb.id])
                                       : std::get<GlobalEpsilon>(eps_mode).eps;
      if (nb.distance == 0.0 && x < nb.id) ++duplicates;
      const VertexId u = static_cast<VertexId>(std::min<std::size_t>(x, nb.id));
      const VertexId v = static_cast<VertexId>(std::max<std::size_t>(x, nb.id));
      edges.push_back({u, v, GaussianWeight(nb.distance, scale)});
    }
  }
  if (duplicates > 0) {
    log::Warn("knn graph: " + std::to_string(duplicates) +
              " pair(s) of coincident points joined with weight 1");
  }
  return WeightedGraph::FromEdges(n, edges);
}

Components ConnectedComponents(const WeightedGraph& graph) {
  const std::size_t n = graph.size();
  constexpr auto kUnseen = std::numeric_limits<std::uint32_t>::max();
  Components out;
  out.component_of.assign(n, kUnseen);
  std::deque<VertexId> queue;
  for (std::size_t start = 0; start < n; ++start) {
    if (out.component_of[start] != kUnseen) continue;
    const auto id = static_cast<std::uint32_t>(out.members.size());
    out.members.emplace_back();
    out.component_of[start] = id;
    queue.push_back(static_cast<VertexId>(start));
    while (!queue.empty()) {
      const VertexId x = queue.front();
      queue.pop_front();
      out.members[id].push_back(x);
      for (const Neighbor& nb : graph.neighbors(x)) {
        if (nb.weight > 0.0 && out.component_of[nb.id] == kUnseen) {
          out.component_of[nb.id] = id;
          queue.push_back(nb.id);
        }
      }
    }
    std::sort(out.members[id].begin(), out.members[id].end());
  }
  return out;
}

void AssertLabelsCoverComponents(const WeightedGraph& graph,
                                 std::span<const VertexId> labeled) {
  const Components comps = ConnectedComponents(graph);
  std::vector<bool> covered(comps.count(), false);
  for (VertexId x : labeled) {
    if (x >= graph.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "labeled vertex " + std::to_string(x) + " out of range");
    }
    covered[comps.component_of[x]] = true;
  }
  std::string missing;
  std::size_t count = 0;
  for (std::size_t c = 0; c < comps.count(); ++c) {
    if (covered[c]) continue;
    if (count++ > 0) missing += ", ";
    missing += "#" + std::to_string(c) + " (" + std::to_string(comps.members[c].size()) +
               " vertices, first " + std::to_string(comps.members[c].front()) + ")";
  }
  if (count > 0) {
    throw Error(ErrorCode::kComponentWithoutLabel,
                std::to_string(count) + " of " + std::to_string(comps.count()) +
                    " components have no labeled vertex: " + missing);
  }
}

std::string WriteEdgeList(const WeightedGraph& graph) {
  std::string out = "# vertices " + std::to_string(graph.size()) + "\n";
  char buf[64];
  for (const Edge& e : graph.edges()) {
    std::snprintf(buf, sizeof buf, " %.17g\n", e.weight);
    out += std::to_string(e.u) + " " + std::to_string(e.v) + buf;
  }
  return out;
}

WeightedGraph ReadEdgeList(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  bool have_n = false;
  std::vector<Edge> edges;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = Trim(line);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '#') {
      std::istringstream header{std::string(trimmed.substr(1))};
      std::string word;
      std::size_t count = 0;
      if (header >> word >> count && word == "vertices") {
        n = count;
        have_n = true;
      }
      continue;
    }
    std::istringstream fields{std::string(trimmed)};
    long long u = -1;
    long long v = -1;
    std::string w_text;
    if (!(fields >> u >> v >> w_text) || u < 0 || v < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge list line " + std::to_string(line_no) + " is not 'u v w'");
    }
    const auto w = ParseDouble(w_text);
    if (!w) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge list line " + std::to_string(line_no) + " has a bad weight");
    }
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), *w});
    if (!have_n) {
      n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(u, v)) + 1);
    }
  }
  return WeightedGraph::FromEdges(n, edges);
}

}  // namespace plapreg
