/*
   Copyright 2026 The critwalk Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "critwalk/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "critwalk/errors.hpp"

namespace critwalk {

Graph Graph::from_edges(VertexId n, std::vector<Edge> edges, std::string family) {
  if (n > kMaxVertices) {
    throw ValidationError("vertex count " + std::to_string(n) + " exceeds vertex budget");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.u >= n || e.v >= n) {
      throw ValidationError("edge " + std::to_string(i) + " has an endpoint out of range");
    }
    if (e.u == e.v) {
      throw ValidationError("edge " + std::to_string(i) + " is a self-loop at vertex " +
                            std::to_string(e.u));
    }
    if (e.u > e.v) {
      throw ValidationError("edge " + std::to_string(i) + " is not normalized (u < v)");
    }
  }
  if (edges.size() > std::numeric_limits<EdgeIndex>::max()) {
    throw ValidationError("too many edges for an explicit graph");
  }
  auto has_duplicate = [](const std::vector<Edge>& sorted) {
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
  };
  bool duplicate = false;
  if (std::is_sorted(edges.begin(), edges.end())) {
    duplicate = has_duplicate(edges);
  } else {
    auto sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    duplicate = has_duplicate(sorted);
  }
  if (duplicate) {
    throw ValidationError("parallel edge in edge list");
  }

  Graph g;
  g.n_ = n;
  g.family_ = std::move(family);
  g.edges_ = std::move(edges);
  g.build_adjacency();
  return g;
}

Graph Graph::implicit_complete(VertexId n) {
  if (n == 0) {
    throw ValidationError("complete graph needs n >= 1");
  }
  Graph g;
  g.n_ = n;
  g.implicit_ = true;
  g.family_ = "complete";
  return g;
}

void Graph::build_adjacency() {
  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  incidences_.resize(2 * edges_.size());
  std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeIndex i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    incidences_[cursor[e.u]++] = {e.v, i};
    incidences_[cursor[e.v]++] = {e.u, i};
  }
}

std::span<const Edge> Graph::edges() const {
  if (implicit_) {
    throw ValidationError("implicit complete graph has no materialized edge list");
  }
  return edges_;
}

std::span<const Incidence> Graph::neighbors(VertexId v) const {
  if (implicit_) {
    throw ValidationError("implicit complete graph has no materialized adjacency");
  }
  return std::span<const Incidence>(incidences_).subspan(offsets_[v], offsets_[v + 1] - offsets_[v]);
}

std::uint32_t Graph::degree(VertexId v) const {
  if (implicit_) {
    return n_ - 1;
  }
  return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
}

std::uint32_t Graph::max_degree() const {
  if (implicit_) {
    return n_ - 1;
  }
  std::uint32_t best = 0;
  for (VertexId v = 0; v < n_; ++v) {
    best = std::max(best, degree(v));
  }
  return best;
}

Graph complete_graph(VertexId n) {
  if (n == 0) {
    throw ValidationError("complete graph needs n >= 1");
  }
  if (n > kExplicitCompleteMaxVertices) {
    throw ValidationError("complete_graph(" + std::to_string(n) +
                          ") is too large to materialize; use Graph::implicit_complete");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      edges.push_back({u, v});
    }
  }
  return Graph::from_edges(n, std::move(edges), "complete");
}

Graph random_regular(VertexId n, std::uint32_t d, RngSeed seed) {
  if (d < 3) {
    throw ValidationError("random_regular needs d >= 3");
  }
  if (d >= n) {
    throw ValidationError("random_regular needs d < n");
  }
  if ((static_cast<std::uint64_t>(n) * d) % 2 != 0) {
    throw ValidationError("random_regular needs n*d even");
  }
  const std::size_t points = static_cast<std::size_t>(n) * d;
  std::vector<VertexId> half_edges(points);
  std::vector<Edge> edges(points / 2);
  CounterEngine rng(seed, Purpose::kGraphBuild);

  for (int rejections = 0; rejections <= kConfigurationModelRetryCap; ++rejections) {
    for (std::size_t i = 0; i < points; ++i) {
      half_edges[i] = static_cast<VertexId>(i / d);
    }
    for (std::size_t i = points - 1; i > 0; --i) {
      std::swap(half_edges[i], half_edges[rng.below(i + 1)]);
    }
    bool simple = true;
    for (std::size_t i = 0; i < points / 2; ++i) {
      VertexId a = half_edges[2 * i];
      VertexId b = half_edges[2 * i + 1];
      if (a == b) {
        simple = false;
        break;
      }
      edges[i] = {std::min(a, b), std::max(a, b)};
    }
    if (!simple) {
      continue;
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
      continue;
    }
    return Graph::from_edges(n, std::move(edges), "regular");
  }
  throw ValidationError("configuration model: no simple pairing after " +
                        std::to_string(kConfigurationModelRetryCap) + " rejections");
}

Graph hypercube(std::uint32_t dim) {
  if (dim < 1) {
    throw ValidationError("hypercube needs dim >= 1");
  }
  if (dim >= 31 || (std::uint64_t{1} << dim) > kMaxVertices) {
    throw ValidationError("hypercube dimension exceeds vertex budget");
  }
  const VertexId n = VertexId{1} << dim;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * dim / 2);
  for (VertexId u = 0; u < n; ++u) {
    for (std::uint32_t bit = 0; bit < dim; ++bit) {
      const VertexId v = u ^ (VertexId{1} << bit);
      if (u < v) {
        edges.push_back({u, v});
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return Graph::from_edges(n, std::move(edges), "hypercube");
}

Graph torus(std::uint32_t side, std::uint32_t dim) {
  if (dim < 1) {
    throw ValidationError("torus needs dim >= 1");
  }
  if (side < 3) {
    throw ValidationError("torus needs side >= 3");
  }
  std::uint64_t n64 = 1;
  for (std::uint32_t i = 0; i < dim; ++i) {
    n64 *= side;
    if (n64 > kMaxVertices) {
      throw ValidationError("torus side^dim exceeds vertex budget");
    }
  }
  const auto n = static_cast<VertexId>(n64);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * dim);
  for (VertexId u = 0; u < n; ++u) {
    std::uint64_t stride = 1;
    for (std::uint32_t axis = 0; axis < dim; ++axis) {
      const std::uint64_t coord = (u / stride) % side;
      const std::uint64_t next = (coord + 1) % side;
      const auto v = static_cast<VertexId>(u - coord * stride + next * stride);
      edges.push_back({std::min(u, v), std::max(u, v)});
      stride *= side;
    }
  }
  std::sort(edges.begin(), edges.end());
  return Graph::from_edges(n, std::move(edges), "torus");
}

Graph path_graph(VertexId n) {
  if (n == 0) {
    throw ValidationError("path needs n >= 1");
  }
  std::vector<Edge> edges;
  for (VertexId i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1});
  }
  return Graph::from_edges(n, std::move(edges), "path");
}

Graph cycle_graph(VertexId n) {
  if (n < 3) {
    throw ValidationError("cycle needs n >= 3");
  }
  std::vector<Edge> edges;
  for (VertexId i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1});
  }
  edges.push_back({0, n - 1});
  std::sort(edges.begin(), edges.end());
  return Graph::from_edges(n, std::move(edges), "cycle");
}

Graph star_graph(VertexId leaves) {
  std::vector<Edge> edges;
  for (VertexId i = 1; i <= leaves; ++i) {
    edges.push_back({0, i});
  }
  return Graph::from_edges(leaves + 1, std::move(edges), "star");
}

}  // namespace critwalk
