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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "critwalk/rng.hpp"

namespace critwalk {

using VertexId = std::uint32_t;
using EdgeIndex = std::uint32_t;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Incidence {
  VertexId neighbor = 0;
  EdgeIndex edge = 0;
};

// Largest vertex count any builder will produce.
inline constexpr std::uint64_t kMaxVertices = std::uint64_t{1} << 30;
// Largest n for which complete_graph materializes K_n (about 8.4M edges).
inline constexpr std::uint32_t kExplicitCompleteMaxVertices = 4096;

// Immutable simple undirected graph. Edges are stored with u < v and indexed
// 0..m-1; the adjacency of every vertex refers back to those indices.
//
// An implicit complete graph carries only n: it has m = n(n-1)/2 conceptual
// edges but no edge list or adjacency. It exists so that K_n percolation can
// be sampled at sizes where the edge list would not fit in memory.
class Graph {
 public:
  Graph() = default;

  // Validates: no self-loops, no parallel edges, endpoints in range, u < v.
  // Edge order is preserved.
  static Graph from_edges(VertexId n, std::vector<Edge> edges, std::string family = "custom");
  static Graph implicit_complete(VertexId n);

  VertexId vertex_count() const { return n_; }
  std::uint64_t edge_count() const { return implicit_ ? implicit_edge_count() : edges_.size(); }
  bool is_implicit() const { return implicit_; }
  const std::string& family() const { return family_; }

  std::span<const Edge> edges() const;
  std::span<const Incidence> neighbors(VertexId v) const;
  std::uint32_t degree(VertexId v) const;
  std::uint32_t max_degree() const;
  const Edge& edge(EdgeIndex e) const { return edges_[e]; }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.implicit_ == b.implicit_ && a.edges_ == b.edges_;
  }

 private:
  std::uint64_t implicit_edge_count() const {
    return static_cast<std::uint64_t>(n_) * (n_ - (n_ > 0 ? 1 : 0)) / 2;
  }
  void build_adjacency();

  VertexId n_ = 0;
  bool implicit_ = false;
  std::string family_ = "custom";
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> offsets_;
  std::vector<Incidence> incidences_;
};

Graph complete_graph(VertexId n);

// Uniform simple d-regular graph: configuration-model pairing, rejected and
// redrawn until simple. Throws after kConfigurationModelRetryCap rejections.
inline constexpr int kConfigurationModelRetryCap = 1000;
Graph random_regular(VertexId n, std::uint32_t d, RngSeed seed);

Graph hypercube(std::uint32_t dim);
Graph torus(std::uint32_t side, std::uint32_t dim);

// Small deterministic families used by tests and examples.
Graph path_graph(VertexId n);
Graph cycle_graph(VertexId n);
Graph star_graph(VertexId leaves);

}  // namespace critwalk
