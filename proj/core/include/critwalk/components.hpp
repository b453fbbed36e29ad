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
#include <optional>
#include <span>
#include <vector>

#include "critwalk/graph.hpp"
#include "critwalk/percolation.hpp"

namespace critwalk {

// Vertex index inside one component, 0..size-1, assigned in increasing order
// of the global vertex id.
using LocalId = std::uint32_t;

struct LocalEdge {
  LocalId a = 0;
  LocalId b = 0;
};

// One connected cluster of a percolation subgraph with its own compact
// adjacency. Component-level algorithms address vertices by LocalId; use
// local_of() to translate a host vertex.
class Component {
 public:
  Component() = default;

  // Builds a component from an explicit connected graph (every edge retained).
  // Throws ValidationError if `g` is disconnected.
  static Component from_graph(const Graph& g);

  // `vertices` sorted ascending and distinct; `edges` in host ids, both
  // endpoints inside `vertices`. Connectivity is the caller's promise.
  static Component from_parts(std::vector<VertexId> vertices, std::span<const Edge> edges);

  std::size_t size() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const VertexId> vertices() const { return vertices_; }
  std::span<const LocalEdge> edges() const { return edges_; }

  std::span<const LocalId> neighbors(LocalId x) const {
    return std::span<const LocalId>(adjacency_).subspan(offsets_[x], offsets_[x + 1] - offsets_[x]);
  }
  std::uint32_t degree(LocalId x) const { return offsets_[x + 1] - offsets_[x]; }

  VertexId global_of(LocalId x) const { return vertices_[x]; }
  std::optional<LocalId> find(VertexId v) const;
  LocalId local_of(VertexId v) const;  // throws ValidationError if absent

  bool is_tree() const { return edges_.size() + 1 == vertices_.size(); }

  // Host graph of the component alone, vertices relabelled 0..size-1.
  Graph as_graph() const;

  std::optional<VertexId> root_hint;

 private:
  std::vector<VertexId> vertices_;
  std::vector<LocalEdge> edges_;
  std::vector<std::uint32_t> offsets_;
  std::vector<LocalId> adjacency_;
};

// Component labels of a percolation subgraph without materializing every
// component. Rank 0 is the largest; ties go to the smallest vertex id.
class Partition {
 public:
  Partition(const Graph& g, const PercolationMask& mask);

  std::size_t component_count() const { return sizes_.size(); }
  std::uint32_t size(std::size_t rank) const { return sizes_[rank]; }
  std::uint64_t edge_count(std::size_t rank) const { return edge_counts_[rank]; }
  std::uint32_t rank_of(VertexId v) const { return label_[v]; }
  std::uint64_t retained_edge_count() const { return retained_.size(); }
  VertexId vertex_count() const { return static_cast<VertexId>(label_.size()); }

  Component extract(std::size_t rank) const;

 private:
  std::vector<std::uint32_t> label_;
  std::vector<std::uint32_t> sizes_;
  std::vector<std::uint64_t> edge_counts_;
  std::vector<Edge> retained_;  // grouped by rank
  std::vector<std::uint64_t> edge_offsets_;
  // Vertices grouped by rank: members_[member_offsets_[r] .. member_offsets_[r+1]).
  std::vector<std::uint64_t> member_offsets_;
  std::vector<VertexId> members_;
};

// All components, largest first, ties broken by smallest vertex id.
std::vector<Component> components(const Graph& g, const PercolationMask& mask);

// BFS from every vertex above this size is refused; use diameter_bounds.
inline constexpr std::size_t kExactDiameterCap = 20000;

std::uint32_t diameter_exact(const Component& c, std::size_t cap = kExactDiameterCap);

struct DiameterBounds {
  std::uint32_t lower = 0;
  std::uint32_t upper = 0;
};

// Repeated double sweep for the lower bound, twice the smallest observed
// eccentricity for the upper bound. Exact on trees.
DiameterBounds diameter_bounds(const Component& c);

std::uint32_t eccentricity(const Component& c, LocalId x);

struct BfsLayers {
  LocalId origin = 0;
  std::vector<std::vector<LocalId>> layers;  // layers[k] = vertices at distance k
  std::vector<std::uint32_t> level_of;       // per local vertex

  std::uint32_t depth() const { return static_cast<std::uint32_t>(layers.size()) - 1; }
  // |B(origin, k)|; k beyond the depth counts the whole component.
  std::size_t ball_size(std::uint32_t k) const;
};

BfsLayers bfs_layers(const Component& c, LocalId v);

// Edges with both endpoints within distance k of the BFS origin.
std::size_t ball_edge_count(const Component& c, const BfsLayers& layers, std::uint32_t k);

}  // namespace critwalk
