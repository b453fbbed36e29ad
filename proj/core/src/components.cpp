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

#include "critwalk/components.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "critwalk/errors.hpp"
#include "critwalk/union_find.hpp"

namespace critwalk {
namespace {

constexpr std::uint32_t kUnvisited = std::numeric_limits<std::uint32_t>::max();

// Single-source BFS over a component, reusing caller scratch.
struct Sweep {
  std::vector<std::uint32_t> dist;
  std::vector<LocalId> queue;

  explicit Sweep(std::size_t n) : dist(n, kUnvisited), queue(n) {}

  // Returns (eccentricity, a farthest vertex). The farthest vertex is the last
  // one dequeued, which is deterministic for a fixed adjacency order.
  std::pair<std::uint32_t, LocalId> run(const Component& c, LocalId source) {
    std::fill(dist.begin(), dist.end(), kUnvisited);
    std::size_t head = 0;
    std::size_t tail = 0;
    queue[tail++] = source;
    dist[source] = 0;
    LocalId last = source;
    while (head < tail) {
      const LocalId x = queue[head++];
      last = x;
      const std::uint32_t next = dist[x] + 1;
      for (LocalId y : c.neighbors(x)) {
        if (dist[y] == kUnvisited) {
          dist[y] = next;
          queue[tail++] = y;
        }
      }
    }
    return {dist[last], last};
  }
};

}  // namespace

Component Component::from_parts(std::vector<VertexId> vertices, std::span<const Edge> edges) {
  Component c;
  c.vertices_ = std::move(vertices);
  const std::size_t n = c.vertices_.size();
  c.edges_.reserve(edges.size());
  c.offsets_.assign(n + 1, 0);
  for (const Edge& e : edges) {
    const LocalId a = c.local_of(e.u);
    const LocalId b = c.local_of(e.v);
    c.edges_.push_back({std::min(a, b), std::max(a, b)});
    ++c.offsets_[a + 1];
    ++c.offsets_[b + 1];
  }
  std::partial_sum(c.offsets_.begin(), c.offsets_.end(), c.offsets_.begin());
  c.adjacency_.resize(2 * c.edges_.size());
  std::vector<std::uint32_t> cursor(c.offsets_.begin(), c.offsets_.end() - 1);
  for (const LocalEdge& e : c.edges_) {
    c.adjacency_[cursor[e.a]++] = e.b;
    c.adjacency_[cursor[e.b]++] = e.a;
  }
  return c;
}

Component Component::from_graph(const Graph& g) {
  std::vector<VertexId> vertices(g.vertex_count());
  std::iota(vertices.begin(), vertices.end(), VertexId{0});
  Component c = from_parts(std::move(vertices), g.edges());
  if (c.size() > 0) {
    Sweep sweep(c.size());
    sweep.run(c, 0);
    if (std::find(sweep.dist.begin(), sweep.dist.end(), kUnvisited) != sweep.dist.end()) {
      throw ValidationError("graph is not connected");
    }
  }
  return c;
}

std::optional<LocalId> Component::find(VertexId v) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
  if (it == vertices_.end() || *it != v) {
    return std::nullopt;
  }
  return static_cast<LocalId>(it - vertices_.begin());
}

LocalId Component::local_of(VertexId v) const {
  auto local = find(v);
  if (!local) {
    throw ValidationError("vertex " + std::to_string(v) + " is not in the component");
  }
  return *local;
}

Graph Component::as_graph() const {
  std::vector<Edge> edges;
  edges.reserve(edges_.size());
  for (const LocalEdge& e : edges_) {
    edges.push_back({e.a, e.b});
  }
  std::sort(edges.begin(), edges.end());
  return Graph::from_edges(static_cast<VertexId>(size()), std::move(edges), "component");
}

Partition::Partition(const Graph& g, const PercolationMask& mask) {
  const VertexId n = g.vertex_count();
  retained_ = mask.retained_edges(g);
  DisjointSets sets(n);
  for (const Edge& e : retained_) {
    sets.unite(e.u, e.v);
  }

  // Roots in order of first (smallest) member, then ranked by size.
  std::vector<std::uint32_t> root_slot(n, kUnvisited);
  std::vector<VertexId> roots;
  std::vector<VertexId> smallest;
  for (VertexId v = 0; v < n; ++v) {
    const auto r = sets.find(v);
    if (root_slot[r] == kUnvisited) {
      root_slot[r] = static_cast<std::uint32_t>(roots.size());
      roots.push_back(r);
      smallest.push_back(v);
    }
  }
  std::vector<std::uint32_t> order(roots.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return sets.set_size(roots[a]) > sets.set_size(roots[b]);
  });
  std::vector<std::uint32_t> rank_of_slot(roots.size());
  sizes_.resize(roots.size());
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
    rank_of_slot[order[rank]] = rank;
    sizes_[rank] = sets.set_size(roots[order[rank]]);
  }

  label_.resize(n);
  member_offsets_.assign(sizes_.size() + 1, 0);
  for (VertexId v = 0; v < n; ++v) {
    label_[v] = rank_of_slot[root_slot[sets.find(v)]];
    ++member_offsets_[label_[v] + 1];
  }
  std::partial_sum(member_offsets_.begin(), member_offsets_.end(), member_offsets_.begin());
  members_.resize(n);
  std::vector<std::uint64_t> cursor(member_offsets_.begin(), member_offsets_.end() - 1);
  for (VertexId v = 0; v < n; ++v) {
    members_[cursor[label_[v]]++] = v;
  }

  edge_counts_.assign(sizes_.size(), 0);
  for (const Edge& e : retained_) {
    ++edge_counts_[label_[e.u]];
  }
  std::stable_sort(retained_.begin(), retained_.end(),
                   [this](const Edge& a, const Edge& b) { return label_[a.u] < label_[b.u]; });
  edge_offsets_.assign(sizes_.size() + 1, 0);
  std::partial_sum(edge_counts_.begin(), edge_counts_.end(), edge_offsets_.begin() + 1);
}

Component Partition::extract(std::size_t rank) const {
  if (rank >= sizes_.size()) {
    throw ValidationError("component rank out of range");
  }
  std::vector<VertexId> vertices(members_.begin() + static_cast<std::ptrdiff_t>(member_offsets_[rank]),
                                 members_.begin() + static_cast<std::ptrdiff_t>(member_offsets_[rank + 1]));
  auto edges = std::span<const Edge>(retained_).subspan(edge_offsets_[rank], edge_counts_[rank]);
  Component c = Component::from_parts(std::move(vertices), edges);
  c.root_hint = c.global_of(0);
  return c;
}

std::vector<Component> components(const Graph& g, const PercolationMask& mask) {
  Partition partition(g, mask);
  std::vector<Component> out;
  out.reserve(partition.component_count());
  for (std::size_t r = 0; r < partition.component_count(); ++r) {
    out.push_back(partition.extract(r));
  }
  return out;
}

std::uint32_t eccentricity(const Component& c, LocalId x) {
  if (x >= c.size()) {
    throw ValidationError("vertex is not in the component");
  }
  Sweep sweep(c.size());
  return sweep.run(c, x).first;
}

std::uint32_t diameter_exact(const Component& c, std::size_t cap) {
  if (c.size() > cap) {
    throw CapExceeded("diameter_exact", c.size(), cap);
  }
  Sweep sweep(c.size());
  std::uint32_t best = 0;
  for (LocalId x = 0; x < c.size(); ++x) {
    best = std::max(best, sweep.run(c, x).first);
  }
  return best;
}

DiameterBounds diameter_bounds(const Component& c) {
  if (c.size() <= 1) {
    return {0, 0};
  }
  Sweep sweep(c.size());
  std::uint32_t lower = 0;
  std::uint32_t min_ecc = std::numeric_limits<std::uint32_t>::max();
  auto visit = [&](LocalId x) {
    auto [ecc, far] = sweep.run(c, x);
    lower = std::max(lower, ecc);
    min_ecc = std::min(min_ecc, ecc);
    return far;
  };

  LocalId start = 0;
  for (LocalId x = 1; x < c.size(); ++x) {
    if (c.degree(x) > c.degree(start)) {
      start = x;
    }
  }
  for (int round = 0; round < 2; ++round) {
    const LocalId a = visit(start);
    const LocalId b = visit(a);
    // Walk back from b towards a to the middle of the a-b geodesic; it tends
    // to have small eccentricity, which tightens the upper bound.
    const std::uint32_t half = sweep.dist[b] / 2;
    LocalId mid = b;
    while (sweep.dist[mid] > half) {
      for (LocalId y : c.neighbors(mid)) {
        if (sweep.dist[y] + 1 == sweep.dist[mid]) {
          mid = y;
          break;
        }
      }
    }
    start = visit(mid);
  }
  if (c.is_tree()) {
    // A double sweep from any vertex is exact on a tree.
    return {lower, lower};
  }
  const auto upper = static_cast<std::uint32_t>(
      std::min<std::uint64_t>(2ull * min_ecc, c.size() - 1));
  return {lower, upper};
}

std::size_t BfsLayers::ball_size(std::uint32_t k) const {
  std::size_t total = 0;
  for (std::uint32_t j = 0; j < layers.size() && j <= k; ++j) {
    total += layers[j].size();
  }
  return total;
}

BfsLayers bfs_layers(const Component& c, LocalId v) {
  if (v >= c.size()) {
    throw ValidationError("vertex is not in the component");
  }
  Sweep sweep(c.size());
  sweep.run(c, v);
  BfsLayers out;
  out.origin = v;
  out.level_of = sweep.dist;
  std::uint32_t depth = 0;
  for (auto d : out.level_of) {
    depth = std::max(depth, d);
  }
  out.layers.resize(depth + 1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    // BFS order keeps each layer sorted by discovery; use queue order.
    const LocalId x = sweep.queue[i];
    out.layers[out.level_of[x]].push_back(x);
  }
  return out;
}

std::size_t ball_edge_count(const Component& c, const BfsLayers& layers, std::uint32_t k) {
  std::size_t count = 0;
  for (const LocalEdge& e : c.edges()) {
    if (std::max(layers.level_of[e.a], layers.level_of[e.b]) <= k) {
      ++count;
    }
  }
  return count;
}

}  // namespace critwalk
