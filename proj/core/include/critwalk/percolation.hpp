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
#include <memory>
#include <span>
#include <vector>

#include "critwalk/graph.hpp"
#include "critwalk/rng.hpp"

namespace critwalk {

// Bond percolation on a host graph.
//
// For an explicit host every edge e owns a uniform u(e) = edge_uniform(seed, e)
// and is retained iff u(e) < p. Keeping the uniforms lets the same mask be
// re-thresholded at any p' (the monotone coupling).
//
// For an implicit K_n host the retained edges are drawn directly: a
// Binomial(n(n-1)/2, p) count, then that many distinct pairs uniformly
// without replacement. That mask is not coupled across p (coupled() is false).
class PercolationMask {
 public:
  double p() const { return p_; }
  bool coupled() const { return coupled_; }
  VertexId vertex_count() const { return n_; }
  std::uint64_t host_edge_count() const { return host_edges_; }
  const RngSeed& seed() const { return seed_; }

  // Explicit-host accessors; throw ValidationError on an uncoupled mask.
  std::span<const double> edge_uniforms() const;
  bool retained(EdgeIndex e) const { return edge_uniforms()[e] < p_; }

  // Same uniforms, new threshold.
  PercolationMask at(double p) const;

  std::uint64_t retained_count() const;

  // Retained edges as vertex pairs; `g` must be the host graph.
  std::vector<Edge> retained_edges(const Graph& g) const;

 private:
  friend PercolationMask percolate(const Graph& g, double p, RngSeed seed);

  double p_ = 0.0;
  bool coupled_ = true;
  VertexId n_ = 0;
  std::uint64_t host_edges_ = 0;
  RngSeed seed_;
  std::shared_ptr<const std::vector<double>> uniforms_;
  std::vector<Edge> sampled_;  // uncoupled (implicit K_n) masks only
};

PercolationMask percolate(const Graph& g, double p, RngSeed seed);

// Retention test without materializing a mask: the same decision percolate()
// makes for edge `e` under `seed`.
inline bool edge_retained(const RngSeed& seed, EdgeIndex e, double p) {
  return edge_uniform(seed, e) < p;
}

}  // namespace critwalk
