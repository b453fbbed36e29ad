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

#include "critwalk/percolation.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <unordered_set>

#include "critwalk/errors.hpp"

namespace critwalk {
namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("retention probability must lie in [0, 1], got " + std::to_string(p));
  }
}

std::vector<Edge> sample_complete_edges(VertexId n, double p, RngSeed seed) {
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (total == 0 || p <= 0.0) {
    return {};
  }
  CounterEngine rng(seed, Purpose::kImplicitSampler);
  std::uint64_t count = total;
  if (p < 1.0) {
    std::binomial_distribution<std::int64_t> binomial(static_cast<std::int64_t>(total), p);
    count = static_cast<std::uint64_t>(binomial(rng));
  }
  if (count > total / 2) {
    throw ValidationError("implicit K_n sampler is meant for sparse retention (p <= 1/2)");
  }
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(count * 2);
  std::vector<Edge> edges;
  edges.reserve(count);
  while (edges.size() < count) {
    auto a = static_cast<VertexId>(rng.below(n));
    auto b = static_cast<VertexId>(rng.below(n));
    if (a == b) {
      continue;
    }
    if (a > b) {
      std::swap(a, b);
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    if (seen.insert(key).second) {
      edges.push_back({a, b});
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace

PercolationMask percolate(const Graph& g, double p, RngSeed seed) {
  check_probability(p);
  PercolationMask mask;
  mask.p_ = p;
  mask.n_ = g.vertex_count();
  mask.host_edges_ = g.edge_count();
  mask.seed_ = seed;
  if (g.is_implicit()) {
    mask.coupled_ = false;
    mask.sampled_ = sample_complete_edges(g.vertex_count(), p, seed);
    return mask;
  }
  auto uniforms = std::make_shared<std::vector<double>>(g.edge_count());
  for (EdgeIndex e = 0; e < uniforms->size(); ++e) {
    (*uniforms)[e] = edge_uniform(seed, e);
  }
  mask.uniforms_ = std::move(uniforms);
  return mask;
}

std::span<const double> PercolationMask::edge_uniforms() const {
  if (!coupled_) {
    throw ValidationError("mask from the implicit K_n sampler has no per-edge uniforms");
  }
  return *uniforms_;
}

PercolationMask PercolationMask::at(double p) const {
  check_probability(p);
  if (!coupled_) {
    throw ValidationError("cannot re-threshold an uncoupled (implicit K_n) mask");
  }
  PercolationMask copy = *this;
  copy.p_ = p;
  return copy;
}

std::uint64_t PercolationMask::retained_count() const {
  if (!coupled_) {
    return sampled_.size();
  }
  return static_cast<std::uint64_t>(
      std::count_if(uniforms_->begin(), uniforms_->end(), [this](double u) { return u < p_; }));
}

std::vector<Edge> PercolationMask::retained_edges(const Graph& g) const {
  if (g.vertex_count() != n_ || g.edge_count() != host_edges_) {
    throw ValidationError("mask does not belong to this graph");
  }
  if (!coupled_) {
    return sampled_;
  }
  std::vector<Edge> out;
  const auto edges = g.edges();
  for (EdgeIndex e = 0; e < edges.size(); ++e) {
    if ((*uniforms_)[e] < p_) {
      out.push_back(edges[e]);
    }
  }
  return out;
}

}  // namespace critwalk
