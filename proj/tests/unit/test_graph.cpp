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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "critwalk/components.hpp"
#include "critwalk/errors.hpp"
#include "critwalk/graph.hpp"
#include "critwalk/graph_io.hpp"
#include "critwalk/percolation.hpp"
#include "oracles/oracles.hpp"

namespace critwalk {
namespace {

void expect_regular(const Graph& g, std::uint32_t d) {
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    EXPECT_EQ(g.degree(v), d) << "vertex " << v;
  }
}

void expect_adjacency_consistent(const Graph& g) {
  const auto edges = g.edges();
  std::uint64_t incidences = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (const Incidence& inc : g.neighbors(v)) {
      const Edge& e = edges[inc.edge];
      EXPECT_TRUE((e.u == v && e.v == inc.neighbor) || (e.v == v && e.u == inc.neighbor));
      ++incidences;
    }
  }
  EXPECT_EQ(incidences, 2 * g.edge_count());
}

TEST(Complete, SmallCases) {
  const Graph k1 = complete_graph(1);
  EXPECT_EQ(k1.vertex_count(), 1u);
  EXPECT_EQ(k1.edge_count(), 0u);

  const Graph k4 = complete_graph(4);
  EXPECT_EQ(k4.edge_count(), 6u);
  expect_regular(k4, 3);
  expect_adjacency_consistent(k4);

  EXPECT_EQ(complete_graph(100).edge_count(), 4950u);
  EXPECT_THROW(complete_graph(0), ValidationError);
}

TEST(Complete, ImplicitHost) {
  const Graph g = Graph::implicit_complete(100000);
  EXPECT_TRUE(g.is_implicit());
  EXPECT_EQ(g.edge_count(), 100000ull * 99999 / 2);
  EXPECT_THROW(g.edges(), ValidationError);
}

TEST(FromEdges, RejectsMalformedInput) {
  EXPECT_THROW(Graph::from_edges(3, {{0, 0}}), ValidationError);
  EXPECT_THROW(Graph::from_edges(3, {{0, 3}}), ValidationError);
  EXPECT_THROW(Graph::from_edges(3, {{1, 0}}), ValidationError);
  EXPECT_THROW(Graph::from_edges(3, {{0, 1}, {0, 1}}), ValidationError);
}

TEST(RandomRegular, FourVerticesIsK4) {
  const Graph g = random_regular(4, 3, {11, 0});
  EXPECT_EQ(g.edges().size(), 6u);
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::sort(edges.begin(), edges.end());
  const Graph k4 = complete_graph(4);
  EXPECT_EQ(edges, std::vector<Edge>(k4.edges().begin(), k4.edges().end()));
}

TEST(RandomRegular, DegreesAndHandshake) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Graph g = random_regular(10, 3, {s, 0});
    EXPECT_EQ(g.edge_count(), 15u);
    expect_regular(g, 3);
    expect_adjacency_consistent(g);
  }
  EXPECT_THROW(random_regular(9, 3, {}), ValidationError);
  EXPECT_THROW(random_regular(3, 3, {}), ValidationError);
  EXPECT_THROW(random_regular(10, 2, {}), ValidationError);
}

TEST(RandomRegular, DeterministicPerSeed) {
  EXPECT_EQ(random_regular(500, 3, {5, 2}), random_regular(500, 3, {5, 2}));
  EXPECT_FALSE(random_regular(500, 3, {5, 2}) == random_regular(500, 3, {5, 3}));
}

// Labelled 3-regular graphs on 6 vertices, sampled many times, against the
// exhaustive list: uniform sampling gives a flat histogram.
TEST(RandomRegular, UniformOverExhaustiveEnumeration) {
  const auto all = oracle::all_regular_graphs(6, 3);
  ASSERT_EQ(all.size(), 70u);
  std::map<std::vector<Edge>, int> index;
  for (std::size_t i = 0; i < all.size(); ++i) {
    index[all[i]] = static_cast<int>(i);
  }
  const int samples = 70000;
  std::vector<int> counts(all.size(), 0);
  for (int s = 0; s < samples; ++s) {
    const Graph g = random_regular(6, 3, {2024, std::uint64_t(s)});
    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    std::sort(edges.begin(), edges.end());
    auto it = index.find(edges);
    ASSERT_NE(it, index.end());
    ++counts[it->second];
  }
  const double expected = double(samples) / double(all.size());
  double chi2 = 0;
  for (int c : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
  }
  EXPECT_LT(chi2, 111.3);  // 99.9% quantile of chi-square with 69 degrees of freedom
}

TEST(Lattices, HypercubeAndTorus) {
  const Graph q3 = hypercube(3);
  EXPECT_EQ(q3.vertex_count(), 8u);
  EXPECT_EQ(q3.edge_count(), 12u);
  expect_regular(q3, 3);
  expect_adjacency_consistent(q3);

  const Graph t32 = torus(3, 2);
  EXPECT_EQ(t32.vertex_count(), 9u);
  EXPECT_EQ(t32.edge_count(), 18u);
  expect_regular(t32, 4);

  const Graph c4 = torus(4, 1);
  EXPECT_EQ(c4.edge_count(), 4u);
  expect_regular(c4, 2);
  EXPECT_EQ(oracle::diameter(Component::from_graph(c4)), 2);

  EXPECT_THROW(torus(2, 2), ValidationError);
  EXPECT_THROW(hypercube(0), ValidationError);
  EXPECT_THROW(torus(1 << 16, 3), ValidationError);
}

TEST(Percolate, Extremes) {
  const Graph g = complete_graph(30);
  EXPECT_EQ(percolate(g, 1.0, {1, 0}).retained_count(), g.edge_count());
  EXPECT_EQ(percolate(g, 0.0, {1, 0}).retained_count(), 0u);
  EXPECT_THROW(percolate(g, 1.5, {}), ValidationError);
  EXPECT_THROW(percolate(g, -0.1, {}), ValidationError);
}

TEST(Percolate, RetainedFractionOnK1000) {
  const Graph g = complete_graph(1000);
  const double m = double(g.edge_count());
  const int masks = 200;
  double total = 0;
  for (int s = 0; s < masks; ++s) {
    total += double(percolate(g, 0.5, {9, std::uint64_t(s)}).retained_count());
  }
  const double mean_fraction = total / (masks * m);
  const double sigma = std::sqrt(0.25 / (masks * m));
  EXPECT_NEAR(mean_fraction, 0.5, 3 * sigma);
}

TEST(Percolate, RetainedCountIsBinomial) {
  const Graph g = random_regular(200, 3, {4, 0});
  const double m = double(g.edge_count());
  const double p = 0.3;
  const int masks = 10000;
  double total = 0;
  for (int s = 0; s < masks; ++s) {
    total += double(percolate(g, p, {8, std::uint64_t(s)}).retained_count());
  }
  const double z = (total - masks * m * p) / std::sqrt(masks * m * p * (1 - p));
  EXPECT_LT(std::abs(z), 4.0);
}

TEST(Percolate, CouplingIsMonotone) {
  const Graph g = random_regular(300, 3, {1, 0});
  const PercolationMask mask = percolate(g, 0.4, {77, 5});
  const PercolationMask lower = mask.at(0.35);
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (lower.retained(e)) {
      EXPECT_TRUE(mask.retained(e));
    }
  }
  const Partition small(g, lower);
  const Partition big(g, mask);
  for (VertexId a = 0; a < g.vertex_count(); ++a) {
    for (const Incidence& inc : g.neighbors(a)) {
      if (small.rank_of(a) == small.rank_of(inc.neighbor)) {
        EXPECT_EQ(big.rank_of(a), big.rank_of(inc.neighbor));
      }
    }
  }
}

TEST(Percolate, DeterministicPerSeed) {
  const Graph g = hypercube(8);
  const auto a = percolate(g, 0.2, {3, 9});
  const auto b = percolate(g, 0.2, {3, 9});
  EXPECT_TRUE(std::equal(a.edge_uniforms().begin(), a.edge_uniforms().end(),
                         b.edge_uniforms().begin()));
  const auto c = percolate(g, 0.2, {3, 10});
  EXPECT_FALSE(std::equal(a.edge_uniforms().begin(), a.edge_uniforms().end(),
                          c.edge_uniforms().begin()));
}

TEST(Percolate, ImplicitSamplerIsUncoupled) {
  const Graph g = Graph::implicit_complete(5000);
  const auto mask = percolate(g, 1.0 / 5000, {5, 1});
  EXPECT_FALSE(mask.coupled());
  const auto edges = mask.retained_edges(g);
  EXPECT_EQ(edges.size(), mask.retained_count());
  for (const Edge& e : edges) {
    EXPECT_LT(e.u, e.v);
    EXPECT_LT(e.v, 5000u);
  }
  EXPECT_EQ(std::adjacent_find(edges.begin(), edges.end()), edges.end());
  EXPECT_THROW(mask.at(0.1), ValidationError);
  EXPECT_EQ(percolate(g, 1.0 / 5000, {5, 1}).retained_edges(g), edges);
}

TEST(EdgeList, RoundTrip) {
  const Graph k3 = complete_graph(3);
  std::ostringstream out;
  write_edge_list(k3, out);
  EXPECT_EQ(out.str(), "3 3\n0 1\n0 2\n1 2\n");
  std::istringstream in(out.str());
  EXPECT_EQ(read_edge_list(in), k3);

  std::ostringstream empty;
  write_edge_list(Graph::from_edges(5, {}), empty);
  EXPECT_EQ(empty.str(), "5 0\n");

  const Graph g = random_regular(50, 3, {2, 2});
  const auto path = std::filesystem::temp_directory_path() / "critwalk_roundtrip.txt";
  save_edge_list(g, path);
  EXPECT_EQ(load_edge_list(path), g);
  std::filesystem::remove(path);
}

TEST(EdgeList, RejectsBadFiles) {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_edge_list(in);
  };
  EXPECT_THROW(parse("3 1\n2 2\n"), ValidationError);
  EXPECT_THROW(parse("3 2\n0 1\n0 1\n"), ValidationError);
  EXPECT_THROW(parse("3 1\n0 x\n"), ValidationError);
  EXPECT_THROW(parse("3 2\n0 1\n"), ValidationError);
  EXPECT_THROW(parse("3 1\n0 5\n"), ValidationError);
  EXPECT_THROW(parse(""), ValidationError);
  EXPECT_THROW(load_edge_list("/nonexistent/critwalk.txt"), ValidationError);
}

}  // namespace
}  // namespace critwalk
