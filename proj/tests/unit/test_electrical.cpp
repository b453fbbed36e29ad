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

#include <cmath>
#include <random>

#include "critwalk/components.hpp"
#include "critwalk/electrical.hpp"
#include "critwalk/errors.hpp"
#include "critwalk/graph.hpp"
#include "oracles/oracles.hpp"
#include "oracles/samples.hpp"

namespace critwalk {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(Resistance, SeriesAndParallel) {
  const ResistanceNetwork path(Component::from_graph(path_graph(8)));
  EXPECT_NEAR(effective_resistance(path, 0, 7), 7.0, 1e-12);
  const ResistanceNetwork c4(Component::from_graph(cycle_graph(4)));
  EXPECT_NEAR(effective_resistance(c4, 0, 2), 1.0, 1e-12);
  EXPECT_NEAR(effective_resistance(c4, 0, 1), 0.75, 1e-12);
  EXPECT_EQ(effective_resistance(c4, 3, 3), 0.0);
  EXPECT_THROW(effective_resistance(c4, 0, 4), ValidationError);
}

TEST(Resistance, SingleVertexAndDisconnected) {
  const ResistanceNetwork one(Component::from_graph(path_graph(1)));
  EXPECT_EQ(effective_resistance(one, 0, 0), 0.0);
  EXPECT_THROW(Component::from_graph(Graph::from_edges(3, {{0, 1}})), ValidationError);
}

TEST(Resistance, MatchesPseudoInverse) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Component c = sample::connected_component(10 + VertexId(s * 3), s, 40 + s);
    const ResistanceNetwork net(c);
    const Eigen::MatrixXd oracle_r = oracle::resistance_pinv(c);
    const auto dist = oracle::floyd_warshall(c);
    for (LocalId x = 0; x < c.size(); ++x) {
      for (LocalId y = 0; y < c.size(); ++y) {
        const double r = effective_resistance(net, x, y);
        EXPECT_LE(rel(r, oracle_r(x, y)), 1e-10);
        EXPECT_GE(r, 0.0);
        EXPECT_LE(r, dist[x][y] + 1e-12);
      }
    }
  }
}

TEST(Resistance, IterativeSolverAgreesWithDense) {
  const Component c = sample::connected_component(150, 60, 77);
  const ResistanceNetwork dense(c);
  const ResistanceNetwork sparse(c, 0);
  EXPECT_TRUE(dense.uses_dense_solver());
  EXPECT_FALSE(sparse.uses_dense_solver());
  EXPECT_THROW(sparse.resistance_matrix(), CapExceeded);
  for (LocalId x : {0u, 5u, 17u, 149u}) {
    for (LocalId y : {1u, 33u, 120u}) {
      EXPECT_LE(rel(effective_resistance(sparse, x, y), effective_resistance(dense, x, y)), 1e-8);
    }
    EXPECT_LE(rel(hitting_time_tetali(sparse, x, 42), hitting_time_tetali(dense, x, 42)), 1e-8);
  }
  const std::vector<LocalId> targets{3, 90, 140};
  EXPECT_LE(rel(effective_resistance_to_set(sparse, 0, targets),
                effective_resistance_to_set(dense, 0, targets)),
            1e-8);
}

TEST(Resistance, MetricProperties) {
  std::mt19937_64 rng(5);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Component c = sample::connected_component(40, 25, 300 + s);
    const ResistanceNetwork net(c);
    std::uniform_int_distribution<LocalId> pick(0, LocalId(c.size() - 1));
    for (int t = 0; t < 30; ++t) {
      const LocalId u = pick(rng);
      const LocalId v = pick(rng);
      const LocalId w = pick(rng);
      EXPECT_LE(effective_resistance(net, u, v),
                effective_resistance(net, u, w) + effective_resistance(net, w, v) + 1e-12);
    }
    // Rayleigh: removing a non-bridge edge cannot lower any resistance.
    const Graph full = c.as_graph();
    for (std::size_t drop = 0; drop < full.edges().size(); ++drop) {
      std::vector<Edge> kept;
      for (std::size_t i = 0; i < full.edges().size(); ++i) {
        if (i != drop) {
          kept.push_back(full.edges()[i]);
        }
      }
      Component smaller;
      try {
        smaller = Component::from_graph(Graph::from_edges(full.vertex_count(), kept));
      } catch (const ValidationError&) {
        continue;  // bridge
      }
      const ResistanceNetwork thinner(smaller);
      const LocalId a = pick(rng);
      const LocalId b = pick(rng);
      EXPECT_GE(effective_resistance(thinner, a, b) + 1e-12, effective_resistance(net, a, b));
      break;
    }
  }
}

TEST(ResistanceToSet, HandCases) {
  const ResistanceNetwork star(Component::from_graph(star_graph(5)));
  EXPECT_NEAR(effective_resistance_to_set(star, 0, {1, 2, 3, 4, 5}), 0.2, 1e-12);
  const ResistanceNetwork path(Component::from_graph(path_graph(6)));
  EXPECT_NEAR(effective_resistance_to_set(path, 0, {5}), 5.0, 1e-12);
  EXPECT_THROW(effective_resistance_to_set(path, 0, {}), ValidationError);
  EXPECT_THROW(effective_resistance_to_set(path, 0, {0, 3}), ValidationError);
}

TEST(ResistanceToSet, MatchesExplicitGlue) {
  for (std::uint64_t s = 0; s < 15; ++s) {
    const Component c = sample::connected_component(50, 20 + s, 600 + s);
    const ResistanceNetwork net(c);
    const auto layers = bfs_layers(c, 0);
    const std::uint32_t r = std::max(1u, layers.depth() / 2 + 1);
    const auto& targets = layers.layers[r];
    EXPECT_LE(rel(effective_resistance_to_set(net, 0, targets),
                  oracle::resistance_to_set_glued(c, 0, targets)),
              1e-10);
  }
}

// Cut-sets between consecutive BFS levels separate v from the level-r sphere.
CutsetFamily level_cutsets(const Component& c, LocalId v, std::uint32_t r) {
  const auto layers = bfs_layers(c, v);
  CutsetFamily family;
  family.source = v;
  family.targets = layers.layers[r];
  family.cutsets.resize(r);
  for (const LocalEdge& e : c.edges()) {
    const auto la = layers.level_of[e.a];
    const auto lb = layers.level_of[e.b];
    if (la != lb && std::max(la, lb) <= r) {
      family.cutsets[std::max(la, lb) - 1].push_back(e);
    }
  }
  return family;
}

TEST(NashWilliams, HandCases) {
  const Component path = Component::from_graph(path_graph(7));
  const auto family = level_cutsets(path, 0, 6);
  EXPECT_NEAR(nash_williams_bound(path, family), 6.0, 1e-12);

  const Component c4 = Component::from_graph(cycle_graph(4));
  const auto pairs = level_cutsets(c4, 0, 2);
  ASSERT_EQ(pairs.cutsets.size(), 2u);
  EXPECT_EQ(pairs.cutsets[0].size(), 2u);
  EXPECT_NEAR(nash_williams_bound(c4, pairs), 1.0, 1e-12);
  EXPECT_NEAR(effective_resistance_to_set(ResistanceNetwork(c4), 0, pairs.targets), 1.0, 1e-12);
}

TEST(NashWilliams, RejectsBadFamilies) {
  const Component c4 = Component::from_graph(cycle_graph(4));
  CutsetFamily family = level_cutsets(c4, 0, 2);
  CutsetFamily overlap = family;
  overlap.cutsets[1].push_back(overlap.cutsets[0][0]);
  EXPECT_THROW(nash_williams_bound(c4, overlap), ValidationError);
  CutsetFamily leaky = family;
  leaky.cutsets[0].pop_back();
  EXPECT_THROW(nash_williams_bound(c4, leaky), ValidationError);
  CutsetFamily bogus = family;
  bogus.cutsets[0].push_back({0, 2});
  EXPECT_THROW(nash_williams_bound(c4, bogus), ValidationError);
}

TEST(NashWilliams, NeverExceedsResistance) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Component c = sample::connected_component(60, s, 800 + s);
    const auto layers = bfs_layers(c, 0);
    for (std::uint32_t r = 1; r <= layers.depth(); ++r) {
      const auto family = level_cutsets(c, 0, r);
      const double bound = nash_williams_bound(c, family);
      const double actual = effective_resistance_to_set(ResistanceNetwork(c), 0, family.targets);
      EXPECT_LE(bound, actual + 1e-12);
    }
  }
}

TEST(Hitting, TwoStateChain) {
  const ResistanceNetwork k2(Component::from_graph(path_graph(2)));
  EXPECT_NEAR(hitting_time_tetali(k2, 0, 1), 2.0, 1e-12);
  EXPECT_EQ(hitting_time_tetali(k2, 1, 1), 0.0);
  EXPECT_NEAR(effective_resistance(k2, 0, 1) * 4 * 1, 4.0, 1e-12);
  EXPECT_LE(commute_identity_check(k2, 0, 1), 1e-12);
}

TEST(Hitting, MatchesFirstStepEquations) {
  for (std::uint64_t s = 0; s < 25; ++s) {
    const Component c = sample::connected_component(20 + VertexId(3 * s), s * 2, 1000 + s);
    const ResistanceNetwork net(c);
    const LocalId z = LocalId(s % c.size());
    const Eigen::VectorXd oracle_h = oracle::hitting_times_to(c, z);
    const Eigen::MatrixXd h = hitting_time_matrix(net);
    for (LocalId v = 0; v < c.size(); ++v) {
      EXPECT_LE(rel(hitting_time_tetali(net, v, z), oracle_h[v]), 1e-8);
      EXPECT_LE(rel(h(v, z), oracle_h[v]), 1e-8);
    }
  }
}

TEST(Commute, PathEnds) {
  for (VertexId n = 2; n <= 30; n += 7) {
    const Component c = Component::from_graph(path_graph(n));
    const ResistanceNetwork net(c);
    const double commute = hitting_time_tetali(net, 0, n - 1) + hitting_time_tetali(net, n - 1, 0);
    EXPECT_LE(rel(commute, 4.0 * (n - 1) * (n - 1)), 1e-10);
    const auto to_end = oracle::hitting_times_to(c, n - 1);
    const auto to_start = oracle::hitting_times_to(c, 0);
    EXPECT_LE(rel(to_end[0] + to_start[n - 1], 4.0 * (n - 1) * (n - 1)), 1e-10);
    EXPECT_LE(commute_identity_check(net, 0, n - 1), 1e-8);
  }
}

}  // namespace
}  // namespace critwalk
