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
#include <vector>

#include "critwalk/components.hpp"
#include "critwalk/graph.hpp"
#include "critwalk/percolation.hpp"
#include "critwalk/rng.hpp"

namespace critwalk {

// Lane counts for (v, r). An edge from level j-1 to level j of the BFS from v
// is a lane when level r can be reached from its level-j endpoint without
// stepping back onto level j-1. Since BFS levels of adjacent vertices differ
// by at most one, such a path never visits any level below j, so reachability
// is decided inside the subgraph induced on levels j..r.
struct LaneReport {
  LocalId v = 0;
  std::uint32_t r = 0;
  std::vector<std::uint32_t> lanes_per_level;  // index j in [0, r]; entry 0 is unused

  std::uint32_t lanes(std::uint32_t j) const { return lanes_per_level.at(j); }
};

LaneReport lanes(const Component& c, LocalId v, std::uint32_t r);
LaneReport lanes(const Component& c, const BfsLayers& layers, std::uint32_t r);

// True iff strictly more than half of the integer levels j with
// ceil(k/2) <= j <= k carry at least L lanes. Requires 1 <= k < report.r.
bool is_lane_rich(const LaneReport& report, std::uint32_t L, std::uint32_t k);

struct LevelFlags {
  bool thin = false;  // |level j| <= 8h
  bool good = false;  // some w in level j reaches level j+span through levels > j only
};

std::vector<LevelFlags> thin_good_levels(const Component& c, LocalId v, std::uint32_t h,
                                         std::uint32_t span);

// X = |{v : diam(C(v)) > R}|.
std::uint64_t count_large_diam_vertices(const Graph& g, const PercolationMask& mask,
                                        std::uint32_t R);
// Y = |{v : |C(v)| > M and diam(C(v)) < r}|.
std::uint64_t count_large_small(const Graph& g, const PercolationMask& mask, std::uint64_t M,
                                std::uint32_t r);

// Exact decision of diam(c) > R without computing the diameter when the
// double-sweep bounds already settle it.
bool diameter_exceeds(const Component& c, std::uint32_t R);

struct ConditionRow {
  std::uint32_t k = 0;
  double mean_edges = 0.0;       // E|E(B_p(v,k))|
  double mean_edges_se = 0.0;
  double edges_per_k = 0.0;      // mean_edges / k
  double edges_per_k_se = 0.0;
  double survival = 0.0;         // P(|dB_p(v,k)| > 0)
  double survival_se = 0.0;
  double k_survival = 0.0;       // k * survival
  double k_survival_se = 0.0;
};

struct ConditionTable {
  std::uint64_t trials = 0;
  std::vector<ConditionRow> rows;  // k = 1..k_max
  double c1_hat = 0.0;             // max_k mean_edges / k
  double c1_hat_se = 0.0;
  std::uint32_t c1_argmax = 0;
  double c2_hat = 0.0;             // max_k k * survival
  double c2_hat_se = 0.0;
  std::uint32_t c2_argmax = 0;

  // One-sided check: every k satisfies estimate <= c + sigmas * se.
  bool satisfies_c1(double c1, double sigmas) const;
  bool satisfies_c2(double c2, double sigmas) const;
};

// Monte Carlo estimates of the edge-volume and survival conditions over a
// uniformly random root and a fresh mask per trial (stream = seed.stream_id + t).
// Requires an explicit host, 1 <= k_max <= ceil(n^{1/3}) and trials >= 1.
ConditionTable estimate_conditions(const Graph& g, double p, std::uint32_t k_max,
                                   std::uint64_t trials, RngSeed seed);

}  // namespace critwalk
