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

#include "critwalk/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "critwalk/errors.hpp"
#include "critwalk/union_find.hpp"

namespace critwalk {
namespace {

std::uint32_t ceil_cube_root(std::uint64_t n) {
  auto c = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(n)));
  while (c * c * c < n) {
    ++c;
  }
  while (c > 0 && (c - 1) * (c - 1) * (c - 1) >= n) {
    --c;
  }
  return static_cast<std::uint32_t>(c);
}

}  // namespace

LaneReport lanes(const Component& c, LocalId v, std::uint32_t r) {
  return lanes(c, bfs_layers(c, v), r);
}

LaneReport lanes(const Component& c, const BfsLayers& layers, std::uint32_t r) {
  if (r == 0) {
    throw ValidationError("lanes: r must be at least 1");
  }
  if (r > layers.depth()) {
    throw ValidationError("lanes: r = " + std::to_string(r) + " exceeds the eccentricity " +
                          std::to_string(layers.depth()) + " of v");
  }
  const auto& level = layers.level_of;
  LaneReport report;
  report.v = layers.origin;
  report.r = r;
  report.lanes_per_level.assign(r + 1, 0);

  // Grow the allowed region downward from level r one level at a time. After
  // level j is added, a vertex of level >= j is "live" iff its component in
  // the subgraph induced on levels j..r contains a level-r vertex.
  DisjointSets sets(static_cast<std::uint32_t>(c.size()));
  std::vector<char> touches_top(c.size(), 0);
  for (LocalId x : layers.layers[r]) {
    touches_top[x] = 1;
  }
  auto join = [&](LocalId a, LocalId b) {
    const auto ra = sets.find(a);
    const auto rb = sets.find(b);
    if (ra == rb) {
      return;
    }
    const char flag = touches_top[ra] | touches_top[rb];
    const auto root = sets.unite(ra, rb);
    touches_top[root] = flag;
  };

  for (std::uint32_t j = r; j >= 1; --j) {
    for (LocalId x : layers.layers[j]) {
      for (LocalId y : c.neighbors(x)) {
        if (level[y] >= j && level[y] <= r) {
          join(x, y);
        }
      }
    }
    std::uint32_t count = 0;
    for (LocalId x : layers.layers[j]) {
      if (!touches_top[sets.find(x)]) {
        continue;
      }
      for (LocalId y : c.neighbors(x)) {
        if (level[y] + 1 == j) {
          ++count;
        }
      }
    }
    report.lanes_per_level[j] = count;
  }
  return report;
}

bool is_lane_rich(const LaneReport& report, std::uint32_t L, std::uint32_t k) {
  if (k == 0) {
    throw ValidationError("is_lane_rich: empty level range for k = 0");
  }
  if (k >= report.r) {
    throw ValidationError("is_lane_rich: requires k < r");
  }
  const std::uint32_t first = (k + 1) / 2;
  std::uint32_t levels = 0;
  std::uint32_t rich = 0;
  for (std::uint32_t j = first; j <= k; ++j) {
    ++levels;
    if (report.lanes(j) >= L) {
      ++rich;
    }
  }
  return 2 * rich > levels;
}

std::vector<LevelFlags> thin_good_levels(const Component& c, LocalId v, std::uint32_t h,
                                         std::uint32_t span) {
  if (h == 0) {
    throw ValidationError("thin_good_levels: h must be at least 1");
  }
  const BfsLayers layers = bfs_layers(c, v);
  const auto& level = layers.level_of;
  const std::uint32_t depth = layers.depth();
  std::vector<LevelFlags> flags(depth + 1);

  std::vector<std::uint32_t> mark(c.size(), std::numeric_limits<std::uint32_t>::max());
  std::vector<LocalId> stack;
  for (std::uint32_t j = 0; j <= depth; ++j) {
    flags[j].thin = layers.layers[j].size() <= 8ull * h;
    const std::uint64_t target = static_cast<std::uint64_t>(j) + span;
    if (target > depth) {
      continue;
    }
    if (span == 0) {
      flags[j].good = !layers.layers[j].empty();
      continue;
    }
    // Search from level j+1 inside levels (j, target]; marks are stamped with j
    // so no per-level reset is needed.
    stack.clear();
    for (LocalId w : layers.layers[j]) {
      for (LocalId y : c.neighbors(w)) {
        if (level[y] == j + 1 && mark[y] != j) {
          mark[y] = j;
          stack.push_back(y);
        }
      }
    }
    bool good = false;
    while (!stack.empty() && !good) {
      const LocalId x = stack.back();
      stack.pop_back();
      if (level[x] == target) {
        good = true;
        break;
      }
      for (LocalId y : c.neighbors(x)) {
        if (level[y] > j && level[y] <= target && mark[y] != j) {
          mark[y] = j;
          stack.push_back(y);
        }
      }
    }
    flags[j].good = good;
  }
  return flags;
}

bool diameter_exceeds(const Component& c, std::uint32_t R) {
  if (c.size() <= static_cast<std::size_t>(R) + 1) {
    return false;  // diam <= size - 1 <= R
  }
  const DiameterBounds bounds = diameter_bounds(c);
  if (bounds.lower > R) {
    return true;
  }
  if (bounds.upper <= R) {
    return false;
  }
  for (LocalId x = 0; x < c.size(); ++x) {
    if (eccentricity(c, x) > R) {
      return true;
    }
  }
  return false;
}

std::uint64_t count_large_diam_vertices(const Graph& g, const PercolationMask& mask,
                                        std::uint32_t R) {
  const Partition partition(g, mask);
  std::uint64_t total = 0;
  for (std::size_t rank = 0; rank < partition.component_count(); ++rank) {
    if (partition.size(rank) <= static_cast<std::uint64_t>(R) + 1) {
      break;  // sizes are non-increasing from here on
    }
    if (diameter_exceeds(partition.extract(rank), R)) {
      total += partition.size(rank);
    }
  }
  return total;
}

std::uint64_t count_large_small(const Graph& g, const PercolationMask& mask, std::uint64_t M,
                                std::uint32_t r) {
  if (r == 0) {
    return 0;
  }
  const Partition partition(g, mask);
  std::uint64_t total = 0;
  for (std::size_t rank = 0; rank < partition.component_count(); ++rank) {
    if (partition.size(rank) <= M) {
      break;
    }
    if (!diameter_exceeds(partition.extract(rank), r - 1)) {
      total += partition.size(rank);
    }
  }
  return total;
}

bool ConditionTable::satisfies_c1(double c1, double sigmas) const {
  return std::all_of(rows.begin(), rows.end(), [&](const ConditionRow& row) {
    return row.edges_per_k <= c1 + sigmas * row.edges_per_k_se;
  });
}

bool ConditionTable::satisfies_c2(double c2, double sigmas) const {
  return std::all_of(rows.begin(), rows.end(), [&](const ConditionRow& row) {
    return row.k_survival <= c2 + sigmas * row.k_survival_se;
  });
}

ConditionTable estimate_conditions(const Graph& g, double p, std::uint32_t k_max,
                                   std::uint64_t trials, RngSeed seed) {
  if (trials == 0) {
    throw ValidationError("estimate_conditions: trials must be positive");
  }
  if (g.is_implicit()) {
    throw ValidationError("estimate_conditions needs an explicit host graph");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("estimate_conditions: p must lie in [0, 1]");
  }
  const VertexId n = g.vertex_count();
  if (k_max == 0 || k_max > ceil_cube_root(n)) {
    throw ValidationError("estimate_conditions: k_max must lie in [1, ceil(n^{1/3})]");
  }

  std::vector<double> sum_edges(k_max + 1, 0.0);
  std::vector<double> sum_edges_sq(k_max + 1, 0.0);
  std::vector<double> survived(k_max + 1, 0.0);

  constexpr std::uint32_t kFar = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> level(n, kFar);
  std::vector<VertexId> queue;
  std::vector<std::uint64_t> new_edges(k_max + 1);
  std::vector<std::uint64_t> layer_size(k_max + 1);

  for (std::uint64_t t = 0; t < trials; ++t) {
    const RngSeed trial{seed.seed, seed.stream_id + t};
    CounterEngine root_rng(trial, Purpose::kRootChoice);
    const auto v = static_cast<VertexId>(root_rng.below(n));

    queue.clear();
    queue.push_back(v);
    level[v] = 0;
    std::fill(new_edges.begin(), new_edges.end(), 0);
    std::fill(layer_size.begin(), layer_size.end(), 0);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId x = queue[head];
      ++layer_size[level[x]];
      if (level[x] == k_max) {
        continue;
      }
      for (const Incidence& inc : g.neighbors(x)) {
        if (level[inc.neighbor] == kFar && edge_retained(trial, inc.edge, p)) {
          level[inc.neighbor] = level[x] + 1;
          queue.push_back(inc.neighbor);
        }
      }
    }
    // Each retained edge inside the ball is charged to the larger level of its
    // endpoints, which is the smallest k whose ball contains it.
    for (VertexId x : queue) {
      for (const Incidence& inc : g.neighbors(x)) {
        const VertexId y = inc.neighbor;
        if (x < y && level[y] != kFar && edge_retained(trial, inc.edge, p)) {
          ++new_edges[std::max(level[x], level[y])];
        }
      }
    }
    std::uint64_t running = new_edges[0];
    for (std::uint32_t k = 1; k <= k_max; ++k) {
      running += new_edges[k];
      const auto e = static_cast<double>(running);
      sum_edges[k] += e;
      sum_edges_sq[k] += e * e;
      survived[k] += layer_size[k] > 0 ? 1.0 : 0.0;
    }
    for (VertexId x : queue) {
      level[x] = kFar;
    }
  }

  ConditionTable table;
  table.trials = trials;
  const auto count = static_cast<double>(trials);
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    ConditionRow row;
    row.k = k;
    row.mean_edges = sum_edges[k] / count;
    const double var =
        trials > 1 ? std::max(0.0, (sum_edges_sq[k] - count * row.mean_edges * row.mean_edges) /
                                       (count - 1.0))
                   : 0.0;
    row.mean_edges_se = std::sqrt(var / count);
    row.edges_per_k = row.mean_edges / k;
    row.edges_per_k_se = row.mean_edges_se / k;
    row.survival = survived[k] / count;
    row.survival_se = std::sqrt(row.survival * (1.0 - row.survival) / count);
    row.k_survival = k * row.survival;
    row.k_survival_se = k * row.survival_se;
    if (row.edges_per_k > table.c1_hat || table.rows.empty()) {
      table.c1_hat = row.edges_per_k;
      table.c1_hat_se = row.edges_per_k_se;
      table.c1_argmax = k;
    }
    if (row.k_survival > table.c2_hat || table.rows.empty()) {
      table.c2_hat = row.k_survival;
      table.c2_hat_se = row.k_survival_se;
      table.c2_argmax = k;
    }
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace critwalk
