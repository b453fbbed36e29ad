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

// Slow, independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "critwalk/components.hpp"
#include "critwalk/graph.hpp"

namespace critwalk::oracle {

inline constexpr int kFar = std::numeric_limits<int>::max() / 4;

inline std::vector<std::vector<int>> floyd_warshall(const Component& c) {
  const std::size_t n = c.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kFar));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
  }
  for (const LocalEdge& e : c.edges()) {
    d[e.a][e.b] = d[e.b][e.a] = 1;
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  }
  return d;
}

inline int diameter(const Component& c) {
  int best = 0;
  for (const auto& row : floyd_warshall(c)) {
    for (int x : row) {
      best = std::max(best, x);
    }
  }
  return best;
}

// Depth-first search over simple paths from `start` that never enter a
// vertex with forbidden[x]; true once a vertex with target[x] is reached.
inline bool simple_path_exists(const Component& c, LocalId start,
                               const std::vector<char>& forbidden,
                               const std::vector<char>& target) {
  std::vector<char> on_path(c.size(), 0);
  std::function<bool(LocalId)> extend = [&](LocalId x) {
    if (target[x]) {
      return true;
    }
    on_path[x] = 1;
    for (LocalId y : c.neighbors(x)) {
      if (!on_path[y] && !forbidden[y] && extend(y)) {
        return true;
      }
    }
    on_path[x] = 0;
    return false;
  };
  return !forbidden[start] && extend(start);
}

// Lanes at level j for (v, r) straight from the definition.
inline std::uint32_t lanes_at(const Component& c, LocalId v, std::uint32_t r, std::uint32_t j) {
  const auto d = floyd_warshall(c);
  std::vector<char> level_before(c.size(), 0);
  std::vector<char> at_r(c.size(), 0);
  for (LocalId x = 0; x < c.size(); ++x) {
    level_before[x] = d[v][x] == int(j) - 1;
    at_r[x] = d[v][x] == int(r);
  }
  std::uint32_t count = 0;
  for (const LocalEdge& e : c.edges()) {
    LocalId lo = e.a;
    LocalId hi = e.b;
    if (d[v][lo] > d[v][hi]) {
      std::swap(lo, hi);
    }
    if (d[v][lo] == int(j) - 1 && d[v][hi] == int(j)) {
      count += simple_path_exists(c, hi, level_before, at_r);
    }
  }
  return count;
}

// Level j is good when some w at level j starts a path to level j + span that
// meets B(v, j) only in w.
inline bool level_good(const Component& c, LocalId v, std::uint32_t j, std::uint32_t span) {
  const auto d = floyd_warshall(c);
  for (LocalId w = 0; w < c.size(); ++w) {
    if (d[v][w] != int(j)) {
      continue;
    }
    std::vector<char> forbidden(c.size(), 0);
    std::vector<char> target(c.size(), 0);
    for (LocalId x = 0; x < c.size(); ++x) {
      forbidden[x] = x != w && d[v][x] <= int(j);
      target[x] = d[v][x] == int(j + span);
    }
    if (simple_path_exists(c, w, forbidden, target)) {
      return true;
    }
  }
  return false;
}

inline Eigen::MatrixXd laplacian(const Component& c) {
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const LocalEdge& e : c.edges()) {
    l(e.a, e.a) += 1;
    l(e.b, e.b) += 1;
    l(e.a, e.b) -= 1;
    l(e.b, e.a) -= 1;
  }
  return l;
}

// Effective resistances from the Moore-Penrose inverse (L + J/n)^{-1} - J/n.
inline Eigen::MatrixXd resistance_pinv(const Component& c) {
  const auto n = static_cast<Eigen::Index>(c.size());
  const Eigen::MatrixXd j = Eigen::MatrixXd::Constant(n, n, 1.0 / double(n));
  const Eigen::MatrixXd g = (laplacian(c) + j).inverse() - j;
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      r(x, y) = g(x, x) + g(y, y) - 2 * g(x, y);
    }
  }
  return r;
}

inline Eigen::MatrixXd lazy_transition(const Component& c) {
  const auto n = static_cast<Eigen::Index>(c.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (LocalId x = 0; x < c.size(); ++x) {
    p(x, x) = c.degree(x) ? 0.5 : 1.0;
    for (LocalId y : c.neighbors(x)) {
      p(x, y) = 0.5 / c.degree(x);
    }
  }
  return p;
}

// E_x(tau_z) for all x from the first-step equations h = 1 + P h, h(z) = 0.
inline Eigen::VectorXd hitting_times_to(const Component& c, LocalId z) {
  const auto n = static_cast<Eigen::Index>(c.size());
  const Eigen::MatrixXd p = lazy_transition(c);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - p;
  Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  a.row(z).setZero();
  a(z, z) = 1.0;
  b[z] = 0.0;
  return a.fullPivLu().solve(b);
}

// Least t with max_x TV(p^t(x,.), pi) <= 1/4, stepping every row forward one
// lazy step at a time.
inline std::uint64_t mixing_time_by_iteration(const Component& c, double* tv_at = nullptr) {
  const auto n = static_cast<Eigen::Index>(c.size());
  if (n == 1) {
    return 0;
  }
  Eigen::VectorXd pi(n);
  for (LocalId x = 0; x < c.size(); ++x) {
    pi[x] = double(c.degree(x)) / (2.0 * double(c.edge_count()));
  }
  const Eigen::MatrixXd p = lazy_transition(c);
  Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(n, n);
  for (std::uint64_t t = 0;; ++t) {
    double worst = 0;
    for (Eigen::Index x = 0; x < n; ++x) {
      worst = std::max(worst, 0.5 * (rows.row(x).transpose() - pi).cwiseAbs().sum());
    }
    if (worst <= 0.25) {
      if (tv_at) {
        *tv_at = worst;
      }
      return t;
    }
    rows = rows * p;
  }
}

// P(|T| = m) for the GW tree by listing every sequence of offspring counts in
// breadth-first order that dies out after exactly m individuals.
inline double gw_mass_by_enumeration(std::uint32_t d, double p, std::uint32_t m) {
  auto binom = [](std::uint32_t n, std::uint32_t k, double q) {
    double c = 1;
    for (std::uint32_t i = 1; i <= k; ++i) {
      c = c * (n - k + i) / i;
    }
    return c * std::pow(q, k) * std::pow(1 - q, n - k);
  };
  double total = 0;
  // alive: individuals born but not yet processed.
  std::function<void(std::uint32_t, std::uint32_t, double)> walk = [&](std::uint32_t processed,
                                                                       std::uint32_t alive,
                                                                       double prob) {
    if (alive == 0) {
      if (processed == m) {
        total += prob;
      }
      return;
    }
    if (processed + alive > m) {
      return;
    }
    const std::uint32_t slots = processed == 0 ? d : d - 1;
    for (std::uint32_t k = 0; k <= slots; ++k) {
      walk(processed + 1, alive - 1 + k, prob * binom(slots, k, p));
    }
  };
  walk(0, 1, 1.0);
  return total;
}

// P(|T| = m) from the hitting-time identity for sums of subtree sizes:
//   P(S_k = j) = (k / j) P(Bin((d-1) j, p) = j - k).
inline double gw_mass_closed_form(std::uint32_t d, double p, std::uint64_t m) {
  auto log_binom_pmf = [](double n, double k, double q) {
    if (k < 0 || k > n) {
      return -std::numeric_limits<double>::infinity();
    }
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1) + k * std::log(q) +
           (n - k) * std::log1p(-q);
  };
  double total = 0;
  const std::uint64_t j = m - 1;
  for (std::uint32_t k = 0; k <= d; ++k) {
    const double root = std::exp(log_binom_pmf(d, k, p));
    double s;
    if (k == 0) {
      s = j == 0 ? 1.0 : 0.0;
    } else if (j == 0) {
      s = 0.0;
    } else {
      s = double(k) / double(j) *
          std::exp(log_binom_pmf(double(d - 1) * double(j), double(j) - double(k), p));
    }
    total += root * s;
  }
  return total;
}

// Every labelled simple d-regular graph on n vertices (small n only).
inline std::vector<std::vector<Edge>> all_regular_graphs(VertexId n, std::uint32_t d) {
  std::vector<Edge> pairs;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      pairs.push_back({u, v});
    }
  }
  std::vector<std::vector<Edge>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
    std::vector<std::uint32_t> deg(n, 0);
    std::vector<Edge> edges;
    bool ok = true;
    for (std::size_t i = 0; i < pairs.size() && ok; ++i) {
      if (mask >> i & 1) {
        edges.push_back(pairs[i]);
        ok = ++deg[pairs[i].u] <= d && ++deg[pairs[i].v] <= d;
      }
    }
    if (ok && std::all_of(deg.begin(), deg.end(), [&](std::uint32_t x) { return x == d; })) {
      out.push_back(edges);
    }
  }
  return out;
}

}  // namespace critwalk::oracle

namespace critwalk::oracle {

// R(v <-> U) from the pseudo-inverse of the Laplacian of the graph in which U
// has been merged into one node (parallel edges kept as conductance).
inline double resistance_to_set_glued(const Component& c, LocalId v,
                                      const std::vector<LocalId>& targets) {
  std::vector<Eigen::Index> node(c.size(), -1);
  for (LocalId u : targets) {
    node[u] = 0;
  }
  Eigen::Index next = 1;
  for (LocalId x = 0; x < c.size(); ++x) {
    if (node[x] < 0) {
      node[x] = next++;
    }
  }
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(next, next);
  for (const LocalEdge& e : c.edges()) {
    const auto a = node[e.a];
    const auto b = node[e.b];
    if (a == b) {
      continue;
    }
    l(a, a) += 1;
    l(b, b) += 1;
    l(a, b) -= 1;
    l(b, a) -= 1;
  }
  const Eigen::MatrixXd j = Eigen::MatrixXd::Constant(next, next, 1.0 / double(next));
  const Eigen::MatrixXd g = (l + j).inverse() - j;
  const auto s = node[v];
  return g(s, s) + g(0, 0) - 2 * g(s, 0);
}

}  // namespace critwalk::oracle
