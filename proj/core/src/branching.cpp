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

#include "critwalk/branching.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "critwalk/errors.hpp"
#include "critwalk/percolation.hpp"
#include "critwalk/stats.hpp"
#include "critwalk/union_find.hpp"

namespace critwalk {

__extension__ using Int128 = __int128;
__extension__ using Uint128 = unsigned __int128;
namespace {

constexpr std::uint64_t kExactCoefficientLimit = 60;

double log_binomial_pmf(std::uint64_t trials, std::uint64_t successes, double p) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (successes > trials) {
    return kNegInf;
  }
  if (p == 0.0) {
    return successes == 0 ? 0.0 : kNegInf;
  }
  if (p == 1.0) {
    return successes == trials ? 0.0 : kNegInf;
  }
  const auto n = static_cast<double>(trials);
  const auto k = static_cast<double>(successes);
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1) + k * std::log(p) +
         (n - k) * std::log1p(-p);
}

class Compensated {
 public:
  void add(double x) {
    const double t = sum_ + x;
    carry_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

void finish_overflow(ProgenyPmf& pmf) {
  Compensated acc;
  for (double m : pmf.masses) {
    acc.add(m);
  }
  pmf.overflow = std::max(0.0, 1.0 - acc.value());
}

std::binomial_distribution<std::uint64_t> binomial(std::uint64_t trials, double p) {
  return std::binomial_distribution<std::uint64_t>(trials, p);
}

}  // namespace

void GwSpec::validate() const {
  if (d < 3) {
    throw ValidationError("GW spec: degree must be at least 3");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("GW spec: p must lie in [0, 1]");
  }
}

double ProgenyPmf::mass(std::uint64_t m) const {
  if (m < 1 || m > masses.size()) {
    throw ValidationError("ProgenyPmf::mass: size outside 1.." + std::to_string(masses.size()));
  }
  return masses[m - 1];
}

double ProgenyPmf::tail(std::uint64_t M) const {
  if (M < 1 || M > masses.size() + 1) {
    throw ValidationError("ProgenyPmf::tail: M outside 1.." + std::to_string(masses.size() + 1));
  }
  // Summing from the far end keeps small tails accurate.
  Compensated acc;
  acc.add(overflow);
  for (std::uint64_t m = masses.size(); m >= M; --m) {
    acc.add(masses[m - 1]);
  }
  return acc.value();
}

double ProgenyPmf::normalization_residual() const {
  Compensated acc;
  for (double m : masses) {
    acc.add(m);
  }
  acc.add(overflow);
  acc.add(-1.0);
  return std::abs(acc.value());
}

double binomial_pmf(std::uint64_t trials, std::uint64_t successes, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("binomial_pmf: p outside [0, 1]");
  }
  if (successes > trials) {
    return 0.0;
  }
  if (trials <= kExactCoefficientLimit && p > 0.0 && p < 1.0) {
    Uint128 coefficient = 1;
    for (std::uint64_t i = 1; i <= successes; ++i) {
      coefficient = coefficient * (trials - successes + i) / i;
    }
    return static_cast<double>(coefficient) * std::pow(p, static_cast<double>(successes)) *
           std::pow(1.0 - p, static_cast<double>(trials - successes));
  }
  return std::exp(log_binomial_pmf(trials, successes, p));
}

ProgenyPmf subtree_pmf_exact(const GwSpec& spec, std::uint64_t max_size) {
  spec.validate();
  if (max_size < 1) {
    throw ValidationError("subtree_pmf_exact: max_size must be at least 1");
  }
  ProgenyPmf pmf;
  pmf.masses.resize(max_size);
  const std::uint64_t branching = spec.d - 1;
  for (std::uint64_t m = 1; m <= max_size; ++m) {
    const std::uint64_t trials = branching * m;
    double value = 0.0;
    if (trials <= kExactCoefficientLimit) {
      value = binomial_pmf(trials, m - 1, spec.p) / static_cast<double>(m);
    } else {
      const double log_value = log_binomial_pmf(trials, m - 1, spec.p) - std::log(double(m));
      value = std::exp(log_value);
      if (std::isfinite(log_value) && value < DBL_MIN) {
        ++pmf.underflowed;
      }
    }
    pmf.masses[m - 1] = value;
  }
  finish_overflow(pmf);
  return pmf;
}

ProgenyPmf gw_total_pmf_exact(const GwSpec& spec, std::uint64_t max_size) {
  const ProgenyPmf sub = subtree_pmf_exact(spec, max_size);
  // conv[j] = P(sum of k subtree sizes = j) for j < max_size, built up k = 0..d.
  std::vector<double> conv(max_size, 0.0);
  std::vector<double> next(max_size, 0.0);
  conv[0] = 1.0;
  ProgenyPmf total;
  total.underflowed = sub.underflowed;
  total.masses.assign(max_size, 0.0);
  for (std::uint32_t k = 0; k <= spec.d; ++k) {
    if (k > 0) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::uint64_t j = k; j < max_size; ++j) {
        double acc = 0.0;
        // Subtree sizes are >= 1 and the other k-1 subtrees use >= k-1.
        for (std::uint64_t s = 1; s + (k - 1) <= j; ++s) {
          acc += sub.masses[s - 1] * conv[j - s];
        }
        next[j] = acc;
      }
      conv.swap(next);
    }
    const double root = binomial_pmf(spec.d, k, spec.p);
    for (std::uint64_t m = 1; m <= max_size; ++m) {
      total.masses[m - 1] += root * conv[m - 1];
    }
  }
  finish_overflow(total);
  return total;
}

ProgenySample gw_sample_total(const GwSpec& spec, RngSeed seed, std::uint64_t cap) {
  spec.validate();
  if (cap < 1) {
    throw ValidationError("gw_sample_total: cap must be at least 1");
  }
  CounterEngine engine(seed, Purpose::kBranching);
  std::uint64_t total = 1;
  std::uint64_t generation = binomial(spec.d, spec.p)(engine);
  while (generation > 0) {
    total += generation;
    if (total > cap) {
      return {true, 0};
    }
    generation = binomial((spec.d - 1) * generation, spec.p)(engine);
  }
  return {false, total};
}

TailCheck gw_tail_check(const GwSpec& spec, const std::vector<std::uint64_t>& M_values) {
  spec.validate();
  if (spec.mean_offspring() > 1.0 + 1e-15) {
    throw ValidationError("gw_tail_check: supercritical spec (mean offspring > 1)");
  }
  if (M_values.empty()) {
    return {};
  }
  const std::uint64_t largest = *std::max_element(M_values.begin(), M_values.end());
  if (largest < 1) {
    throw ValidationError("gw_tail_check: M must be at least 1");
  }
  const ProgenyPmf pmf = gw_total_pmf_exact(spec, std::max<std::uint64_t>(1, largest - 1));
  TailCheck out;
  for (std::uint64_t M : M_values) {
    if (M < 1) {
      throw ValidationError("gw_tail_check: M must be at least 1");
    }
    TailRow row{M, pmf.tail(M), 0.0};
    row.scaled = std::sqrt(static_cast<double>(M)) * row.tail;
    out.c_hat = std::max(out.c_hat, row.scaled);
    out.rows.push_back(row);
  }
  return out;
}

double level_mean_exact(const GwSpec& spec, std::uint32_t k) {
  if (k == 0) {
    return 1.0;
  }
  return spec.d * std::pow(spec.d - 1.0, k - 1.0) * std::pow(spec.p, static_cast<double>(k));
}

namespace {

// Level sizes 1..k_max of one tree; a generation is a single binomial draw
// because a sum of independent binomials with equal p is binomial.
template <typename Visit>
void simulate_levels(const GwSpec& spec, std::uint32_t k_max, RngSeed seed, Visit&& visit) {
  CounterEngine engine(seed, Purpose::kBranching);
  std::uint64_t generation = binomial(spec.d, spec.p)(engine);
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    visit(k, generation);
    if (k < k_max) {
      generation = generation == 0 ? 0 : binomial((spec.d - 1) * generation, spec.p)(engine);
    }
  }
}

}  // namespace

std::vector<LevelMeanRow> level_mean_check(const GwSpec& spec, std::uint32_t k_max,
                                           std::uint64_t trials, RngSeed seed) {
  spec.validate();
  if (k_max < 1 || trials < 1) {
    throw ValidationError("level_mean_check: need k_max >= 1 and trials >= 1");
  }
  std::vector<RunningStats> acc(k_max + 1);
  for (std::uint64_t t = 0; t < trials; ++t) {
    simulate_levels(spec, k_max, seed.with_stream(seed.stream_id + t),
                    [&](std::uint32_t k, std::uint64_t size) { acc[k].add(double(size)); });
  }
  std::vector<LevelMeanRow> rows;
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    LevelMeanRow row;
    row.k = k;
    row.exact = level_mean_exact(spec, k);
    row.mc_mean = acc[k].mean();
    row.sigma = acc[k].standard_error();
    row.within_3_sigma = std::abs(row.mc_mean - row.exact) <= 3.0 * row.sigma + 1e-12;
    rows.push_back(row);
  }
  return rows;
}

double tree_resistance_Rk(const GwSpec& spec, std::uint32_t k) {
  spec.validate();
  if (!(spec.p > 0.0 && spec.p < 1.0)) {
    throw ValidationError("tree_resistance_Rk: p must lie strictly between 0 and 1");
  }
  double total = 0.0;
  for (std::uint32_t i = 1; i <= k; ++i) {
    total += (1.0 - spec.p) * std::pow(spec.p, -double(i)) /
             (spec.d * std::pow(spec.d - 1.0, i - 1.0));
  }
  return total;
}

bool tree_resistance_at_least_k_over_3(std::uint32_t d, std::uint64_t p_num, std::uint64_t p_den,
                                       std::uint32_t k) {
  using Big = boost::multiprecision::cpp_int;
  using Rational = boost::rational<Big>;
  if (d < 3 || p_num == 0 || p_num >= p_den) {
    throw ValidationError("tree_resistance_at_least_k_over_3: need d >= 3 and 0 < p < 1");
  }
  const Rational p{Big(p_num), Big(p_den)};
  const Rational one_minus_p = Rational(1) - p;
  Rational total(0);
  Rational p_power(1);     // p^i
  Rational branch_power(1);  // (d-1)^{i-1}
  for (std::uint32_t i = 1; i <= k; ++i) {
    p_power *= p;
    total += one_minus_p / (p_power * Big(d) * branch_power);
    branch_power *= Big(d - 1);
  }
  return total >= Rational(Big(k), Big(3));
}

std::vector<SurvivalRow> survival_bound_check(const GwSpec& spec, std::uint32_t k_max,
                                              std::uint64_t trials, RngSeed seed) {
  spec.validate();
  if (k_max < 1 || trials < 1) {
    throw ValidationError("survival_bound_check: need k_max >= 1 and trials >= 1");
  }
  std::vector<std::uint64_t> alive(k_max + 1, 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    simulate_levels(spec, k_max, seed.with_stream(seed.stream_id + t),
                    [&](std::uint32_t k, std::uint64_t size) { alive[k] += size > 0; });
  }
  std::vector<SurvivalRow> rows;
  for (std::uint32_t k = 1; k <= k_max; ++k) {
    SurvivalRow row;
    row.k = k;
    row.resistance = tree_resistance_Rk(spec, k);
    row.bound = 2.0 / (1.0 + row.resistance);
    row.mc_survival = static_cast<double>(alive[k]) / static_cast<double>(trials);
    row.sigma = proportion_se(alive[k], trials);
    row.holds = row.mc_survival <= row.bound + 3.0 * row.sigma;
    rows.push_back(row);
  }
  return rows;
}

namespace {

void check_domination_inputs(const Graph& g, const GwSpec& spec, double p,
                             const std::vector<std::uint64_t>& M_values) {
  spec.validate();
  if (g.is_implicit()) {
    throw ValidationError("domination_check: host graph must be explicit");
  }
  if (g.max_degree() > spec.d) {
    throw ValidationError("domination_check: host maximum degree exceeds spec.d");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("domination_check: p outside [0, 1]");
  }
  if (M_values.empty() || *std::min_element(M_values.begin(), M_values.end()) < 1) {
    throw ValidationError("domination_check: M values must be >= 1");
  }
}

ProgenyPmf pmf_for(const GwSpec& spec, const std::vector<std::uint64_t>& M_values) {
  const std::uint64_t largest = *std::max_element(M_values.begin(), M_values.end());
  return gw_total_pmf_exact(spec, std::max<std::uint64_t>(1, largest - 1));
}

}  // namespace

std::vector<DominationRow> domination_check(const Graph& g, const GwSpec& spec, double p,
                                            std::uint64_t trials,
                                            const std::vector<std::uint64_t>& M_values,
                                            RngSeed seed) {
  check_domination_inputs(g, spec, p, M_values);
  if (trials < 1) {
    throw ValidationError("domination_check: trials must be >= 1");
  }
  const std::uint64_t largest = *std::max_element(M_values.begin(), M_values.end());
  const ProgenyPmf pmf = pmf_for(spec, M_values);
  std::vector<std::uint64_t> reached(M_values.size(), 0);
  std::vector<std::uint64_t> stamp(g.vertex_count(), 0);
  std::vector<VertexId> queue;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const RngSeed trial_seed = seed.with_stream(seed.stream_id + t);
    CounterEngine roots(trial_seed, Purpose::kRootChoice);
    const auto root = static_cast<VertexId>(roots.below(g.vertex_count()));
    // Explore the cluster of the root, stopping once it has `largest` vertices.
    queue.assign(1, root);
    stamp[root] = t + 1;
    for (std::size_t head = 0; head < queue.size() && queue.size() < largest; ++head) {
      for (const Incidence& inc : g.neighbors(queue[head])) {
        if (stamp[inc.neighbor] != t + 1 && edge_retained(trial_seed, inc.edge, p)) {
          stamp[inc.neighbor] = t + 1;
          queue.push_back(inc.neighbor);
        }
      }
    }
    for (std::size_t i = 0; i < M_values.size(); ++i) {
      reached[i] += queue.size() >= M_values[i];
    }
  }
  std::vector<DominationRow> rows;
  for (std::size_t i = 0; i < M_values.size(); ++i) {
    DominationRow row;
    row.M = M_values[i];
    row.cluster_tail = static_cast<double>(reached[i]) / static_cast<double>(trials);
    row.sigma = proportion_se(reached[i], trials);
    row.gw_tail = pmf.tail(row.M);
    row.holds = row.cluster_tail <= row.gw_tail + 3.0 * row.sigma;
    rows.push_back(row);
  }
  return rows;
}

std::vector<DominationRow> domination_check_exhaustive(const Graph& g, const GwSpec& spec, double p,
                                                       const std::vector<std::uint64_t>& M_values) {
  check_domination_inputs(g, spec, p, M_values);
  constexpr std::size_t kMaxEdges = 24;
  const auto edge_count = static_cast<std::size_t>(g.edge_count());
  if (edge_count > kMaxEdges) {
    throw CapExceeded("domination_check_exhaustive", edge_count, kMaxEdges);
  }
  const ProgenyPmf pmf = pmf_for(spec, M_values);
  const VertexId n = g.vertex_count();
  std::vector<double> tail(M_values.size(), 0.0);
  const auto edges = g.edges();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edge_count); ++mask) {
    DisjointSets sets(n);
    std::size_t kept = 0;
    for (std::size_t e = 0; e < edge_count; ++e) {
      if (mask >> e & 1) {
        sets.unite(edges[e].u, edges[e].v);
        ++kept;
      }
    }
    const double weight = std::pow(p, double(kept)) * std::pow(1.0 - p, double(edge_count - kept));
    for (std::size_t i = 0; i < M_values.size(); ++i) {
      std::uint64_t hits = 0;
      for (VertexId v = 0; v < n; ++v) {
        hits += sets.set_size(v) >= M_values[i];
      }
      tail[i] += weight * static_cast<double>(hits) / static_cast<double>(n);
    }
  }
  std::vector<DominationRow> rows;
  for (std::size_t i = 0; i < M_values.size(); ++i) {
    DominationRow row;
    row.M = M_values[i];
    row.cluster_tail = tail[i];
    row.gw_tail = pmf.tail(row.M);
    row.holds = row.cluster_tail <= row.gw_tail + 1e-12;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace critwalk
