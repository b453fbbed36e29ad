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

#include "critwalk/graph.hpp"
#include "critwalk/rng.hpp"

namespace critwalk {

// Galton-Watson tree whose root has Binomial(d, p) children and every other
// individual Binomial(d - 1, p) children.
struct GwSpec {
  std::uint32_t d = 3;
  double p = 0.0;

  double mean_offspring() const { return (d - 1.0) * p; }
  // Throws ValidationError unless d >= 3 and p in [0, 1].
  void validate() const;
};

// Law of the total progeny truncated at max_size: masses[m - 1] = P(|T| = m)
// for m = 1..max_size, overflow = P(|T| > max_size).
struct ProgenyPmf {
  std::vector<double> masses;
  double overflow = 0.0;
  std::size_t underflowed = 0;  // masses whose log-space value fell below DBL_MIN

  std::size_t max_size() const { return masses.size(); }
  double mass(std::uint64_t m) const;
  // P(|T| >= M) for 1 <= M <= max_size + 1.
  double tail(std::uint64_t M) const;
  // |sum(masses) + overflow - 1|.
  double normalization_residual() const;
};

// P(Binomial(trials, p) = successes), in log-space except for small `trials`
// where the coefficient is an exact integer.
double binomial_pmf(std::uint64_t trials, std::uint64_t successes, double p);

// Progeny law of a non-root subtree: P(|T'| = m) = P(Bin((d-1)m, p) = m-1) / m.
ProgenyPmf subtree_pmf_exact(const GwSpec& spec, std::uint64_t max_size);

// Progeny law of the full tree, composing the root's offspring count with
// independent subtrees by truncated convolution.
ProgenyPmf gw_total_pmf_exact(const GwSpec& spec, std::uint64_t max_size);

inline constexpr std::uint64_t kDefaultProgenyCap = 10'000'000;

struct ProgenySample {
  bool overflow = false;
  std::uint64_t size = 0;  // valid when !overflow
};

// One draw of |T|, generation by generation; overflow once the population
// exceeds `cap`.
ProgenySample gw_sample_total(const GwSpec& spec, RngSeed seed,
                              std::uint64_t cap = kDefaultProgenyCap);

struct TailRow {
  std::uint64_t M = 0;
  double tail = 0.0;    // P(|T| >= M)
  double scaled = 0.0;  // sqrt(M) * tail
};

struct TailCheck {
  std::vector<TailRow> rows;
  double c_hat = 0.0;  // max over rows of `scaled`
};

// Exact tails at each M. Rejects supercritical specs.
TailCheck gw_tail_check(const GwSpec& spec, const std::vector<std::uint64_t>& M_values);

// E|L_k| = d (d-1)^{k-1} p^k.
double level_mean_exact(const GwSpec& spec, std::uint32_t k);

struct LevelMeanRow {
  std::uint32_t k = 0;
  double exact = 0.0;
  double mc_mean = 0.0;
  double sigma = 0.0;  // standard error of mc_mean
  bool within_3_sigma = false;
};

std::vector<LevelMeanRow> level_mean_check(const GwSpec& spec, std::uint32_t k_max,
                                           std::uint64_t trials, RngSeed seed);

// Root-to-level-k resistance with edge resistance (1-p)/p^i at depth i:
//   sum_{i=1}^{k} (1-p) p^{-i} / (d (d-1)^{i-1}).
double tree_resistance_Rk(const GwSpec& spec, std::uint32_t k);

// Same quantity for p = p_num / p_den in exact rational arithmetic; returns
// true iff it is at least k / 3.
bool tree_resistance_at_least_k_over_3(std::uint32_t d, std::uint64_t p_num, std::uint64_t p_den,
                                       std::uint32_t k);

struct SurvivalRow {
  std::uint32_t k = 0;
  double resistance = 0.0;
  double bound = 0.0;  // 2 / (1 + R_k)
  double mc_survival = 0.0;
  double sigma = 0.0;
  bool holds = false;  // mc_survival <= bound + 3 sigma
};

std::vector<SurvivalRow> survival_bound_check(const GwSpec& spec, std::uint32_t k_max,
                                              std::uint64_t trials, RngSeed seed);

struct DominationRow {
  std::uint64_t M = 0;
  double cluster_tail = 0.0;
  double sigma = 0.0;  // zero for the exhaustive check
  double gw_tail = 0.0;
  bool holds = false;  // cluster_tail <= gw_tail + 3 sigma
};

// P(|C(v)| >= M) over a uniform root and a fresh mask per trial
// (stream seed.stream_id + t) against the exact GW tail.
std::vector<DominationRow> domination_check(const Graph& g, const GwSpec& spec, double p,
                                            std::uint64_t trials,
                                            const std::vector<std::uint64_t>& M_values,
                                            RngSeed seed);

// Same comparison with the cluster tail computed exactly by enumerating
// every edge subset of g (at most 24 edges).
std::vector<DominationRow> domination_check_exhaustive(const Graph& g, const GwSpec& spec, double p,
                                                       const std::vector<std::uint64_t>& M_values);

}  // namespace critwalk
