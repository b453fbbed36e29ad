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
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "critwalk/components.hpp"
#include "critwalk/electrical.hpp"

namespace critwalk {

// Components above this size get bounds instead of an exact mixing time.
inline constexpr std::size_t kExactMixingCap = 1500;
// Dense eigendecompositions are refused above this size.
inline constexpr std::size_t kDenseEigenCap = 2000;

// Lazy simple random walk on a component: hold with probability 1/2, else
// move to a uniform neighbor. An isolated vertex holds with probability 1.
class LazyChain {
 public:
  explicit LazyChain(Component component);

  const Component& component() const { return component_; }
  std::size_t size() const { return component_.size(); }
  std::uint64_t edge_count() const { return component_.edge_count(); }

  double stationary(LocalId x) const;
  Eigen::VectorXd stationary() const;

  double transition(LocalId x, LocalId y) const;
  Eigen::MatrixXd dense_transition() const;

  // out = mu P for a row distribution mu.
  void step(const Eigen::VectorXd& mu, Eigen::VectorXd& out) const;

  // max |pi(x)p(x,y) - pi(y)p(y,x)| over all pairs, evaluated in exact
  // rational arithmetic and converted to double at the end.
  double reversibility_residual() const;

 private:
  Component component_;
};

// Half the L1 distance. Throws ValidationError on negative entries, length
// mismatch, or sums off 1 by more than 1e-12.
double tv_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Eigendecomposition of the pi-symmetrized operator
// S = diag(pi)^{1/2} P diag(pi)^{-1/2}, eigenvalues ascending.
struct ChainSpectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // orthonormal columns
  Eigen::VectorXd sqrt_degree;
};

ChainSpectrum chain_spectrum(const LazyChain& chain, std::size_t cap = kDenseEigenCap);

// max over starts x of ||p^t(x,.) - pi||_TV, evaluated spectrally.
double worst_tv_at(const LazyChain& chain, const ChainSpectrum& spectrum, std::uint64_t t);

struct MixingTime {
  std::uint64_t steps = 0;
  double tv_at_steps = 0.0;        // worst-start TV at `steps`
  double tv_before = 1.0;          // worst-start TV at steps - 1 (1 when steps == 0)
  std::uint32_t guarded_rechecks = 0;
};

// Least t with worst-start TV <= 1/4, by binary search over t. Throws
// CapExceeded above `cap`.
MixingTime mixing_time_exact(const LazyChain& chain, std::size_t cap = kExactMixingCap);

// Worst-start TV by direct evolution with compensated sums; O(t |E| |C|).
double worst_tv_direct(const LazyChain& chain, std::uint64_t t);

// ceil(2 max_{x,y} E_y tau_x) from the resistance identity.
std::uint64_t mixing_upper_hitting(const LazyChain& chain);
std::uint64_t mixing_upper_hitting(const ResistanceNetwork& net);

// 8 |E| diam.
std::uint64_t mixing_upper_diam(const LazyChain& chain, std::uint32_t diam);

struct Lemma54Params {
  LocalId v = 0;
  std::uint32_t h = 0;
  std::uint64_t m = 0;
  std::uint32_t k = 0;
  std::uint32_t r = 0;
  std::uint32_t L = 0;
};

struct Lemma54Certificate {
  Lemma54Params params;
  bool parameters_valid = false;  // L, k, m >= 1 and k < r
  bool boundary_nonempty = false; // dB(v, r) != {}
  bool ball_large = false;        // |B(v,h)| >= m
  bool not_lane_rich = false;
  bool ball_light = false;        // 3 |E(B(v,r))| < |E|
  bool radius_small = false;      // 4 L h < k
  std::uint64_t ball_size = 0;
  std::uint64_t ball_edges = 0;
  bool certified = false;
  std::uint64_t bound = 0;        // floor(m k / (12 L)) when certified
  std::string failure;            // first failed hypothesis, empty when certified
};

Lemma54Certificate mixing_lower_lemma54(const LazyChain& chain, const Lemma54Params& params);

struct SpectralDiagnostics {
  Eigen::VectorXd eigenvalues;      // ascending
  bool eigenvalues_in_range = false; // all within [-1e-10, 1 + 1e-10]
  bool return_prob_monotone = false; // p^{t+1}(x,x) <= p^t(x,x) + 1e-12 on all samples
  double max_return_increase = 0.0;
  std::size_t samples = 0;
};

// Checks return probabilities at starts `starts` for t = 0..t_max.
SpectralDiagnostics spectral_diagnostics(const LazyChain& chain, const std::vector<LocalId>& starts,
                                         std::uint64_t t_max);

// p^t(x,x) from the spectral decomposition.
double return_probability(const ChainSpectrum& spectrum, LocalId x, std::uint64_t t);

}  // namespace critwalk
