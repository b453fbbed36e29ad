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

#include "critwalk/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "critwalk/errors.hpp"
#include "critwalk/structure.hpp"

namespace critwalk {

__extension__ using Int128 = __int128;
__extension__ using Uint128 = unsigned __int128;
namespace {

constexpr double kThreshold = 0.25;
constexpr double kGuardBand = 1e-9;

// Neumaier's compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

void step_compensated(const Component& c, const std::vector<double>& mu, std::vector<double>& out) {
  for (LocalId y = 0; y < c.size(); ++y) {
    if (c.degree(y) == 0) {
      out[y] = mu[y];
      continue;
    }
    CompensatedSum acc;
    acc.add(0.5 * mu[y]);
    for (LocalId x : c.neighbors(y)) {
      acc.add(mu[x] / (2.0 * c.degree(x)));
    }
    out[y] = acc.value();
  }
}

double tv_from_point_direct(const LazyChain& chain, LocalId x, std::uint64_t t) {
  const Component& c = chain.component();
  std::vector<double> mu(c.size(), 0.0);
  std::vector<double> next(c.size(), 0.0);
  mu[x] = 1.0;
  for (std::uint64_t s = 0; s < t; ++s) {
    step_compensated(c, mu, next);
    mu.swap(next);
  }
  CompensatedSum acc;
  for (LocalId y = 0; y < c.size(); ++y) {
    acc.add(std::abs(mu[y] - chain.stationary(y)));
  }
  return 0.5 * acc.value();
}

// Per-start TV at time t from the spectral expansion
//   p^t(x,y) - pi(y) = sqrt(d_y/d_x) sum_{i != top} lambda_i^t u_i(x) u_i(y).
// Terms with |lambda_i|^t below `cut` are dropped; since rows of the
// orthonormal eigenvector matrix have unit norm the dropped part moves each
// TV value by at most cut * n * sqrt(max degree) / 2.
std::vector<double> tv_rows_spectral(const LazyChain& chain, const ChainSpectrum& spec,
                                     std::uint64_t t) {
  const auto n = static_cast<Eigen::Index>(chain.size());
  std::vector<double> rows(static_cast<std::size_t>(n), 0.0);
  if (n == 1) {
    return rows;
  }
  if (t == 0) {
    for (Eigen::Index x = 0; x < n; ++x) {
      rows[x] = 1.0 - chain.stationary(static_cast<LocalId>(x));
    }
    return rows;
  }
  const double max_sd = spec.sqrt_degree.maxCoeff();
  const double cut = 1e-13 / (static_cast<double>(n) * max_sd);
  std::vector<Eigen::Index> kept;
  std::vector<double> weight;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double w = std::pow(spec.eigenvalues[i], static_cast<double>(t));
    if (std::abs(w) > cut) {
      kept.push_back(i);
      weight.push_back(w);
    }
  }
  if (kept.empty()) {
    return rows;
  }
  const auto kk = static_cast<Eigen::Index>(kept.size());
  Eigen::MatrixXd basis(n, kk);
  Eigen::MatrixXd scaled(n, kk);
  for (Eigen::Index j = 0; j < kk; ++j) {
    basis.col(j) = spec.eigenvectors.col(kept[j]);
    scaled.col(j) = basis.col(j) * weight[j];
  }
  const Eigen::MatrixXd deviation = scaled * basis.transpose();
  for (Eigen::Index x = 0; x < n; ++x) {
    double acc = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
      acc += spec.sqrt_degree[y] * std::abs(deviation(x, y));
    }
    rows[x] = 0.5 * acc / spec.sqrt_degree[x];
  }
  return rows;
}

}  // namespace

LazyChain::LazyChain(Component component) : component_(std::move(component)) {
  if (component_.size() == 0) {
    throw ValidationError("lazy chain needs at least one vertex");
  }
}

double LazyChain::stationary(LocalId x) const {
  if (component_.edge_count() == 0) {
    return 1.0 / static_cast<double>(component_.size());
  }
  return static_cast<double>(component_.degree(x)) /
         (2.0 * static_cast<double>(component_.edge_count()));
}

Eigen::VectorXd LazyChain::stationary() const {
  Eigen::VectorXd pi(static_cast<Eigen::Index>(size()));
  for (LocalId x = 0; x < size(); ++x) {
    pi[x] = stationary(x);
  }
  return pi;
}

double LazyChain::transition(LocalId x, LocalId y) const {
  const std::uint32_t deg = component_.degree(x);
  if (x == y) {
    return deg == 0 ? 1.0 : 0.5;
  }
  const auto nb = component_.neighbors(x);
  if (std::find(nb.begin(), nb.end(), y) == nb.end()) {
    return 0.0;
  }
  return 1.0 / (2.0 * deg);
}

Eigen::MatrixXd LazyChain::dense_transition() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (LocalId x = 0; x < size(); ++x) {
    const std::uint32_t deg = component_.degree(x);
    p(x, x) = deg == 0 ? 1.0 : 0.5;
    for (LocalId y : component_.neighbors(x)) {
      p(x, y) = 1.0 / (2.0 * deg);
    }
  }
  return p;
}

void LazyChain::step(const Eigen::VectorXd& mu, Eigen::VectorXd& out) const {
  if (mu.size() != static_cast<Eigen::Index>(size())) {
    throw ValidationError("LazyChain::step: distribution has the wrong length");
  }
  out.resize(mu.size());
  for (LocalId y = 0; y < size(); ++y) {
    if (component_.degree(y) == 0) {
      out[y] = mu[y];
      continue;
    }
    double acc = 0.5 * mu[y];
    for (LocalId x : component_.neighbors(y)) {
      acc += mu[x] / (2.0 * component_.degree(x));
    }
    out[y] = acc;
  }
}

double LazyChain::reversibility_residual() const {
  // pi(x) p(x,y) = deg(x) / (2|E| * 2 deg(x)) as an unreduced fraction.
  const auto two_m = static_cast<Int128>(2 * component_.edge_count());
  Int128 worst_num = 0;
  Int128 worst_den = 1;
  for (const LocalEdge& e : component_.edges()) {
    const Int128 da = component_.degree(e.a);
    const Int128 db = component_.degree(e.b);
    const Int128 num_ab = da;
    const Int128 den_ab = two_m * 2 * da;
    const Int128 num_ba = db;
    const Int128 den_ba = two_m * 2 * db;
    Int128 diff = num_ab * den_ba - num_ba * den_ab;
    if (diff < 0) {
      diff = -diff;
    }
    const Int128 den = den_ab * den_ba;
    if (diff * worst_den > worst_num * den) {
      worst_num = diff;
      worst_den = den;
    }
  }
  return static_cast<double>(worst_num) / static_cast<double>(worst_den);
}

double tv_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw ValidationError("tv_distance: length mismatch");
  }
  if ((a.array() < 0.0).any() || (b.array() < 0.0).any()) {
    throw ValidationError("tv_distance: negative probability");
  }
  if (std::abs(a.sum() - 1.0) > 1e-12 || std::abs(b.sum() - 1.0) > 1e-12) {
    throw ValidationError("tv_distance: vector does not sum to 1");
  }
  return 0.5 * (a - b).cwiseAbs().sum();
}

ChainSpectrum chain_spectrum(const LazyChain& chain, std::size_t cap) {
  if (chain.size() > cap) {
    throw CapExceeded("chain_spectrum", chain.size(), cap);
  }
  const Component& c = chain.component();
  const auto n = static_cast<Eigen::Index>(c.size());
  ChainSpectrum out;
  out.sqrt_degree.resize(n);
  for (LocalId x = 0; x < c.size(); ++x) {
    out.sqrt_degree[x] = std::sqrt(static_cast<double>(std::max<std::uint32_t>(c.degree(x), 1)));
  }
  Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
  for (LocalId x = 0; x < c.size(); ++x) {
    sym(x, x) = c.degree(x) == 0 ? 1.0 : 0.5;
  }
  for (const LocalEdge& e : c.edges()) {
    const double w = 0.5 / (out.sqrt_degree[e.a] * out.sqrt_degree[e.b]);
    sym(e.a, e.b) = w;
    sym(e.b, e.a) = w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw SolverError("symmetric eigensolver failed");
  }
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  return out;
}

double worst_tv_at(const LazyChain& chain, const ChainSpectrum& spectrum, std::uint64_t t) {
  const auto rows = tv_rows_spectral(chain, spectrum, t);
  return *std::max_element(rows.begin(), rows.end());
}

double worst_tv_direct(const LazyChain& chain, std::uint64_t t) {
  double worst = 0.0;
  for (LocalId x = 0; x < chain.size(); ++x) {
    worst = std::max(worst, tv_from_point_direct(chain, x, t));
  }
  return worst;
}

MixingTime mixing_time_exact(const LazyChain& chain, std::size_t cap) {
  if (chain.size() > cap) {
    throw CapExceeded("mixing_time_exact", chain.size(), cap);
  }
  MixingTime result;
  if (chain.size() == 1) {
    result.tv_at_steps = 0.0;
    return result;
  }
  const ChainSpectrum spectrum = chain_spectrum(chain, std::max(cap, chain.size()));
  std::map<std::uint64_t, double> worst_at;

  // Worst-start TV at t with rows near the threshold re-evaluated directly.
  auto worst = [&](std::uint64_t t) {
    if (auto it = worst_at.find(t); it != worst_at.end()) {
      return it->second;
    }
    auto rows = tv_rows_spectral(chain, spectrum, t);
    double w = *std::max_element(rows.begin(), rows.end());
    if (std::abs(w - kThreshold) < kGuardBand) {
      ++result.guarded_rechecks;
      for (LocalId x = 0; x < chain.size(); ++x) {
        if (rows[x] > kThreshold - kGuardBand) {
          rows[x] = tv_from_point_direct(chain, x, t);
        }
      }
      w = *std::max_element(rows.begin(), rows.end());
    }
    worst_at.emplace(t, w);
    return w;
  };
  auto mixed = [&](std::uint64_t t) { return worst(t) <= kThreshold; };

  // Relaxation-time bracket, verified before use:
  //   (t_rel - 1) ln 2 <= t_mix <= t_rel ln(4 / pi_min).
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  const double gap = 1.0 - spectrum.eigenvalues[spectrum.eigenvalues.size() - 2];
  const double pi_min = chain.stationary().minCoeff();
  if (gap > 1e-12) {
    const double t_rel = 1.0 / gap;
    const double lower = (t_rel - 1.0) * std::log(2.0);
    const auto lo_guess = static_cast<std::uint64_t>(std::max(0.0, std::ceil(lower) - 1.0));
    const auto hi_guess = static_cast<std::uint64_t>(std::ceil(t_rel * std::log(4.0 / pi_min))) + 1;
    if (lo_guess > 0 && !mixed(lo_guess)) {
      lo = lo_guess;
    }
    if (hi_guess > lo && mixed(hi_guess)) {
      hi = hi_guess;
    }
  }
  if (hi == 0) {
    const DiameterBounds diam = diameter_bounds(chain.component());
    hi = std::max<std::uint64_t>(lo + 1, mixing_upper_diam(chain, diam.upper));
    while (!mixed(hi)) {
      lo = hi;
      hi *= 2;
    }
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (mixed(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  result.steps = hi;
  result.tv_at_steps = worst(hi);
  result.tv_before = worst(hi - 1);
  return result;
}

std::uint64_t mixing_upper_hitting(const ResistanceNetwork& net) {
  if (net.size() == 1) {
    return 0;
  }
  const Eigen::MatrixXd hitting = hitting_time_matrix(net);
  return static_cast<std::uint64_t>(std::ceil(2.0 * hitting.maxCoeff()));
}

std::uint64_t mixing_upper_hitting(const LazyChain& chain) {
  return mixing_upper_hitting(ResistanceNetwork(chain.component()));
}

std::uint64_t mixing_upper_diam(const LazyChain& chain, std::uint32_t diam) {
  return 8 * chain.edge_count() * static_cast<std::uint64_t>(diam);
}

Lemma54Certificate mixing_lower_lemma54(const LazyChain& chain, const Lemma54Params& params) {
  Lemma54Certificate cert;
  cert.params = params;
  const Component& c = chain.component();
  cert.parameters_valid = params.L >= 1 && params.k >= 1 && params.m >= 1 &&
                          params.k < params.r && params.v < c.size();
  if (!cert.parameters_valid) {
    cert.failure = "parameters";
    return cert;
  }
  const BfsLayers layers = bfs_layers(c, params.v);
  cert.boundary_nonempty = params.r <= layers.depth();
  cert.ball_size = layers.ball_size(params.h);
  cert.ball_large = cert.ball_size >= params.m;
  cert.radius_small = 4ull * params.L * params.h < params.k;
  cert.ball_edges = ball_edge_count(c, layers, params.r);
  cert.ball_light = 3 * cert.ball_edges < c.edge_count();
  if (cert.boundary_nonempty) {
    cert.not_lane_rich = !is_lane_rich(lanes(c, layers, params.r), params.L, params.k);
  }
  if (!cert.boundary_nonempty) {
    cert.failure = "boundary_empty";
  } else if (!cert.ball_large) {
    cert.failure = "ball_small";
  } else if (!cert.not_lane_rich) {
    cert.failure = "lane_rich";
  } else if (!cert.ball_light) {
    cert.failure = "ball_heavy";
  } else if (!cert.radius_small) {
    cert.failure = "radius_large";
  } else {
    cert.certified = true;
    cert.bound = params.m * params.k / (12ull * params.L);
  }
  return cert;
}

double return_probability(const ChainSpectrum& spectrum, LocalId x, std::uint64_t t) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    const double u = spectrum.eigenvectors(x, i);
    acc += std::pow(spectrum.eigenvalues[i], static_cast<double>(t)) * u * u;
  }
  return acc;
}

SpectralDiagnostics spectral_diagnostics(const LazyChain& chain, const std::vector<LocalId>& starts,
                                         std::uint64_t t_max) {
  SpectralDiagnostics out;
  const ChainSpectrum spectrum = chain_spectrum(chain);
  out.eigenvalues = spectrum.eigenvalues;
  out.eigenvalues_in_range = (spectrum.eigenvalues.array() >= -1e-10).all() &&
                             (spectrum.eigenvalues.array() <= 1.0 + 1e-10).all();
  out.return_prob_monotone = true;
  const Component& c = chain.component();
  std::vector<double> mu(c.size());
  std::vector<double> next(c.size());
  for (LocalId x : starts) {
    if (x >= c.size()) {
      throw ValidationError("spectral_diagnostics: start is not in the component");
    }
    std::fill(mu.begin(), mu.end(), 0.0);
    mu[x] = 1.0;
    double previous = 1.0;
    for (std::uint64_t t = 1; t <= t_max; ++t) {
      step_compensated(c, mu, next);
      mu.swap(next);
      const double increase = mu[x] - previous;
      out.max_return_increase = std::max(out.max_return_increase, increase);
      if (increase > 1e-12) {
        out.return_prob_monotone = false;
      }
      previous = mu[x];
      ++out.samples;
    }
  }
  return out;
}

}  // namespace critwalk
