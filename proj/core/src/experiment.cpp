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

#include "critwalk/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

#include "critwalk/electrical.hpp"
#include "critwalk/errors.hpp"
#include "critwalk/parallel.hpp"
#include "critwalk/percolation.hpp"
#include "critwalk/structure.hpp"

namespace critwalk {
namespace {

bool is_power_of_two(std::uint64_t n) { return n >= 2 && (n & (n - 1)) == 0; }

std::uint32_t log2_exact(std::uint64_t n) {
  std::uint32_t k = 0;
  while ((std::uint64_t{1} << k) < n) {
    ++k;
  }
  return k;
}

// Integer side with side^dim == n, or 0.
std::uint32_t torus_side(std::uint64_t n, std::uint32_t dim) {
  if (dim == 0) {
    return 0;
  }
  const auto guess = static_cast<std::uint64_t>(std::llround(std::pow(double(n), 1.0 / dim)));
  for (std::uint64_t side = guess > 1 ? guess - 1 : 1; side <= guess + 1; ++side) {
    std::uint64_t power = 1;
    for (std::uint32_t i = 0; i < dim && power <= n; ++i) {
      power *= side;
    }
    if (power == n) {
      return static_cast<std::uint32_t>(side);
    }
  }
  return 0;
}

std::vector<double> rule_values(const ExperimentConfig& config, std::uint64_t n) {
  switch (config.p_rule.kind) {
    case PRule::Kind::kLambda:
      return {critical_window_p(config.host, n, config.p_rule.lambda)};
    case PRule::Kind::kExplicit:
      return {config.p_rule.p};
    case PRule::Kind::kGrid:
      return config.p_rule.grid;
  }
  return {};
}

double cube_root(double x) { return std::cbrt(x); }

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::kComplete:
      return "complete";
    case Family::kRegular:
      return "regular";
    case Family::kHypercube:
      return "hypercube";
    case Family::kTorus:
      return "torus";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "complete") return Family::kComplete;
  if (name == "regular") return Family::kRegular;
  if (name == "hypercube") return Family::kHypercube;
  if (name == "torus") return Family::kTorus;
  throw ValidationError("unknown family '" + std::string(name) + "'");
}

std::uint64_t host_degree(const HostSpec& host, std::uint64_t n) {
  switch (host.family) {
    case Family::kComplete:
      return n - 1;
    case Family::kRegular:
      return host.d;
    case Family::kHypercube:
      return log2_exact(n);
    case Family::kTorus:
      return 2ull * host.dim;
  }
  return 0;
}

Graph build_host(const HostSpec& host, std::uint64_t n, RngSeed seed) {
  if (n < 1 || n > kMaxVertices) {
    throw ValidationError("host size out of range");
  }
  switch (host.family) {
    case Family::kComplete:
      return Graph::implicit_complete(static_cast<VertexId>(n));
    case Family::kRegular:
      return random_regular(static_cast<VertexId>(n), host.d, seed);
    case Family::kHypercube:
      if (!is_power_of_two(n)) {
        throw ValidationError("hypercube size must be a power of two");
      }
      return hypercube(log2_exact(n));
    case Family::kTorus: {
      const std::uint32_t side = torus_side(n, host.dim);
      if (side < 3) {
        throw ValidationError("torus size must be side^dim with side >= 3");
      }
      return torus(side, host.dim);
    }
  }
  throw ValidationError("unknown family");
}

double critical_window_p(const HostSpec& host, std::uint64_t n, double lambda) {
  const double shift = 1.0 + lambda / cube_root(static_cast<double>(n));
  const double denominator =
      host.family == Family::kComplete ? double(n) : double(host_degree(host, n)) - 1.0;
  return std::clamp(shift / denominator, 0.0, 1.0);
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) {
    throw ValidationError("config: n_grid is empty");
  }
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) {
    throw ValidationError("config: n_grid must be sorted ascending");
  }
  if (trials < 1 || trials >= (std::uint64_t{1} << 24)) {
    throw ValidationError("config: trials must be in [1, 2^24)");
  }
  if (components_per_trial < 1) {
    throw ValidationError("config: components_per_trial must be >= 1");
  }
  auto check_p = [](double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("config: p values must lie in [0, 1]");
    }
  };
  if (p_rule.kind == PRule::Kind::kExplicit) {
    check_p(p_rule.p);
  }
  if (p_rule.kind == PRule::Kind::kGrid) {
    if (p_rule.grid.empty()) {
      throw ValidationError("config: p grid is empty");
    }
    for (double p : p_rule.grid) {
      check_p(p);
    }
  }
  if (p_rule.kind == PRule::Kind::kLambda && !std::isfinite(p_rule.lambda)) {
    throw ValidationError("config: lambda must be finite");
  }
  for (std::uint64_t n : n_grid) {
    if (n < 1 || n > kMaxVertices) {
      throw ValidationError("config: n out of range");
    }
    switch (host.family) {
      case Family::kComplete:
        break;
      case Family::kRegular:
        if (host.d < 3 || n <= host.d || (n * host.d) % 2 != 0) {
          throw ValidationError("config: regular family needs d >= 3, n > d and n d even");
        }
        break;
      case Family::kHypercube:
        if (!is_power_of_two(n)) {
          throw ValidationError("config: hypercube n must be a power of two");
        }
        break;
      case Family::kTorus:
        if (torus_side(n, host.dim) < 3) {
          throw ValidationError("config: torus n must be side^dim with side >= 3");
        }
        break;
    }
  }
}

RngSeed trial_seed(const RngSeed& base, std::uint64_t n, std::uint64_t trial) {
  return base.with_stream(base.stream_id + (n << 24) + trial);
}

bool ExperimentRecord::consistent() const {
  std::uint64_t lower = 0;
  if (lower_lemma54 && lower_lemma54->certified) {
    lower = lower_lemma54->bound;
  }
  std::uint64_t upper = std::numeric_limits<std::uint64_t>::max();
  if (upper_diam) upper = std::min(upper, *upper_diam);
  if (upper_hit) upper = std::min(upper, *upper_hit);
  if (t_mix) {
    return lower <= t_mix->upper && t_mix->lower <= upper;
  }
  return lower <= upper;
}

Lemma54Certificate scheduled_lemma54(const LazyChain& chain, const Lemma54Schedule& schedule) {
  const Component& c = chain.component();
  const double s = std::sqrt(static_cast<double>(c.size()));
  const double beta = schedule.beta;
  const double D = schedule.D;
  if (!(beta > 0.0) || !(D > 0.0)) {
    throw ValidationError("lane bound schedule: beta and D must be positive");
  }
  Lemma54Params params;
  params.L = schedule.L ? schedule.L
                        : static_cast<std::uint32_t>(
                              std::max(1.0, std::round(D * D / (beta * beta * beta))));
  params.h = schedule.h ? schedule.h
                        : static_cast<std::uint32_t>(std::max(
                              1.0, std::floor(std::pow(beta, 5) / (D * D * D) * s / 4.0)));
  params.k = schedule.k ? schedule.k : 5 * params.L * params.h;
  params.r = schedule.r ? schedule.r : 10 * params.L * params.h;

  // Try both ends of a double sweep; keep the strongest certificate.
  const BfsLayers from_zero = bfs_layers(c, 0);
  const LocalId a = from_zero.layers.back().front();
  const BfsLayers from_a = bfs_layers(c, a);
  const LocalId b = from_a.layers.back().front();
  std::optional<Lemma54Certificate> best;
  for (LocalId v : {a, b}) {
    Lemma54Params trial = params;
    trial.v = v;
    if (schedule.m) {
      trial.m = schedule.m;
    } else if (schedule.m_from_ball) {
      trial.m = (v == a ? from_a : bfs_layers(c, v)).ball_size(params.h);
    } else {
      trial.m = static_cast<std::uint64_t>(
          std::max(1.0, std::ceil(std::pow(double(params.h), 3) * beta / (D * s))));
    }
    Lemma54Certificate cert = mixing_lower_lemma54(chain, trial);
    if (!best || (cert.certified && (!best->certified || cert.bound > best->bound))) {
      best = std::move(cert);
    }
    if (a == b) {
      break;
    }
  }
  return *best;
}

void analyze_component(const Component& c, const AnalysisOptions& options,
                       ExperimentRecord& record) {
  const auto start = std::chrono::steady_clock::now();
  record.size = c.size();
  record.edge_count = c.edge_count();
  const DiameterBounds bounds = diameter_bounds(c);
  if (bounds.lower == bounds.upper) {
    record.diameter = {bounds.lower, bounds.upper};
  } else if (c.size() <= options.caps.exact_diameter) {
    const std::uint32_t diam = diameter_exact(c, options.caps.exact_diameter);
    record.diameter = {diam, diam};
  } else {
    if (options.require_exact) {
      throw CapExceeded("diameter_exact", c.size(), options.caps.exact_diameter);
    }
    record.diameter = {bounds.lower, bounds.upper};
    record.flags.emplace_back("diameter_capped");
  }
  if (options.measure_mixing) {
    const LazyChain chain(c);
    record.upper_diam = mixing_upper_diam(chain, static_cast<std::uint32_t>(record.diameter.upper));
    if (c.size() <= kDenseSolverCap) {
      record.upper_hit = mixing_upper_hitting(chain);
    }
    record.lower_lemma54 = scheduled_lemma54(chain, options.schedule);
    if (c.size() <= options.caps.exact_mixing) {
      const MixingTime mix = mixing_time_exact(chain, options.caps.exact_mixing);
      record.t_mix = Range{mix.steps, mix.steps};
    } else {
      if (options.require_exact) {
        throw CapExceeded("mixing_time_exact", c.size(), options.caps.exact_mixing);
      }
      std::uint64_t lower = c.size() > 1 ? 1 : 0;
      if (record.lower_lemma54->certified) {
        lower = std::max(lower, record.lower_lemma54->bound);
      }
      std::uint64_t upper = *record.upper_diam;
      if (record.upper_hit) {
        upper = std::min(upper, *record.upper_hit);
      }
      record.t_mix = Range{lower, upper};
      record.flags.emplace_back("mixing_capped");
    }
  }
  if (options.timing) {
    record.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
}

std::vector<ExperimentRecord> run_trials(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  struct Task {
    std::uint64_t n;
    double p;
    std::uint64_t trial;
  };
  std::vector<Task> tasks;
  for (std::uint64_t n : config.n_grid) {
    for (double p : rule_values(config, n)) {
      for (std::uint64_t t = 0; t < config.trials; ++t) {
        tasks.push_back({n, p, t});
      }
    }
  }
  AnalysisOptions options;
  options.caps = config.caps;
  options.measure_mixing = config.measure_mixing;
  options.schedule = config.schedule;
  options.timing = config.timing;
  options.require_exact = config.require_exact;

  std::vector<std::vector<ExperimentRecord>> slots(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    const Task& task = tasks[i];
    const RngSeed seed = trial_seed(config.seed, task.n, task.trial);
    const Graph g = build_host(config.host, task.n, seed);
    const PercolationMask mask = percolate(g, task.p, seed);
    const Partition partition(g, mask);
    const std::size_t count =
        std::min<std::size_t>(config.components_per_trial, partition.component_count());
    for (std::size_t rank = 0; rank < count; ++rank) {
      ExperimentRecord record;
      record.n = task.n;
      record.p = task.p;
      if (config.p_rule.kind == PRule::Kind::kLambda) {
        record.lambda = config.p_rule.lambda;
      }
      record.trial_id = task.trial;
      record.component_rank = static_cast<std::uint32_t>(rank);
      analyze_component(partition.extract(rank), options, record);
      slots[i].push_back(std::move(record));
    }
  });
  std::vector<ExperimentRecord> records;
  for (auto& slot : slots) {
    for (auto& r : slot) {
      records.push_back(std::move(r));
    }
  }
  return records;
}

std::vector<ExperimentRecord> run_trials_on_host(const Graph& g, double p,
                                                 std::optional<double> lambda,
                                                 std::uint64_t trials, RngSeed seed,
                                                 const AnalysisOptions& options,
                                                 std::uint32_t components, unsigned threads) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("p must lie in [0, 1]");
  }
  if (trials < 1 || trials >= (std::uint64_t{1} << 24) || components < 1) {
    throw ValidationError("need 1 <= trials < 2^24 and components >= 1");
  }
  const std::uint64_t n = g.vertex_count();
  std::vector<std::vector<ExperimentRecord>> slots(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const Partition partition(g, percolate(g, p, trial_seed(seed, n, t)));
    const std::size_t count = std::min<std::size_t>(components, partition.component_count());
    for (std::size_t rank = 0; rank < count; ++rank) {
      ExperimentRecord record;
      record.n = n;
      record.p = p;
      record.lambda = lambda;
      record.trial_id = t;
      record.component_rank = static_cast<std::uint32_t>(rank);
      analyze_component(partition.extract(rank), options, record);
      slots[t].push_back(std::move(record));
    }
  });
  std::vector<ExperimentRecord> records;
  for (auto& slot : slots) {
    for (auto& r : slot) {
      records.push_back(std::move(r));
    }
  }
  return records;
}

std::optional<double> censored_median(std::vector<double> exact, std::size_t censored) {
  const std::size_t total = exact.size() + censored;
  if (total == 0) {
    return std::nullopt;
  }
  std::sort(exact.begin(), exact.end());
  const std::size_t lo = (total - 1) / 2;
  const std::size_t hi = total / 2;
  if (hi >= exact.size()) {
    return std::nullopt;
  }
  return 0.5 * (exact[lo] + exact[hi]);
}

FitOutcome fit_log_log(const std::vector<std::pair<double, double>>& points) {
  FitOutcome out;
  if (points.size() < 4) {
    out.note = "needs at least 4 grid points";
    return out;
  }
  double lo = points.front().first;
  double hi = points.front().first;
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [n, value] : points) {
    if (!(value > 0.0)) {
      out.note = "non-positive statistic";
      return out;
    }
    lo = std::min(lo, n);
    hi = std::max(hi, n);
    x.push_back(std::log(n));
    y.push_back(std::log(value));
  }
  if (std::log2(hi / lo) < 3.0 - 1e-12) {
    out.note = "grid spans fewer than 3 octaves";
    return out;
  }
  out.fit = ols_fit(x, y);
  return out;
}

ScalingResult summarize_scaling(const ExperimentConfig& config,
                                std::vector<ExperimentRecord> records) {
  ScalingResult result;
  result.records = std::move(records);
  std::vector<std::pair<double, double>> size_points;
  std::vector<std::pair<double, double>> diam_points;
  std::vector<std::pair<double, double>> mix_points;
  for (std::uint64_t n : config.n_grid) {
    std::vector<double> sizes;
    std::vector<double> diams;
    std::vector<double> mix_exact;
    std::size_t mix_capped = 0;
    for (const auto& r : result.records) {
      if (r.n != n || r.component_rank != 0) {
        continue;
      }
      sizes.push_back(double(r.size));
      diams.push_back(0.5 * double(r.diameter.lower + r.diameter.upper));
      if (r.t_mix) {
        if (r.t_mix->exact()) {
          mix_exact.push_back(double(r.t_mix->lower));
        } else {
          ++mix_capped;
        }
      }
    }
    if (sizes.empty()) {
      continue;
    }
    ScalingSummary s;
    s.n = n;
    s.trials = sizes.size();
    s.size = {quantile(sizes, 0.1), quantile(sizes, 0.5), quantile(sizes, 0.9)};
    s.diameter = {quantile(diams, 0.1), quantile(diams, 0.5), quantile(diams, 0.9)};
    s.t_mix_exact = mix_exact.size();
    s.t_mix_capped = mix_capped;
    s.t_mix_median = censored_median(mix_exact, mix_capped);
    size_points.emplace_back(double(n), s.size.q50);
    diam_points.emplace_back(double(n), s.diameter.q50);
    const double window = std::pow(double(n), 2.0 / 3.0);
    if (s.t_mix_median && window <= double(config.caps.exact_mixing)) {
      mix_points.emplace_back(double(n), *s.t_mix_median);
    }
    result.per_n.push_back(s);
  }
  result.size_fit = fit_log_log(size_points);
  result.diameter_fit = fit_log_log(diam_points);
  if (config.measure_mixing) {
    result.mixing_fit = fit_log_log(mix_points);
  } else {
    result.mixing_fit.note = "mixing not measured";
  }
  return result;
}

ScalingResult run_scaling(const ExperimentConfig& config, unsigned threads) {
  return summarize_scaling(config, run_trials(config, threads));
}

namespace {

ExceedanceRow make_row(double A, double threshold, std::uint64_t events, std::uint64_t trials) {
  ExceedanceRow row;
  row.A = A;
  row.threshold = threshold;
  row.events = events;
  row.trials = trials;
  row.estimate = static_cast<double>(events) / static_cast<double>(trials);
  row.wilson = wilson_interval(events, trials);
  if (events == 0) {
    row.upper_bound_if_none = 1.0 - std::pow(0.05, 1.0 / static_cast<double>(trials));
  }
  return row;
}

double single_p(const ExperimentConfig& config, std::uint64_t n) {
  const auto values = rule_values(config, n);
  if (values.size() != 1) {
    throw ValidationError("this experiment needs a single p (lambda or explicit rule)");
  }
  return values.front();
}

}  // namespace

TailRegression tail_regression(const std::vector<ExceedanceRow>& rows) {
  TailRegression out;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> w;
  for (const auto& row : rows) {
    if (row.events < 5 || row.estimate >= 1.0) {
      continue;
    }
    const double variance = (1.0 - row.estimate) / (double(row.trials) * row.estimate);
    x.push_back(std::pow(row.A, 1.5));
    y.push_back(std::log(row.estimate));
    w.push_back(1.0 / variance);
  }
  if (x.size() < 3) {
    out.note = "fewer than 3 usable A points (need >= 5 events and estimate < 1)";
    return out;
  }
  out.fit = wls_fit(x, y, w);
  out.c_hat = -out.fit->slope;
  out.slope_ci = {out.fit->slope - 1.96 * out.fit->slope_se,
                  out.fit->slope + 1.96 * out.fit->slope_se};
  out.slope_negative_ci = out.slope_ci.upper < 0.0;
  return out;
}

DiameterTailResult run_tail_diam(const ExperimentConfig& config, const std::vector<double>& A_grid,
                                 unsigned threads) {
  config.validate();
  if (config.host.family != Family::kComplete && config.host.family != Family::kRegular) {
    throw ValidationError("run_tail_diam: family must be complete or regular");
  }
  if (A_grid.empty()) {
    throw ValidationError("run_tail_diam: A grid is empty");
  }
  const std::uint64_t n = config.n_grid.front();
  const double p = single_p(config, n);
  const double scale = cube_root(double(n));
  std::vector<std::uint32_t> thresholds;
  for (double A : A_grid) {
    if (!(A > 0.0)) {
      throw ValidationError("run_tail_diam: A values must be positive");
    }
    thresholds.push_back(static_cast<std::uint32_t>(std::floor(A * scale)));
  }
  const std::uint32_t smallest = *std::min_element(thresholds.begin(), thresholds.end());
  std::vector<std::vector<char>> hits(config.trials, std::vector<char>(A_grid.size(), 0));
  parallel_for(config.trials, threads, [&](std::size_t t) {
    const RngSeed seed = trial_seed(config.seed, n, t);
    const Graph g = build_host(config.host, n, seed);
    const Partition partition(g, percolate(g, p, seed));
    // A component of diameter > R has at least R + 2 vertices.
    for (std::size_t rank = 0; rank < partition.component_count(); ++rank) {
      if (partition.size(rank) < std::uint64_t{smallest} + 2) {
        break;
      }
      const Component c = partition.extract(rank);
      for (std::size_t i = 0; i < A_grid.size(); ++i) {
        if (!hits[t][i] && c.size() >= std::uint64_t{thresholds[i]} + 2 &&
            diameter_exceeds(c, thresholds[i])) {
          hits[t][i] = 1;
        }
      }
    }
  });
  DiameterTailResult result;
  result.n = n;
  for (std::size_t i = 0; i < A_grid.size(); ++i) {
    std::uint64_t events = 0;
    for (const auto& h : hits) {
      events += h[i];
    }
    result.rows.push_back(make_row(A_grid[i], A_grid[i] * scale, events, config.trials));
  }
  result.regression = tail_regression(result.rows);
  return result;
}

std::vector<SmallComponentRow> run_small_component_diam(const ExperimentConfig& config,
                                                        std::uint64_t M,
                                                        const std::vector<double>& D2_grid,
                                                        double D1, unsigned threads) {
  config.validate();
  const std::uint64_t n = config.n_grid.front();
  const double p = single_p(config, n);
  if (M < 1 || double(M) >= std::pow(double(n), 2.0 / 3.0) / 2.0) {
    throw ValidationError("run_small_component_diam: need 1 <= M < n^{2/3} / 2");
  }
  const double log_term = std::log(double(n) / std::pow(double(M), 1.5));
  std::vector<double> thresholds;
  for (double D2 : D2_grid) {
    thresholds.push_back(D2 * std::sqrt(double(M) * log_term));
  }
  std::vector<std::vector<char>> hits(config.trials, std::vector<char>(D2_grid.size(), 0));
  parallel_for(config.trials, threads, [&](std::size_t t) {
    const RngSeed seed = trial_seed(config.seed, n, t);
    const Graph g = build_host(config.host, n, seed);
    const Partition partition(g, percolate(g, p, seed));
    for (std::size_t rank = 0; rank < partition.component_count(); ++rank) {
      const std::uint64_t size = partition.size(rank);
      if (size >= M) {
        continue;
      }
      if (size < 3) {
        break;
      }
      std::optional<Component> c;
      for (std::size_t i = 0; i < D2_grid.size(); ++i) {
        const auto R = static_cast<std::uint32_t>(std::floor(thresholds[i]));
        if (hits[t][i] || size < std::uint64_t{R} + 2) {
          continue;
        }
        if (!c) {
          c = partition.extract(rank);
        }
        if (diameter_exceeds(*c, R)) {
          hits[t][i] = 1;
        }
      }
    }
  });
  std::vector<SmallComponentRow> rows;
  const double bound = std::pow(std::pow(double(M), 1.5) / double(n), D1);
  for (std::size_t i = 0; i < D2_grid.size(); ++i) {
    SmallComponentRow row;
    row.D2 = D2_grid[i];
    row.threshold = thresholds[i];
    for (const auto& h : hits) {
      row.events += h[i];
    }
    row.trials = config.trials;
    row.estimate = double(row.events) / double(row.trials);
    row.wilson = wilson_interval(row.events, row.trials);
    row.bound = bound;
    row.consistent = row.wilson.lower <= bound;
    rows.push_back(row);
  }
  return rows;
}

EdgeTailResult edge_count_tail(const std::vector<ExperimentRecord>& records,
                               const std::vector<double>& A_grid) {
  EdgeTailResult out;
  std::vector<double> x;
  std::vector<double> y;
  for (double A : A_grid) {
    EdgeTailRow row;
    row.A = A;
    for (const auto& r : records) {
      if (r.component_rank != 0) {
        continue;
      }
      ++row.trials;
      row.events += double(r.edge_count) > A * std::pow(double(r.n), 2.0 / 3.0);
    }
    row.estimate = row.trials ? double(row.events) / double(row.trials) : 0.0;
    if (row.events >= 5) {
      x.push_back(std::log(A));
      y.push_back(std::log(row.estimate));
    }
    out.rows.push_back(row);
  }
  out.monotone = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].A > out.rows[i - 1].A && out.rows[i].estimate > out.rows[i - 1].estimate) {
      out.monotone = false;
    }
  }
  if (x.size() >= 3) {
    out.log_log = ols_fit(x, y);
  }
  return out;
}

std::vector<ChiPoint> chi_curve(const Graph& g, const std::vector<double>& p_grid,
                                std::uint64_t trials, RngSeed seed, unsigned threads) {
  if (g.is_implicit()) {
    throw ValidationError("chi_curve: host graph must be explicit");
  }
  if (p_grid.empty() || trials < 1) {
    throw ValidationError("chi_curve: need a non-empty grid and trials >= 1");
  }
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0 && p_grid[i] <= 1.0) || (i > 0 && !(p_grid[i] > p_grid[i - 1]))) {
      throw ValidationError("chi_curve: p grid must be strictly increasing inside [0, 1]");
    }
  }
  const double p_max = p_grid.back();
  const VertexId n = g.vertex_count();
  std::vector<std::vector<std::uint64_t>> sizes(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const RngSeed trial = seed.with_stream(seed.stream_id + t);
    CounterEngine roots(trial, Purpose::kRootChoice);
    const auto root = static_cast<VertexId>(roots.below(n));
    // join[w]: the smallest bottleneck (max edge uniform) over paths from the
    // root, so w is in the root's cluster at p exactly when join[w] < p.
    std::vector<double> join(n, std::numeric_limits<double>::infinity());
    using Entry = std::pair<double, VertexId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    join[root] = -1.0;
    frontier.emplace(-1.0, root);
    std::vector<double> settled;
    while (!frontier.empty()) {
      const auto [level, x] = frontier.top();
      frontier.pop();
      if (level > join[x]) {
        continue;
      }
      settled.push_back(level);
      for (const Incidence& inc : g.neighbors(x)) {
        const double u = edge_uniform(trial, inc.edge);
        if (u >= p_max) {
          continue;
        }
        const double through = std::max(level, u);
        if (through < join[inc.neighbor]) {
          join[inc.neighbor] = through;
          frontier.emplace(through, inc.neighbor);
        }
      }
    }
    std::sort(settled.begin(), settled.end());
    auto& out = sizes[t];
    for (double p : p_grid) {
      out.push_back(static_cast<std::uint64_t>(
          std::lower_bound(settled.begin(), settled.end(), p) - settled.begin()));
    }
  });
  std::vector<ChiPoint> curve;
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    RunningStats acc;
    for (const auto& s : sizes) {
      acc.add(double(s[i]));
    }
    curve.push_back({p_grid[i], acc.mean(), acc.standard_error()});
  }
  return curve;
}

CriticalEstimate critical_p(const std::vector<ChiPoint>& curve, std::uint64_t n,
                            double crossing_lambda) {
  if (curve.size() < 3) {
    throw ValidationError("critical_p: grid too coarse (needs at least 3 points)");
  }
  CriticalEstimate out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double derivative =
        (curve[i + 1].chi - curve[i - 1].chi) / (curve[i + 1].p - curve[i - 1].p);
    const double ratio = derivative / curve[i].chi;
    out.log_derivative.push_back(ratio);
    if (ratio > best) {
      best = ratio;
      out.p_hat = curve[i].p;
    }
  }
  const double target = crossing_lambda * cube_root(double(n));
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].chi >= target) {
      if (i == 0) {
        if (curve[0].chi == target) {
          out.crossing = curve[0].p;
        }
      } else {
        const double f = (target - curve[i - 1].chi) / (curve[i].chi - curve[i - 1].chi);
        out.crossing = curve[i - 1].p + f * (curve[i].p - curve[i - 1].p);
      }
      break;
    }
  }
  return out;
}

}  // namespace critwalk
