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
#include <string_view>
#include <vector>

#include "critwalk/components.hpp"
#include "critwalk/graph.hpp"
#include "critwalk/mixing.hpp"
#include "critwalk/rng.hpp"
#include "critwalk/stats.hpp"

namespace critwalk {

enum class Family { kComplete, kRegular, kHypercube, kTorus };

std::string_view family_name(Family family);
Family parse_family(std::string_view name);

struct HostSpec {
  Family family = Family::kComplete;
  std::uint32_t d = 3;    // regular only
  std::uint32_t dim = 2;  // torus only; hypercube dimension follows from n
};

// Degree used by the critical-window rule: n - 1 for K_n.
std::uint64_t host_degree(const HostSpec& host, std::uint64_t n);

// Host graph for one trial. Complete hosts are always implicit (percolated by
// direct edge sampling); random regular hosts are redrawn per trial.
Graph build_host(const HostSpec& host, std::uint64_t n, RngSeed trial_seed);

struct PRule {
  enum class Kind { kLambda, kExplicit, kGrid };
  Kind kind = Kind::kLambda;
  double lambda = 0.0;
  double p = 0.0;
  std::vector<double> grid;
};

// p = (1 + lambda n^{-1/3}) / n on K_n, / (d - 1) otherwise, clamped to [0, 1].
double critical_window_p(const HostSpec& host, std::uint64_t n, double lambda);

struct Caps {
  std::size_t exact_diameter = kExactDiameterCap;
  std::size_t exact_mixing = kExactMixingCap;
};

// Parameters for the lane-based lower-bound certificate. The default schedule takes
// L = beta^-3 D^2, h = beta^5 D^-3 s / 4, k = 5 L h, r = 10 L h with
// s = sqrt(|C|) standing in for n^{1/3}; m is |B(v,h)| unless
// m_from_ball is false, in which case m = h^3 beta D^-1 / s. Any nonzero
// override replaces the scheduled value.
struct Lemma54Schedule {
  double beta = 1.0;
  double D = 2.0;
  bool m_from_ball = true;
  std::uint32_t h = 0;
  std::uint64_t m = 0;
  std::uint32_t k = 0;
  std::uint32_t r = 0;
  std::uint32_t L = 0;
};

struct ExperimentConfig {
  HostSpec host;
  std::vector<std::uint64_t> n_grid;
  PRule p_rule;
  std::uint64_t trials = 1;
  RngSeed seed;
  Caps caps;
  std::string output;
  bool measure_mixing = false;
  std::uint32_t components_per_trial = 1;
  Lemma54Schedule schedule;
  bool timing = false;
  bool require_exact = false;  // runtime only; not part of the JSON form

  // Throws ValidationError on unsorted or empty grids, trials == 0, p outside
  // [0, 1], or a grid value the family cannot realize.
  void validate() const;
};

ExperimentConfig parse_config(std::string_view json_text);
std::string config_to_json(const ExperimentConfig& config);

// Stream for (n, trial): seed.stream_id + (n << 24) + trial.
RngSeed trial_seed(const RngSeed& base, std::uint64_t n, std::uint64_t trial);

struct Range {
  std::uint64_t lower = 0;
  std::uint64_t upper = 0;
  bool exact() const { return lower == upper; }
};

struct ExperimentRecord {
  std::uint64_t n = 0;
  double p = 0.0;
  std::optional<double> lambda;
  std::uint64_t trial_id = 0;
  std::uint32_t component_rank = 0;
  std::uint64_t size = 0;
  std::uint64_t edge_count = 0;
  Range diameter;
  std::optional<Range> t_mix;
  std::optional<std::uint64_t> upper_diam;
  std::optional<std::uint64_t> upper_hit;
  std::optional<Lemma54Certificate> lower_lemma54;
  std::optional<double> wall_time;
  std::vector<std::string> flags;

  // lower_lemma54 <= t_mix <= min(upper_diam, upper_hit) wherever present.
  bool consistent() const;
};

std::string record_to_json(const ExperimentRecord& record);
std::string record_csv_header();
std::string record_to_csv(const ExperimentRecord& record);

struct AnalysisOptions {
  Caps caps;
  bool measure_mixing = false;
  Lemma54Schedule schedule;
  bool timing = false;
  // Throw CapExceeded instead of falling back to bounds.
  bool require_exact = false;
};

// Diameter, mixing time or bracket, and the three certificates for one
// component.
void analyze_component(const Component& c, const AnalysisOptions& options,
                       ExperimentRecord& record);

Lemma54Certificate scheduled_lemma54(const LazyChain& chain, const Lemma54Schedule& schedule);

// All records of the configuration, sorted by (n, trial_id, component_rank).
std::vector<ExperimentRecord> run_trials(const ExperimentConfig& config, unsigned threads);

// Trials on a fixed host: trial t percolates `g` under trial_seed(seed, n, t)
// and analyzes the `components` largest clusters.
std::vector<ExperimentRecord> run_trials_on_host(const Graph& g, double p,
                                                 std::optional<double> lambda,
                                                 std::uint64_t trials, RngSeed seed,
                                                 const AnalysisOptions& options,
                                                 std::uint32_t components, unsigned threads);

struct Quantiles {
  double q10 = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
};

struct ScalingSummary {
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  Quantiles size;
  Quantiles diameter;
  std::optional<double> t_mix_median;  // censored median, capped trials as +inf
  std::uint64_t t_mix_exact = 0;
  std::uint64_t t_mix_capped = 0;
};

struct FitOutcome {
  std::optional<LinearFit> fit;
  std::string note;  // why no fit was reported
};

struct ScalingResult {
  std::vector<ExperimentRecord> records;
  std::vector<ScalingSummary> per_n;
  FitOutcome size_fit;
  FitOutcome diameter_fit;
  FitOutcome mixing_fit;
};

// Least squares of log median against log n over (n, median) pairs; refused
// with fewer than 4 points or a span under 3 octaves.
FitOutcome fit_log_log(const std::vector<std::pair<double, double>>& points);

// Median with right-censored entries: nullopt when the median falls among them.
std::optional<double> censored_median(std::vector<double> exact, std::size_t censored);

ScalingResult run_scaling(const ExperimentConfig& config, unsigned threads);
ScalingResult summarize_scaling(const ExperimentConfig& config,
                                std::vector<ExperimentRecord> records);

struct ExceedanceRow {
  double A = 0.0;
  double threshold = 0.0;
  std::uint64_t events = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  Interval wilson;
  // With zero events: the one-sided 95% upper bound 1 - 0.05^{1/trials}.
  std::optional<double> upper_bound_if_none;
};

struct TailRegression {
  std::optional<LinearFit> fit;  // log estimate against A^{3/2}
  double c_hat = 0.0;            // -slope
  Interval slope_ci;             // slope +- 1.96 se
  bool slope_negative_ci = false;
  std::string note;
};

struct DiameterTailResult {
  std::uint64_t n = 0;
  std::vector<ExceedanceRow> rows;
  TailRegression regression;
};

// P(some component has diameter > A n^{1/3}) at the first grid n.
DiameterTailResult run_tail_diam(const ExperimentConfig& config, const std::vector<double>& A_grid,
                                 unsigned threads);

// Weighted regression of log estimate on A^{3/2} over rows with >= 5 events
// and estimate < 1; weights from the delta-method variance of the log.
TailRegression tail_regression(const std::vector<ExceedanceRow>& rows);

struct SmallComponentRow {
  double D2 = 0.0;
  double threshold = 0.0;  // D2 sqrt(M log(n / M^{3/2}))
  std::uint64_t events = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
  Interval wilson;
  double bound = 0.0;      // (M^{3/2} / n)^{D1}
  bool consistent = false; // wilson.lower <= bound
};

std::vector<SmallComponentRow> run_small_component_diam(const ExperimentConfig& config,
                                                        std::uint64_t M,
                                                        const std::vector<double>& D2_grid,
                                                        double D1, unsigned threads);

struct EdgeTailRow {
  double A = 0.0;
  std::uint64_t events = 0;
  std::uint64_t trials = 0;
  double estimate = 0.0;
};

struct EdgeTailResult {
  std::vector<EdgeTailRow> rows;  // P(|E(C_1)| > A n^{2/3}) pooled over n
  bool monotone = false;
  std::optional<LinearFit> log_log;  // log estimate against log A, rows with >= 5 events
};

EdgeTailResult edge_count_tail(const std::vector<ExperimentRecord>& records,
                               const std::vector<double>& A_grid);

struct ChiPoint {
  double p = 0.0;
  double chi = 0.0;
  double sigma = 0.0;
};

// Mean cluster size of a uniform root with one set of edge uniforms per trial
// shared by every p in the grid (stream seed.stream_id + t).
std::vector<ChiPoint> chi_curve(const Graph& g, const std::vector<double>& p_grid,
                                std::uint64_t trials, RngSeed seed, unsigned threads = 1);

struct CriticalEstimate {
  double p_hat = 0.0;                 // argmax chi'/chi, ties to the smaller p
  std::vector<double> log_derivative; // chi'/chi at interior points
  std::optional<double> crossing;     // p with chi = lambda n^{1/3}, interpolated
};

CriticalEstimate critical_p(const std::vector<ChiPoint>& curve, std::uint64_t n,
                            double crossing_lambda = 1.0);

}  // namespace critwalk
