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

#include <nlohmann/json.hpp>

#include "critwalk/errors.hpp"
#include "critwalk/experiment.hpp"
#include "oracles/oracles.hpp"
#include "oracles/samples.hpp"

namespace critwalk {
namespace {

ExperimentConfig complete_config(std::vector<std::uint64_t> grid, std::uint64_t trials) {
  ExperimentConfig c;
  c.host.family = Family::kComplete;
  c.n_grid = std::move(grid);
  c.trials = trials;
  c.seed = {2024, 0};
  return c;
}

TEST(Config, ParsesAndRoundTrips) {
  const auto c = parse_config(R"({"family": "regular", "d": 3, "n_grid": [1024, 2048],
      "p_rule": {"kind": "lambda", "lambda": -1}, "trials": 5, "seed": "0x10",
      "caps": {"exact_mixing": 500}, "measure_mixing": true})");
  EXPECT_EQ(c.host.family, Family::kRegular);
  EXPECT_EQ(c.seed.seed, 16u);
  EXPECT_EQ(c.caps.exact_mixing, 500u);
  EXPECT_EQ(c.caps.exact_diameter, kExactDiameterCap);
  EXPECT_DOUBLE_EQ(c.p_rule.lambda, -1.0);
  const auto again = parse_config(config_to_json(c));
  EXPECT_EQ(config_to_json(again), config_to_json(c));
}

TEST(Config, RejectsInvalid) {
  EXPECT_THROW(parse_config(R"({"family": "complete", "n_grid": [64], "bogus": 1})"),
               ValidationError);
  EXPECT_THROW(parse_config(R"({"family": "complete", "n_grid": [128, 64]})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"family": "complete", "n_grid": [64], "trials": 0})"),
               ValidationError);
  EXPECT_THROW(
      parse_config(R"({"family": "complete", "n_grid": [64], "p_rule": {"kind": "p", "p": 2}})"),
      ValidationError);
  EXPECT_THROW(parse_config(R"({"family": "regular", "d": 3, "n_grid": [65]})"), ValidationError);
  EXPECT_THROW(parse_config(R"({"family": "hypercube", "n_grid": [100]})"), ValidationError);
  EXPECT_THROW(parse_config("[1, 2]"), ValidationError);
  EXPECT_THROW(parse_config("{"), ValidationError);
  EXPECT_THROW(parse_family("lattice"), ValidationError);
}

TEST(Config, CriticalWindow) {
  HostSpec complete;
  EXPECT_DOUBLE_EQ(critical_window_p(complete, 1000, 0.0), 1.0 / 1000);
  EXPECT_DOUBLE_EQ(critical_window_p(complete, 1000, 1.0), 1.1 / 1000);
  HostSpec regular{Family::kRegular, 3, 2};
  EXPECT_DOUBLE_EQ(critical_window_p(regular, 1 << 15, -1.0), (1.0 - std::pow(2.0, -5)) / 2);
  EXPECT_EQ(host_degree(regular, 100), 3u);
  EXPECT_EQ(host_degree({Family::kHypercube, 3, 2}, 256), 8u);
  EXPECT_EQ(host_degree({Family::kTorus, 3, 2}, 25), 4u);
}

TEST(Seeds, TrialStreamsAreDistinct) {
  const RngSeed base{5, 0};
  EXPECT_FALSE(trial_seed(base, 64, 0) == trial_seed(base, 64, 1));
  EXPECT_FALSE(trial_seed(base, 64, 0) == trial_seed(base, 128, 0));
  EXPECT_EQ(trial_seed(base, 64, 3), trial_seed(base, 64, 3));
}

TEST(Records, ConsistencyAndJson) {
  ExperimentRecord r;
  r.n = 100;
  r.p = 0.01;
  r.size = 10;
  r.edge_count = 9;
  r.diameter = {4, 4};
  r.t_mix = Range{30, 30};
  r.upper_diam = 288;
  r.upper_hit = 200;
  EXPECT_TRUE(r.consistent());
  r.upper_hit = 20;
  EXPECT_FALSE(r.consistent());
  r.upper_hit = 200;
  const auto j = nlohmann::json::parse(record_to_json(r));
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["diameter"], 4);
  EXPECT_EQ(j["t_mix"], 30);
  EXPECT_TRUE(j["lambda"].is_null());
  EXPECT_TRUE(j["wall_time"].is_null());
  r.t_mix = Range{10, 50};
  const auto k = nlohmann::json::parse(record_to_json(r));
  EXPECT_EQ(k["t_mix"]["lower"], 10);
  EXPECT_EQ(k["t_mix"]["upper"], 50);
  const std::string csv = record_to_csv(r);
  const std::string header = record_csv_header();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), ','), std::count(header.begin(), header.end(), ','));
}

TEST(Analyze, ExactAndCappedPaths) {
  const Component c = sample::tree(120, 3);
  AnalysisOptions options;
  options.measure_mixing = true;
  ExperimentRecord exact;
  analyze_component(c, options, exact);
  EXPECT_TRUE(exact.diameter.exact());
  EXPECT_EQ(int(exact.diameter.lower), oracle::diameter(c));
  ASSERT_TRUE(exact.t_mix && exact.t_mix->exact());
  EXPECT_EQ(exact.t_mix->lower, oracle::mixing_time_by_iteration(c));
  EXPECT_TRUE(exact.consistent());
  EXPECT_FALSE(exact.wall_time.has_value());

  options.caps.exact_mixing = 50;
  ExperimentRecord capped;
  analyze_component(c, options, capped);
  ASSERT_TRUE(capped.t_mix.has_value());
  EXPECT_LE(capped.t_mix->lower, exact.t_mix->lower);
  EXPECT_GE(capped.t_mix->upper, exact.t_mix->lower);
  EXPECT_NE(std::find(capped.flags.begin(), capped.flags.end(), "mixing_capped"),
            capped.flags.end());

  options.require_exact = true;
  ExperimentRecord strict;
  EXPECT_THROW(analyze_component(c, options, strict), CapExceeded);

  options = {};
  options.timing = true;
  ExperimentRecord timed;
  analyze_component(c, options, timed);
  EXPECT_TRUE(timed.wall_time.has_value());
}

TEST(Trials, DeterministicAcrossThreadCounts) {
  auto config = complete_config({1024, 2048}, 6);
  config.measure_mixing = true;
  config.components_per_trial = 2;
  const auto a = run_trials(config, 1);
  const auto b = run_trials(config, 3);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_EQ(a.size(), 2u * 6 * 2);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(record_to_json(a[i]), record_to_json(b[i]));
    EXPECT_TRUE(a[i].consistent());
  }
  ExperimentConfig regular = config;
  regular.host = {Family::kRegular, 3, 2};
  regular.n_grid = {1000};
  for (const auto& r : run_trials(regular, 2)) {
    EXPECT_TRUE(r.consistent());
    EXPECT_NEAR(r.p, 0.5, 1e-15);
  }
}

TEST(Scaling, TrivialGridHasNoFit) {
  const auto result = run_scaling(complete_config({16}, 1), 1);
  EXPECT_EQ(result.records.size(), 1u);
  EXPECT_FALSE(result.size_fit.fit.has_value());
  EXPECT_FALSE(result.diameter_fit.fit.has_value());
  EXPECT_FALSE(result.size_fit.note.empty());
}

TEST(Scaling, FitRules) {
  EXPECT_FALSE(fit_log_log({{16, 2}, {32, 3}, {64, 4}}).fit);
  EXPECT_FALSE(fit_log_log({{16, 2}, {20, 3}, {24, 4}, {28, 5}}).fit);
  const auto fit = fit_log_log({{8, 2}, {16, 2 * std::cbrt(2.0)}, {32, 2 * std::cbrt(4.0)},
                                {64, 4}});
  ASSERT_TRUE(fit.fit);
  EXPECT_NEAR(fit.fit->slope, 1.0 / 3, 1e-12);
}

TEST(Scaling, CensoredMedian) {
  EXPECT_EQ(censored_median({1, 2, 3}, 0), 2.0);
  EXPECT_EQ(censored_median({1, 2, 3}, 1), 2.5);
  EXPECT_EQ(censored_median({1, 2, 3}, 2), 3.0);
  EXPECT_EQ(censored_median({1, 2}, 2), std::nullopt);
  EXPECT_EQ(censored_median({4, 1}, 1), 4.0);
  EXPECT_EQ(censored_median({}, 0), std::nullopt);
}

TEST(Tails, DiameterExceedance) {
  auto config = complete_config({512}, 200);
  config.p_rule.lambda = 0;
  const auto result = run_tail_diam(config, {0.1, 1.0, 2.0}, 2);
  ASSERT_EQ(result.rows.size(), 3u);
  // 0.1 * 512^{1/3} < 1, so any edge at all exceeds the threshold.
  EXPECT_NEAR(result.rows[0].threshold, 0.8, 1e-12);
  EXPECT_GT(result.rows[0].estimate, 0.99);
  EXPECT_GE(result.rows[0].estimate, result.rows[1].estimate);
  EXPECT_GE(result.rows[1].estimate, result.rows[2].estimate);
  ExperimentConfig torus = config;
  torus.host.family = Family::kTorus;
  EXPECT_THROW(run_tail_diam(torus, {1.0}, 1), ValidationError);
}

TEST(Tails, RegressionOnSyntheticData) {
  std::vector<ExceedanceRow> rows;
  for (double A : {1.0, 2.0, 3.0, 4.0}) {
    ExceedanceRow row;
    row.A = A;
    row.trials = 100000;
    row.estimate = std::exp(-0.5 * std::pow(A, 1.5));
    row.events = static_cast<std::uint64_t>(row.estimate * row.trials);
    rows.push_back(row);
  }
  const auto reg = tail_regression(rows);
  ASSERT_TRUE(reg.fit);
  EXPECT_NEAR(reg.c_hat, 0.5, 1e-3);
  EXPECT_TRUE(reg.slope_negative_ci);
  rows.resize(2);
  EXPECT_FALSE(tail_regression(rows).fit);
}

TEST(Tails, SmallComponents) {
  auto config = complete_config({4096}, 40);
  const auto rows = run_small_component_diam(config, 1, {1.0}, 1.0, 1);
  EXPECT_EQ(rows[0].events, 0u);
  const auto huge = run_small_component_diam(config, 16, {1e6, 0.5}, 1.0, 1);
  EXPECT_EQ(huge[0].events, 0u);
  EXPECT_GE(huge[1].estimate, huge[0].estimate);
  EXPECT_THROW(run_small_component_diam(config, 200, {1.0}, 1.0, 1), ValidationError);
}

TEST(Tails, EdgeCounts) {
  std::vector<ExperimentRecord> records;
  for (std::uint64_t e : {10u, 20u, 40u, 80u}) {
    ExperimentRecord r;
    r.n = 1000;
    r.edge_count = e;
    records.push_back(r);
  }
  const auto result = edge_count_tail(records, {0.5, 1.0, 4.0});
  // 1000^{2/3} = 100: thresholds 50, 100, 400.
  EXPECT_DOUBLE_EQ(result.rows[0].estimate, 0.25);
  EXPECT_DOUBLE_EQ(result.rows[1].estimate, 0.0);
  EXPECT_TRUE(result.monotone);
}

TEST(Chi, CoupledCurveIsMonotone) {
  const Graph k100 = complete_graph(100);
  std::vector<double> grid;
  for (int i = 0; i < 21; ++i) {
    grid.push_back(0.005 + 0.0005 * i);
  }
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto curve = chi_curve(k100, grid, 20, {s, 0});
    for (std::size_t i = 1; i < curve.size(); ++i) {
      EXPECT_GE(curve[i].chi, curve[i - 1].chi);
    }
  }
  const auto ends = chi_curve(k100, {1e-12, 0.5, 1.0}, 10, {1, 0});
  EXPECT_NEAR(ends[0].chi, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(ends[2].chi, 100.0);
  EXPECT_THROW(chi_curve(k100, {0.2, 0.1}, 5, {}), ValidationError);
}

TEST(Chi, CriticalEstimate) {
  std::vector<ChiPoint> curve;
  for (int i = 0; i < 9; ++i) {
    const double p = 0.1 * (i + 1);
    curve.push_back({p, std::exp(-std::pow(p - 0.5, 2) * 10) * 10 + p, 0});
  }
  const auto est = critical_p(curve, 1000, 1.0);
  EXPECT_EQ(est.log_derivative.size(), 7u);
  EXPECT_GT(est.p_hat, 0.1);
  EXPECT_LT(est.p_hat, 0.5);
  ASSERT_TRUE(est.crossing.has_value());
  EXPECT_THROW(critical_p({curve[0], curve[1]}, 1000), ValidationError);
}

}  // namespace
}  // namespace critwalk
