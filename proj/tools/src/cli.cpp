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

#include "critwalk/cli.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "critwalk/branching.hpp"
#include "critwalk/errors.hpp"
#include "critwalk/experiment.hpp"
#include "critwalk/graph_io.hpp"
#include "critwalk/parallel.hpp"
#include "critwalk/percolation.hpp"

namespace critwalk {
namespace {

using Json = nlohmann::ordered_json;

struct GlobalOptions {
  std::string seed = "0";
  unsigned threads = 1;
  std::string out;
  std::string format = "jsonl";
  std::string config;
  bool timing = false;
};

struct HostOptions {
  std::string family = "complete";
  std::uint64_t n = 0;
  std::uint32_t d = 3;
  std::uint32_t dim = 2;
  std::string graph;
};

struct POptions {
  std::optional<double> p;
  std::optional<double> lambda;
};

struct AnalyzeOptions {
  std::uint64_t trials = 1;
  std::uint32_t components = 1;
  bool mixing = false;
  bool require_exact = false;
  std::size_t cap_diameter = kExactDiameterCap;
  std::size_t cap_mixing = kExactMixingCap;
  Lemma54Schedule schedule;
};

// Writes JSON lines or CSV. CSV repeats the header whenever the column set
// changes, so mixed tables stay readable.
class Writer {
 public:
  Writer(std::ostream& out, std::string format) : out_(out), format_(std::move(format)) {}

  void records(const std::vector<ExperimentRecord>& records) {
    if (format_ == "csv") {
      out_ << record_csv_header() << '\n';
      for (const auto& r : records) {
        out_ << record_to_csv(r) << '\n';
      }
    } else {
      for (const auto& r : records) {
        out_ << record_to_json(r) << '\n';
      }
    }
  }

  void row(const Json& j) {
    if (format_ != "csv") {
      out_ << j.dump() << '\n';
      return;
    }
    std::vector<std::string> keys;
    for (const auto& [key, value] : j.items()) {
      keys.push_back(key);
    }
    if (keys != header_) {
      header_ = keys;
      for (std::size_t i = 0; i < keys.size(); ++i) {
        out_ << (i ? "," : "") << keys[i];
      }
      out_ << '\n';
    }
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      out_ << (first ? "" : ",");
      first = false;
      if (value.is_string()) {
        out_ << value.get<std::string>();
      } else if (!value.is_null()) {
        out_ << value.dump();
      }
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  std::string format_;
  std::vector<std::string> header_;
};

void add_host_options(CLI::App* sub, HostOptions& host, bool with_graph) {
  sub->add_option("--family", host.family, "complete | regular | hypercube | torus")
      ->check(CLI::IsMember({"complete", "regular", "hypercube", "torus"}));
  sub->add_option("--n", host.n, "number of vertices");
  sub->add_option("--d", host.d, "degree (regular family)");
  sub->add_option("--dim", host.dim, "dimension (torus family)");
  if (with_graph) {
    sub->add_option("--graph", host.graph, "edge-list file used as the host");
  }
}

void add_p_options(CLI::App* sub, POptions& p) {
  auto* po = sub->add_option("--p", p.p, "retention probability");
  auto* lo = sub->add_option("--lambda", p.lambda,
                             "critical-window parameter: p = (1 + lambda n^{-1/3}) / (d - 1)");
  po->excludes(lo);
}

void add_analyze_options(CLI::App* sub, AnalyzeOptions& a) {
  sub->add_option("--trials", a.trials, "independent trials");
  sub->add_option("--components", a.components, "largest components analyzed per trial");
  sub->add_option("--cap-diameter", a.cap_diameter, "exact-diameter size cap");
  sub->add_option("--cap-mixing", a.cap_mixing, "exact-mixing size cap");
  sub->add_option("--beta", a.schedule.beta, "lane bound schedule beta");
  sub->add_option("--D", a.schedule.D, "lane bound schedule D");
  sub->add_option("--lemma-h", a.schedule.h, "override h");
  sub->add_option("--lemma-m", a.schedule.m, "override m");
  sub->add_option("--lemma-k", a.schedule.k, "override k");
  sub->add_option("--lemma-r", a.schedule.r, "override r");
  sub->add_option("--lemma-L", a.schedule.L, "override L");
  sub->add_flag("!--scheduled-m", a.schedule.m_from_ball,
                "use the scheduled m instead of |B(v,h)|");
}

HostSpec host_spec(const HostOptions& h) {
  HostSpec spec;
  spec.family = parse_family(h.family);
  spec.d = h.d;
  spec.dim = h.dim;
  return spec;
}

PRule p_rule(const POptions& p) {
  PRule rule;
  if (p.p) {
    rule.kind = PRule::Kind::kExplicit;
    rule.p = *p.p;
  } else {
    rule.kind = PRule::Kind::kLambda;
    rule.lambda = p.lambda.value_or(0.0);
  }
  return rule;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ExperimentConfig config_from(const GlobalOptions& g, const HostOptions& h, const POptions& p,
                             const AnalyzeOptions& a, const std::vector<std::uint64_t>& n_grid,
                             bool seed_given) {
  ExperimentConfig config;
  if (!g.config.empty()) {
    config = parse_config(read_file(g.config));
    if (seed_given) {
      config.seed.seed = parse_seed(g.seed);
    }
    config.timing = config.timing || g.timing;
    return config;
  }
  config.host = host_spec(h);
  config.n_grid = n_grid;
  config.p_rule = p_rule(p);
  config.trials = a.trials;
  config.seed.seed = parse_seed(g.seed);
  config.caps = {a.cap_diameter, a.cap_mixing};
  config.measure_mixing = a.mixing;
  config.components_per_trial = a.components;
  config.schedule = a.schedule;
  config.timing = g.timing;
  config.validate();
  return config;
}

Graph explicit_host(const HostOptions& h, RngSeed seed) {
  if (!h.graph.empty()) {
    return load_edge_list(h.graph);
  }
  if (h.n == 0) {
    throw ValidationError("--n is required unless --graph is given");
  }
  const HostSpec spec = host_spec(h);
  if (spec.family == Family::kComplete) {
    return complete_graph(static_cast<VertexId>(h.n));
  }
  return build_host(spec, h.n, seed);
}

Json fit_json(const FitOutcome& f) {
  if (!f.fit) {
    return Json{{"note", f.note}};
  }
  return Json{{"slope", f.fit->slope},         {"slope_se", f.fit->slope_se},
              {"intercept", f.fit->intercept}, {"r_squared", f.fit->r_squared},
              {"points", f.fit->points}};
}

Json quantiles_json(const Quantiles& q) {
  return Json{{"q10", q.q10}, {"q50", q.q50}, {"q90", q.q90}};
}

Json interval_json(const Interval& i) { return Json{{"lower", i.lower}, {"upper", i.upper}}; }

std::vector<double> parse_p_range(const std::string& text) {
  // lo:hi:count, inclusive.
  std::vector<double> grid;
  double lo = 0;
  double hi = 0;
  long count = 0;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(text);
  if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 2 || !(hi > lo)) {
    throw ValidationError("--p-range must be lo:hi:count with hi > lo and count >= 2");
  }
  for (long i = 0; i < count; ++i) {
    grid.push_back(lo + (hi - lo) * double(i) / double(count - 1));
  }
  return grid;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"critwalk: critical percolation clusters, their diameters and mixing times"};
  app.require_subcommand(1);
  GlobalOptions global;
  global.threads = default_thread_count();
  auto* seed_opt = app.add_option("--seed", global.seed, "seed, decimal or 0x-prefixed hex");
  app.add_option("--threads", global.threads, "worker threads (default: CRITWALK_THREADS)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", global.out, "output file (default: standard output)");
  app.add_option("--format", global.format, "jsonl | csv")->check(CLI::IsMember({"jsonl", "csv"}));
  app.add_option("--config", global.config, "experiment configuration (JSON)");
  app.add_flag("--timing", global.timing, "record wall-clock time per component");
  app.fallthrough();

  HostOptions host;
  POptions prob;
  AnalyzeOptions analyze;

  auto* generate = app.add_subcommand("generate", "write a host graph as an edge list");
  add_host_options(generate, host, false);

  auto* percolate_cmd = app.add_subcommand("percolate", "write the retained subgraph");
  add_host_options(percolate_cmd, host, true);
  add_p_options(percolate_cmd, prob);

  auto* analyze_cmd = app.add_subcommand("analyze", "per-component statistics and certificates");
  add_host_options(analyze_cmd, host, true);
  add_p_options(analyze_cmd, prob);
  add_analyze_options(analyze_cmd, analyze);
  analyze_cmd->add_flag("--mixing", analyze.mixing, "also compute mixing times and bounds");

  auto* mixing_cmd = app.add_subcommand("mixing", "exact mixing times with all bounds");
  add_host_options(mixing_cmd, host, true);
  add_p_options(mixing_cmd, prob);
  add_analyze_options(mixing_cmd, analyze);
  mixing_cmd->add_flag("--require-exact", analyze.require_exact,
                       "fail with exit code 2 instead of reporting bounds above the caps");

  std::vector<std::uint64_t> n_grid;
  std::string summary_path;
  auto* scaling = app.add_subcommand("scaling", "scaling-law fits over an n grid");
  add_host_options(scaling, host, false);
  add_p_options(scaling, prob);
  add_analyze_options(scaling, analyze);
  scaling->add_option("--n-grid", n_grid, "comma-separated sizes")->delimiter(',');
  scaling->add_flag("--mixing", analyze.mixing, "measure exact mixing times");
  scaling->add_option("--summary", summary_path, "write the fit summary here");

  std::string tail_kind = "diam";
  std::vector<double> a_grid;
  std::uint64_t small_m = 0;
  std::vector<double> d2_grid{1, 2, 4, 8};
  double d1 = 1.0;
  auto* tails = app.add_subcommand("tails", "tail experiments");
  add_host_options(tails, host, false);
  add_p_options(tails, prob);
  add_analyze_options(tails, analyze);
  tails->add_option("--kind", tail_kind, "diam | small | edges")
      ->check(CLI::IsMember({"diam", "small", "edges"}));
  tails->add_option("--A", a_grid, "comma-separated A values")->delimiter(',');
  tails->add_option("--M", small_m, "component-size limit (kind small)");
  tails->add_option("--D2", d2_grid, "comma-separated D2 values (kind small)")->delimiter(',');
  tails->add_option("--D1", d1, "exponent of the comparison bound (kind small)");

  std::vector<double> p_grid;
  std::string p_range;
  double crossing_lambda = 1.0;
  std::uint64_t chi_trials = 100;
  auto* chi = app.add_subcommand("chi", "expected cluster size curve and critical-p estimates");
  add_host_options(chi, host, true);
  chi->add_option("--p-grid", p_grid, "comma-separated p values")->delimiter(',');
  chi->add_option("--p-range", p_range, "lo:hi:count");
  chi->add_option("--trials", chi_trials, "trials");
  chi->add_option("--crossing-lambda", crossing_lambda, "lambda of the chi = lambda n^{1/3} rule");

  std::uint32_t bp_d = 3;
  double bp_p = 0.5;
  std::uint64_t bp_mmax = 10000;
  std::uint64_t bp_rows = 50;
  std::vector<std::uint64_t> bp_m_values;
  std::uint64_t bp_samples = 0;
  std::uint64_t bp_cap = kDefaultProgenyCap;
  auto* bp = app.add_subcommand("bp", "Galton-Watson progeny law, tails, sampler comparison");
  bp->add_option("--d", bp_d, "degree");
  bp->add_option("--p", bp_p, "retention probability");
  bp->add_option("--mmax", bp_mmax, "largest total size in the exact law");
  bp->add_option("--rows", bp_rows, "pmf rows printed");
  bp->add_option("--M", bp_m_values, "tail points (default: powers of ten)")->delimiter(',');
  bp->add_option("--samples", bp_samples, "Monte Carlo samples compared with the exact law");
  bp->add_option("--cap", bp_cap, "sampler population cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    std::unique_ptr<std::ofstream> file;
    if (!global.out.empty()) {
      file = std::make_unique<std::ofstream>(global.out);
      if (!*file) {
        throw ValidationError("cannot open output '" + global.out + "'");
      }
    }
    std::ostream& sink = file ? *file : out;
    Writer writer(sink, global.format);
    const RngSeed seed{parse_seed(global.seed), 0};
    const bool seed_given = seed_opt->count() > 0;

    if (generate->parsed()) {
      write_edge_list(explicit_host(host, seed), sink);
    } else if (percolate_cmd->parsed()) {
      Graph g = host.graph.empty() ? build_host(host_spec(host), host.n, seed)
                                   : load_edge_list(host.graph);
      double p = 0.0;
      if (prob.p) {
        p = *prob.p;
      } else if (host.graph.empty()) {
        p = critical_window_p(host_spec(host), host.n, prob.lambda.value_or(0.0));
      } else {
        throw ValidationError("--p is required with --graph");
      }
      const PercolationMask mask = percolate(g, p, seed);
      write_edge_list(Graph::from_edges(g.vertex_count(), mask.retained_edges(g)), sink);
    } else if (analyze_cmd->parsed() || mixing_cmd->parsed()) {
      if (mixing_cmd->parsed()) {
        analyze.mixing = true;
      }
      if (!host.graph.empty()) {
        if (!prob.p) {
          throw ValidationError("--p is required with --graph");
        }
        AnalysisOptions options;
        options.caps = {analyze.cap_diameter, analyze.cap_mixing};
        options.measure_mixing = analyze.mixing;
        options.schedule = analyze.schedule;
        options.timing = global.timing;
        options.require_exact = analyze.require_exact;
        const Graph g = load_edge_list(host.graph);
        writer.records(run_trials_on_host(g, *prob.p, std::nullopt, analyze.trials, seed, options,
                                          analyze.components, global.threads));
      } else {
        if (global.config.empty() && host.n == 0) {
          throw ValidationError("--n is required unless --graph or --config is given");
        }
        ExperimentConfig config =
            config_from(global, host, prob, analyze, {host.n}, seed_given);
        if (mixing_cmd->parsed()) {
          config.measure_mixing = true;
        }
        config.require_exact = analyze.require_exact;
        writer.records(run_trials(config, global.threads));
      }
    } else if (scaling->parsed()) {
      const ExperimentConfig config =
          config_from(global, host, prob, analyze, n_grid, seed_given);
      const ScalingResult result = run_scaling(config, global.threads);
      writer.records(result.records);
      Json summary;
      Json per_n = Json::array();
      for (const auto& s : result.per_n) {
        per_n.push_back(Json{{"n", s.n},
                             {"trials", s.trials},
                             {"size", quantiles_json(s.size)},
                             {"diameter", quantiles_json(s.diameter)},
                             {"t_mix_median", s.t_mix_median ? Json(*s.t_mix_median) : Json()},
                             {"t_mix_exact", s.t_mix_exact},
                             {"t_mix_capped", s.t_mix_capped}});
      }
      summary["per_n"] = per_n;
      summary["fits"] = Json{{"size", fit_json(result.size_fit)},
                             {"diameter", fit_json(result.diameter_fit)},
                             {"mixing", fit_json(result.mixing_fit)}};
      if (!summary_path.empty()) {
        std::ofstream s(summary_path);
        s << summary.dump(2) << '\n';
      } else if (file) {
        out << summary.dump(2) << '\n';
      } else {
        err << summary.dump(2) << '\n';
      }
    } else if (tails->parsed()) {
      if (global.config.empty() && host.n == 0) {
        throw ValidationError("--n is required unless --config is given");
      }
      const ExperimentConfig config =
          config_from(global, host, prob, analyze, {host.n}, seed_given);
      if (tail_kind == "diam") {
        if (a_grid.empty()) {
          a_grid = {1, 2, 3, 4, 5, 6};
        }
        const DiameterTailResult r = run_tail_diam(config, a_grid, global.threads);
        for (const auto& row : r.rows) {
          writer.row(Json{{"table", "diameter_tail"},
                          {"n", r.n},
                          {"A", row.A},
                          {"threshold", row.threshold},
                          {"events", row.events},
                          {"trials", row.trials},
                          {"estimate", row.estimate},
                          {"wilson_lower", row.wilson.lower},
                          {"wilson_upper", row.wilson.upper},
                          {"upper_bound_if_none", row.upper_bound_if_none
                                                      ? Json(*row.upper_bound_if_none)
                                                      : Json()}});
        }
        const TailRegression& g = r.regression;
        writer.row(Json{{"table", "diameter_tail_fit"},
                        {"slope", g.fit ? Json(g.fit->slope) : Json()},
                        {"slope_se", g.fit ? Json(g.fit->slope_se) : Json()},
                        {"c_hat", g.fit ? Json(g.c_hat) : Json()},
                        {"ci_lower", g.fit ? Json(g.slope_ci.lower) : Json()},
                        {"ci_upper", g.fit ? Json(g.slope_ci.upper) : Json()},
                        {"ci_excludes_zero", g.slope_negative_ci},
                        {"note", g.note}});
      } else if (tail_kind == "small") {
        const auto rows =
            run_small_component_diam(config, small_m, d2_grid, d1, global.threads);
        for (const auto& row : rows) {
          writer.row(Json{{"table", "small_component_diameter"},
                          {"M", small_m},
                          {"D2", row.D2},
                          {"threshold", row.threshold},
                          {"events", row.events},
                          {"trials", row.trials},
                          {"estimate", row.estimate},
                          {"wilson_lower", row.wilson.lower},
                          {"wilson_upper", row.wilson.upper},
                          {"bound", row.bound},
                          {"consistent", row.consistent}});
        }
      } else {
        if (a_grid.empty()) {
          a_grid = {1, 2, 4, 8};
        }
        const EdgeTailResult r = edge_count_tail(run_trials(config, global.threads), a_grid);
        for (const auto& row : r.rows) {
          writer.row(Json{{"table", "edge_tail"},
                          {"A", row.A},
                          {"events", row.events},
                          {"trials", row.trials},
                          {"estimate", row.estimate}});
        }
        writer.row(Json{{"table", "edge_tail_fit"},
                        {"monotone", r.monotone},
                        {"log_log_slope", r.log_log ? Json(r.log_log->slope) : Json()}});
      }
    } else if (chi->parsed()) {
      if (!p_range.empty()) {
        if (!p_grid.empty()) {
          throw ValidationError("give either --p-grid or --p-range");
        }
        p_grid = parse_p_range(p_range);
      }
      const Graph g = explicit_host(host, seed);
      const auto curve = chi_curve(g, p_grid, chi_trials, seed, global.threads);
      const CriticalEstimate est = critical_p(curve, g.vertex_count(), crossing_lambda);
      for (std::size_t i = 0; i < curve.size(); ++i) {
        const bool interior = i > 0 && i + 1 < curve.size();
        writer.row(Json{{"table", "chi"},
                        {"p", curve[i].p},
                        {"chi", curve[i].chi},
                        {"sigma", curve[i].sigma},
                        {"log_derivative", interior ? Json(est.log_derivative[i - 1]) : Json()}});
      }
      writer.row(Json{{"table", "critical_p"},
                      {"p_hat", est.p_hat},
                      {"crossing_lambda", crossing_lambda},
                      {"crossing", est.crossing ? Json(*est.crossing) : Json()}});
    } else if (bp->parsed()) {
      const GwSpec spec{bp_d, bp_p};
      spec.validate();
      const ProgenyPmf pmf = gw_total_pmf_exact(spec, bp_mmax);
      std::vector<double> empirical;
      std::uint64_t overflowed = 0;
      if (bp_samples > 0) {
        std::vector<ProgenySample> draws(bp_samples);
        parallel_for(bp_samples, global.threads, [&](std::size_t t) {
          draws[t] = gw_sample_total(spec, seed.with_stream(seed.stream_id + t), bp_cap);
        });
        empirical.assign(bp_rows + 1, 0.0);
        for (const auto& s : draws) {
          if (s.overflow) {
            ++overflowed;
          } else if (s.size <= bp_rows) {
            empirical[s.size] += 1.0;
          }
        }
      }
      const std::uint64_t rows = std::min(bp_rows, bp_mmax);
      for (std::uint64_t m = 1; m <= rows; ++m) {
        Json row{{"table", "pmf"}, {"m", m}, {"mass", pmf.mass(m)}, {"tail", pmf.tail(m)}};
        if (bp_samples > 0) {
          const double freq = empirical[m] / double(bp_samples);
          const double sigma = std::sqrt(pmf.mass(m) * (1 - pmf.mass(m)) / double(bp_samples));
          row["empirical"] = freq;
          row["sigma"] = sigma;
          row["z"] = sigma > 0 ? (freq - pmf.mass(m)) / sigma : 0.0;
        }
        writer.row(row);
      }
      if (bp_m_values.empty()) {
        for (std::uint64_t M = 1; M <= bp_mmax + 1; M *= 10) {
          bp_m_values.push_back(M);
        }
      }
      Json summary{{"table", "summary"},
                   {"d", bp_d},
                   {"p", bp_p},
                   {"mmax", bp_mmax},
                   {"overflow", pmf.overflow},
                   {"normalization_residual", pmf.normalization_residual()},
                   {"underflowed", pmf.underflowed}};
      if (spec.mean_offspring() <= 1.0 + 1e-15) {
        const TailCheck tc = gw_tail_check(spec, bp_m_values);
        for (const auto& row : tc.rows) {
          writer.row(Json{{"table", "tail"}, {"M", row.M}, {"tail", row.tail},
                          {"scaled", row.scaled}});
        }
        summary["c_hat"] = tc.c_hat;
      } else {
        summary["c_hat"] = nullptr;
      }
      if (bp_samples > 0) {
        summary["samples"] = bp_samples;
        summary["sampler_overflow"] = overflowed;
      }
      writer.row(summary);
    }
    sink.flush();
    return 0;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace critwalk
