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

#include <cstdio>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "critwalk/errors.hpp"
#include "critwalk/experiment.hpp"

namespace critwalk {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

Json range_json(const Range& r) {
  if (r.exact()) {
    return r.lower;
  }
  return Json{{"lower", r.lower}, {"upper", r.upper}};
}

template <typename T>
Json optional_json(const std::optional<T>& value) {
  return value ? Json(*value) : Json(nullptr);
}

Json certificate_json(const Lemma54Certificate& c) {
  Json j;
  j["certified"] = c.certified;
  j["bound"] = c.certified ? Json(c.bound) : Json(nullptr);
  j["failure"] = c.failure;
  j["v"] = c.params.v;
  j["h"] = c.params.h;
  j["m"] = c.params.m;
  j["k"] = c.params.k;
  j["r"] = c.params.r;
  j["L"] = c.params.L;
  j["ball_size"] = c.ball_size;
  j["ball_edges"] = c.ball_edges;
  j["hypotheses"] = Json{{"parameters_valid", c.parameters_valid},
                         {"boundary_nonempty", c.boundary_nonempty},
                         {"ball_large", c.ball_large},
                         {"not_lane_rich", c.not_lane_rich},
                         {"ball_light", c.ball_light},
                         {"radius_small", c.radius_small}};
  return j;
}

std::string csv_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void reject_unknown(const Json& object, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : object.items()) {
    if (!keys.count(key)) {
      throw ValidationError("config: unknown field '" + key + "' in " + where);
    }
  }
}

std::uint64_t parse_seed_value(const Json& j) {
  if (j.is_number_unsigned()) {
    return j.get<std::uint64_t>();
  }
  if (j.is_string()) {
    try {
      return parse_seed(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("config: ") + e.what());
    }
  }
  throw ValidationError("config: seed must be a non-negative integer or a string");
}

}  // namespace

std::string record_to_json(const ExperimentRecord& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["n"] = r.n;
  j["p"] = r.p;
  j["lambda"] = optional_json(r.lambda);
  j["trial_id"] = r.trial_id;
  j["component_rank"] = r.component_rank;
  j["size"] = r.size;
  j["edge_count"] = r.edge_count;
  j["diameter"] = range_json(r.diameter);
  j["t_mix"] = r.t_mix ? range_json(*r.t_mix) : Json(nullptr);
  j["upper_diam"] = optional_json(r.upper_diam);
  j["upper_hit"] = optional_json(r.upper_hit);
  j["lower_lemma54"] = r.lower_lemma54 ? certificate_json(*r.lower_lemma54) : Json(nullptr);
  j["wall_time"] = optional_json(r.wall_time);
  j["flags"] = r.flags;
  return j.dump();
}

std::string record_csv_header() {
  return "n,p,lambda,trial_id,component_rank,size,edge_count,diameter_lower,diameter_upper,"
         "t_mix_lower,t_mix_upper,upper_diam,upper_hit,lower_lemma54,wall_time";
}

std::string record_to_csv(const ExperimentRecord& r) {
  std::ostringstream out;
  auto opt = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
  out << r.n << ',' << csv_number(r.p) << ',' << (r.lambda ? csv_number(*r.lambda) : "") << ','
      << r.trial_id << ',' << r.component_rank << ',' << r.size << ',' << r.edge_count << ','
      << r.diameter.lower << ',' << r.diameter.upper << ','
      << (r.t_mix ? std::to_string(r.t_mix->lower) : "") << ','
      << (r.t_mix ? std::to_string(r.t_mix->upper) : "") << ',' << opt(r.upper_diam) << ','
      << opt(r.upper_hit) << ','
      << (r.lower_lemma54 && r.lower_lemma54->certified ? std::to_string(r.lower_lemma54->bound)
                                                        : "")
      << ',' << (r.wall_time ? csv_number(*r.wall_time) : "");
  return out.str();
}

ExperimentConfig parse_config(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ValidationError("config: top level must be an object");
  }
  reject_unknown(j,
                 {"family", "d", "dim", "n_grid", "p_rule", "trials", "seed", "caps", "output",
                  "measure_mixing", "components_per_trial", "lemma54", "timing"},
                 "config");
  ExperimentConfig c;
  try {
    c.host.family = parse_family(j.at("family").get<std::string>());
    c.host.d = j.value("d", 3u);
    c.host.dim = j.value("dim", 2u);
    c.n_grid = j.at("n_grid").get<std::vector<std::uint64_t>>();
    const Json& rule = j.at("p_rule");
    reject_unknown(rule, {"kind", "lambda", "p", "grid"}, "p_rule");
    const std::string kind = rule.at("kind").get<std::string>();
    if (kind == "lambda") {
      c.p_rule.kind = PRule::Kind::kLambda;
      c.p_rule.lambda = rule.at("lambda").get<double>();
    } else if (kind == "p") {
      c.p_rule.kind = PRule::Kind::kExplicit;
      c.p_rule.p = rule.at("p").get<double>();
    } else if (kind == "grid") {
      c.p_rule.kind = PRule::Kind::kGrid;
      c.p_rule.grid = rule.at("grid").get<std::vector<double>>();
    } else {
      throw ValidationError("config: p_rule.kind must be lambda, p or grid");
    }
    c.trials = j.value("trials", std::uint64_t{1});
    if (j.contains("seed")) {
      c.seed.seed = parse_seed_value(j.at("seed"));
    }
    if (j.contains("caps")) {
      const Json& caps = j.at("caps");
      reject_unknown(caps, {"exact_diameter", "exact_mixing"}, "caps");
      c.caps.exact_diameter = caps.value("exact_diameter", c.caps.exact_diameter);
      c.caps.exact_mixing = caps.value("exact_mixing", c.caps.exact_mixing);
    }
    c.output = j.value("output", std::string());
    c.measure_mixing = j.value("measure_mixing", false);
    c.components_per_trial = j.value("components_per_trial", 1u);
    c.timing = j.value("timing", false);
    if (j.contains("lemma54")) {
      const Json& s = j.at("lemma54");
      reject_unknown(s, {"beta", "D", "m_from_ball", "h", "m", "k", "r", "L"}, "lemma54");
      c.schedule.beta = s.value("beta", c.schedule.beta);
      c.schedule.D = s.value("D", c.schedule.D);
      c.schedule.m_from_ball = s.value("m_from_ball", c.schedule.m_from_ball);
      c.schedule.h = s.value("h", 0u);
      c.schedule.m = s.value("m", std::uint64_t{0});
      c.schedule.k = s.value("k", 0u);
      c.schedule.r = s.value("r", 0u);
      c.schedule.L = s.value("L", 0u);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c) {
  Json j;
  j["family"] = std::string(family_name(c.host.family));
  j["d"] = c.host.d;
  j["dim"] = c.host.dim;
  j["n_grid"] = c.n_grid;
  switch (c.p_rule.kind) {
    case PRule::Kind::kLambda:
      j["p_rule"] = Json{{"kind", "lambda"}, {"lambda", c.p_rule.lambda}};
      break;
    case PRule::Kind::kExplicit:
      j["p_rule"] = Json{{"kind", "p"}, {"p", c.p_rule.p}};
      break;
    case PRule::Kind::kGrid:
      j["p_rule"] = Json{{"kind", "grid"}, {"grid", c.p_rule.grid}};
      break;
  }
  j["trials"] = c.trials;
  j["seed"] = c.seed.seed;
  j["caps"] = Json{{"exact_diameter", c.caps.exact_diameter}, {"exact_mixing", c.caps.exact_mixing}};
  j["output"] = c.output;
  j["measure_mixing"] = c.measure_mixing;
  j["components_per_trial"] = c.components_per_trial;
  j["lemma54"] = Json{{"beta", c.schedule.beta}, {"D", c.schedule.D},
                      {"m_from_ball", c.schedule.m_from_ball}, {"h", c.schedule.h},
                      {"m", c.schedule.m}, {"k", c.schedule.k}, {"r", c.schedule.r},
                      {"L", c.schedule.L}};
  j["timing"] = c.timing;
  return j.dump(2);
}

}  // namespace critwalk
