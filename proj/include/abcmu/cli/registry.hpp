// Copyright 2026 The abcmu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <string>
#include <vector>

#include "abcmu/cli/config.hpp"
#include "abcmu/model.hpp"
#include "abcmu/models/network/model.hpp"
#include "abcmu/models/sirs/model.hpp"
#include "abcmu/models/toy.hpp"
#include "abcmu/prior.hpp"
#include "abcmu/rng.hpp"

namespace abcmu::cli {

inline const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names{"toy-gauss",       "net-dd-pa-l",      "net-dd-pa-bp",
                                              "net-dd-lnk-pa-l", "net-dd-lnk-pa-bp", "sirs-seasonal"};
  return names;
}

struct BuiltProblem {
  AnyErrorModel problem;
  BoxPrior prior;
  Names parameter_names;
  Names error_names;
};

namespace detail {

inline std::vector<std::string> model_path(const ConfigSource& src) {
  if (src.root().contains("resolved_config")) {
    return {"resolved_config", "model"};
  }
  return {"model"};
}

inline std::string resolve_path(const ConfigSource& src, const std::string& p) {
  const std::filesystem::path path(p);
  return (path.is_absolute() ? path : src.base_dir() / path).lexically_normal().string();
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read " + path);
  }
  return in;
}

/// Resolved prior in model parameter order; unspecified parameters take
/// `defaults` when given.
inline std::vector<PriorEntry> resolve_prior(const ConfigSource& src, const RunConfig& c, const Names& names,
                                             const std::vector<Interval>& defaults) {
  const std::vector<std::string> path =
      src.root().contains("resolved_config") ? std::vector<std::string>{"resolved_config", "prior"}
                                             : std::vector<std::string>{"prior"};
  for (const auto& entry : c.prior) {
    if (std::find(names.begin(), names.end(), entry.name) == names.end()) {
      std::string valid;
      for (const auto& n : names) {
        valid += valid.empty() ? n : ", " + n;
      }
      auto p = path;
      p.push_back(entry.name);
      throw ConfigError("prior: unknown parameter '" + entry.name + "' (model parameters: " + valid + ")",
                        src.line_of(p));
    }
  }
  std::vector<PriorEntry> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = std::find_if(c.prior.begin(), c.prior.end(), [&](const PriorEntry& e) { return e.name == names[i]; });
    if (it != c.prior.end()) {
      out.push_back(*it);
    } else if (!defaults.empty()) {
      out.push_back({names[i], defaults[i].lower, defaults[i].upper});
    } else {
      throw ConfigError("prior: missing bounds for parameter '" + names[i] + "'", src.line_of(path));
    }
  }
  return out;
}

inline BoxPrior make_prior(const std::vector<PriorEntry>& entries) {
  Names names;
  std::vector<Interval> bounds;
  for (const auto& e : entries) {
    names.push_back(e.name);
    bounds.push_back({e.lower, e.upper});
  }
  return BoxPrior(std::move(names), std::move(bounds));
}

inline ParameterVector theta_from(const Section& s, const std::string& key, const Names& names) {
  const auto values = s.get<std::vector<double>>(key);
  if (values.size() != names.size()) {
    s.fail("expected " + std::to_string(names.size()) + " values", key);
  }
  return ParameterVector(values, make_names(names));
}

inline BuiltProblem build_toy(const ConfigSource& src, RunConfig& c, const Section& m) {
  m.allow_only({"name", "n_obs", "noise_sd", "summaries", "observed", "observed_data", "observed_theta"});
  toy::ToyGaussSpec spec;
  spec.n_obs = m.get_or<std::size_t>("n_obs", spec.n_obs);
  spec.noise_sd = m.get_or<double>("noise_sd", spec.noise_sd);
  const auto summaries = m.get_or<std::string>("summaries", "mean");
  if (summaries == "mean") {
    spec.summaries = toy::ToySummaries::mean;
  } else if (summaries == "mean_sd") {
    spec.summaries = toy::ToySummaries::mean_and_sd;
  } else {
    m.fail("expected \"mean\" or \"mean_sd\"", "summaries");
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    m.fail(e.what());
  }
  const toy::ToyGaussModel model(spec);
  SummaryVector observed;
  if (m.has("observed")) {
    for (double v : m.get<std::vector<double>>("observed")) {
      observed.emplace_back(v);
    }
  } else if (m.has("observed_data")) {
    const auto data = m.get<std::vector<double>>("observed_data");
    if (data.size() < 2) {
      m.fail("need at least two observations", "observed_data");
    }
    observed = model.summarize(data);
  } else if (m.has("observed_theta")) {
    Rng rng = Rng::stream(c.seed, {stream_tag::kObservation});
    observed = model.simulate(theta_from(m, "observed_theta", model.parameter_names()), rng);
  } else {
    m.fail("needs one of observed, observed_data or observed_theta");
  }
  if (observed.size() != model.summary_names().size()) {
    m.fail("expected " + std::to_string(model.summary_names().size()) + " observed summaries", "observed");
  }
  c.model["n_obs"] = spec.n_obs;
  c.model["noise_sd"] = spec.noise_sd;
  c.model["summaries"] = summaries;
  c.prior = resolve_prior(src, c, model.parameter_names(), {});
  BoxPrior prior = make_prior(c.prior);
  return {AnyErrorModel(toy::make_toy_problem(spec, std::move(observed))), std::move(prior),
          model.parameter_names(), model.summary_names()};
}

inline BuiltProblem build_network(const ConfigSource& src, RunConfig& c, const Section& m, const std::string& name) {
  m.allow_only({"name", "target_order", "max_steps", "edge_list", "bait_list", "prey_list", "observed_theta",
                "m_obs", "n_bait", "n_prey", "list_fraction"});
  using namespace abcmu::network;
  NetworkModelSpec base;
  base.variant = name.rfind("net-dd-lnk-pa", 0) == 0 ? GrowthVariant::dd_lnk_pa : GrowthVariant::dd_pa;
  const bool bp = name.size() > 3 && name.substr(name.size() - 3) == "-bp";
  base.target_order = m.get_or<std::size_t>("target_order", base.target_order);
  base.max_steps = m.get_or<std::uint64_t>("max_steps", base.max_steps);
  if (base.target_order < 2) {
    m.fail("must be at least 2", "target_order");
  }
  NetworkObservation obs;
  obs.mode = bp ? ObservationMode::baitprey : ObservationMode::links;
  obs.baitprey.list_fraction = m.get_or<double>("list_fraction", 1.0);
  if (!(obs.baitprey.list_fraction > 0.0 && obs.baitprey.list_fraction <= 1.0)) {
    m.fail("must lie in (0, 1]", "list_fraction");
  }
  Graph observed_graph;
  if (m.has("edge_list")) {
    const std::string path = resolve_path(src, m.get<std::string>("edge_list"));
    c.model["edge_list"] = path;
    auto in = open_input(path);
    LabeledGraph lg;
    try {
      lg = read_edge_list(in);
    } catch (const std::invalid_argument& e) {
      throw IoError(path + ": " + e.what());
    }
    observed_graph = lg.graph;
    if (bp) {
      for (const char* key : {"bait_list", "prey_list"}) {
        if (!m.has(key)) {
          m.fail("bait-prey observation needs this list", key);
        }
        const std::string list_path = resolve_path(src, m.get<std::string>(key));
        c.model[key] = list_path;
        auto list_in = open_input(list_path);
        const auto nodes = read_node_list(list_in, lg);
        (std::string(key) == "bait_list" ? obs.baitprey.n_bait : obs.baitprey.n_prey) = nodes.size();
      }
    } else {
      obs.m_obs = observed_graph.size();
    }
  } else if (m.has("observed_theta")) {
    NetworkModel probe(base, obs);
    const ParameterVector theta = theta_from(m, "observed_theta", probe.parameter_names());
    Rng rng = Rng::stream(c.seed, {stream_tag::kObservation});
    Graph full;
    try {
      full = grow_network(probe.spec_for(theta), rng);
    } catch (const std::exception& e) {
      m.fail(std::string("cannot generate observed network: ") + e.what(), "observed_theta");
    }
    if (bp) {
      BaitPreySpec spec = obs.baitprey;
      spec.n_bait = m.get<std::size_t>("n_bait");
      spec.n_prey = m.get<std::size_t>("n_prey");
      if (spec.n_bait == 0 || spec.n_prey == 0) {
        m.fail("bait and prey counts must be positive");
      }
      const auto result = observe_baitprey(full, spec, rng);
      observed_graph = result.graph;
      obs.baitprey.n_bait = result.marked_baits;
      obs.baitprey.n_prey = result.marked_preys;
    } else {
      const auto m_obs = m.get<std::size_t>("m_obs");
      if (m_obs == 0) {
        m.fail("must be positive", "m_obs");
      }
      observed_graph = observe_links(full, m_obs, rng);
      obs.m_obs = observed_graph.size();
    }
  } else {
    m.fail("needs edge_list or observed_theta");
  }
  if (observed_graph.order() < 2 || observed_graph.size() == 0) {
    m.fail("observed network needs at least one link");
  }
  if (bp && (obs.baitprey.n_bait == 0 || obs.baitprey.n_prey == 0)) {
    m.fail("observed network has no baits or no preys");
  }
  c.model["target_order"] = base.target_order;
  c.model["max_steps"] = base.max_steps;
  c.model["list_fraction"] = obs.baitprey.list_fraction;
  NetworkModel model(base, obs);
  const Names names = model.parameter_names();
  std::vector<Interval> defaults(names.size(), Interval{0.0, 1.0});
  if (base.variant == GrowthVariant::dd_lnk_pa) {
    defaults[3] = {0.0, 0.01};  // lambda_add multiplies the number of absent links
  }
  c.prior = resolve_prior(src, c, names, defaults);
  BoxPrior prior = make_prior(c.prior);
  const SummaryVector observed = summaries_network(observed_graph);
  return {AnyErrorModel(NetworkProblem(std::move(model), observed, NetworkDistance{})), std::move(prior), names,
          network::summary_names()};
}

inline BuiltProblem build_sirs(const ConfigSource& src, RunConfig& c, const Section& m) {
  m.allow_only({"name", "incidence_file", "population", "population_file", "true_positive_file", "observed_theta",
                "weeks", "start_day", "burn_in_weeks", "season_start_day", "mu", "travelers_per_year",
                "peak_thresholds"});
  using namespace abcmu::sirs;
  SirsEnvironment env;
  env.mu = m.get_or<double>("mu", env.mu);
  env.travelers_per_year = m.get_or<double>("travelers_per_year", env.travelers_per_year);
  env.season_start_day = m.get_or<double>("season_start_day", env.season_start_day);
  const auto burn_in = m.get_or<std::size_t>("burn_in_weeks", 520);
  SirsDistance distance;
  distance.peak_thresholds = m.get_or<std::vector<double>>("peak_thresholds", distance.peak_thresholds);
  if (m.has("population_file")) {
    const std::string path = resolve_path(src, m.get<std::string>("population_file"));
    c.model["population_file"] = path;
    auto in = open_input(path);
    env.population = read_values(in);
  } else {
    env.population = {m.get_or<double>("population", 1.6e7)};
    c.model["population"] = env.population.front();
  }
  if (m.has("true_positive_file")) {
    const std::string path = resolve_path(src, m.get<std::string>("true_positive_file"));
    c.model["true_positive_file"] = path;
    auto in = open_input(path);
    env.true_positive_rate = read_values(in);
    if (env.true_positive_rate.size() != 52 && env.true_positive_rate.size() != 1) {
      m.fail("true-positive series must have 52 weekly values", "true_positive_file");
    }
  }
  IncidenceSeries observed_series;
  std::size_t horizon = 0;
  if (m.has("incidence_file")) {
    const std::string path = resolve_path(src, m.get<std::string>("incidence_file"));
    c.model["incidence_file"] = path;
    auto in = open_input(path);
    ObservedIncidence obs;
    try {
      obs = read_incidence(in, env.population, env.season_start_day);
    } catch (const std::invalid_argument& e) {
      throw IoError(path + ": " + e.what());
    }
    observed_series = obs.series;
    env.start_day = obs.start_day;
    horizon = observed_series.counts.size();
  } else if (m.has("observed_theta")) {
    horizon = m.get<std::size_t>("weeks");
    env.start_day = m.get_or<double>("start_day", 0.0);
    c.model["start_day"] = env.start_day;
    try {
      env.validate();
      const SirsModel probe(env, horizon, burn_in);
      Rng rng = Rng::stream(c.seed, {stream_tag::kObservation});
      observed_series = probe.simulate_series(theta_from(m, "observed_theta", probe.parameter_names()), rng);
    } catch (const std::invalid_argument& e) {
      m.fail(e.what(), "observed_theta");
    }
  } else {
    m.fail("needs incidence_file or observed_theta");
  }
  SummaryVector observed;
  try {
    env.validate();
    observed = summaries_sirs(observed_series);
  } catch (const std::exception& e) {
    m.fail(std::string("observed incidence: ") + e.what());
  }
  c.model["mu"] = env.mu;
  c.model["travelers_per_year"] = env.travelers_per_year;
  c.model["season_start_day"] = env.season_start_day;
  c.model["burn_in_weeks"] = burn_in;
  c.model["peak_thresholds"] = distance.peak_thresholds;
  SirsModel model(env, horizon, burn_in);
  const Names names = model.parameter_names();
  // R0, D, Gamma, s, rho
  const std::vector<Interval> defaults{{1.0, 20.0}, {2.2, 2.8}, {1.0, 160.0}, {0.075, 0.6}, {0.04, 0.4}};
  c.prior = resolve_prior(src, c, names, defaults);
  BoxPrior prior = make_prior(c.prior);
  return {AnyErrorModel(SirsProblem(std::move(model), std::move(observed), distance)), std::move(prior), names,
          sirs::summary_names()};
}

}  // namespace detail

/// Builds the model, observed summaries and prior named in the config,
/// writing resolved defaults and absolute data paths back into `c`.
inline BuiltProblem build_problem(const ConfigSource& src, RunConfig& c) {
  const Section m(src, c.model, detail::model_path(src));
  const auto name = m.get<std::string>("name");
  if (std::find(model_names().begin(), model_names().end(), name) == model_names().end()) {
    std::string valid;
    for (const auto& n : model_names()) {
      valid += valid.empty() ? n : ", " + n;
    }
    m.fail("unknown model '" + name + "' (registered: " + valid + ")", "name");
  }
  const Json original = c.model;
  const Section view(src, original, detail::model_path(src));
  BuiltProblem built = name == "toy-gauss"           ? detail::build_toy(src, c, view)
                       : name.rfind("net-", 0) == 0 ? detail::build_network(src, c, view, name)
                                                    : detail::build_sirs(src, c, view);
  if (c.sampler.proposal_sd.empty()) {
    for (const auto& b : built.prior.bounds()) {
      c.sampler.proposal_sd.push_back(0.1 * (b.upper - b.lower));
    }
  } else if (c.sampler.proposal_sd.size() != built.prior.dimension()) {
    throw ConfigError("sampler.proposal_sd: expected " + std::to_string(built.prior.dimension()) + " values",
                      src.line_of({"sampler", "proposal_sd"}));
  }
  const std::size_t k = built.error_names.size();
  const auto tol_line = src.line_of({"tolerance"});
  if (c.sampler.kind == SamplerKind::rej) {
    const auto& row = c.tolerance.final_row;
    if (row.size() != 1 && (row.size() != k || std::adjacent_find(row.begin(), row.end(), std::not_equal_to<>()) !=
                                                   row.end())) {
      throw ConfigError("tolerance.final: rej takes one tolerance shared by all summaries", tol_line);
    }
  } else if (c.tolerance.final_row.size() != k) {
    throw ConfigError("tolerance.final: expected " + std::to_string(k) + " tolerances, one per summary", tol_line);
  }
  for (const auto& [a, b] : c.diagnostics.ash_pairs) {
    if (a >= k || b >= k) {
      throw ConfigError("diagnostics.ash_pairs: summary index out of range (model has " + std::to_string(k) +
                            " summaries)",
                        src.line_of({"diagnostics", "ash_pairs"}));
    }
  }
  return built;
}

}  // namespace abcmu::cli
