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
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "abcmu/samplers/annealing.hpp"
#include "abcmu/samplers/sis.hpp"

namespace abcmu::cli {

using Json = nlohmann::ordered_json;

/// Invalid configuration. line is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed JSON plus its source text, for locating keys by line.
class ConfigSource {
 public:
  ConfigSource() = default;
  ConfigSource(std::string text, std::filesystem::path origin) : text_(std::move(text)), origin_(std::move(origin)) {
    try {
      root_ = Json::parse(text_);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("invalid JSON: ") + e.what(), line_at(e.byte > 0 ? e.byte - 1 : 0));
    }
    if (!root_.is_object()) {
      throw ConfigError("configuration must be a JSON object", 1);
    }
  }

  static ConfigSource from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw IoError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ConfigSource(ss.str(), std::filesystem::absolute(path));
  }

  const Json& root() const noexcept { return root_; }
  const std::filesystem::path& origin() const noexcept { return origin_; }
  std::filesystem::path base_dir() const { return origin_.empty() ? std::filesystem::current_path() : origin_.parent_path(); }

  /// Line of the last key in `path`, searching each key after the previous
  /// one; 0 if not found.
  std::size_t line_of(const std::vector<std::string>& path) const {
    std::size_t pos = 0;
    bool found = false;
    for (const auto& key : path) {
      if (key.empty() || key.front() == '[') {
        continue;
      }
      const auto at = text_.find('"' + key + '"', pos);
      if (at == std::string::npos) {
        break;
      }
      pos = at;
      found = true;
    }
    return found ? line_at(pos) : 0;
  }

  std::size_t line_at(std::size_t byte) const {
    byte = std::min(byte, text_.size());
    return static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(byte), '\n')) + 1;
  }

 private:
  std::string text_;
  std::filesystem::path origin_;
  Json root_;
};

inline std::string join_path(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) {
    if (!out.empty() && p.front() != '[') {
      out += '.';
    }
    out += p;
  }
  return out;
}

/// Typed access to one JSON object, with errors anchored to source lines.
class Section {
 public:
  Section(const ConfigSource& src, const Json& node, std::vector<std::string> path)
      : src_(&src), node_(&node), path_(std::move(path)) {
    if (!node_->is_object()) {
      fail("must be an object");
    }
  }

  const Json& json() const noexcept { return *node_; }
  const std::vector<std::string>& path() const noexcept { return path_; }
  bool has(const std::string& key) const { return node_->contains(key); }

  [[noreturn]] void fail(const std::string& message, const std::string& key = {}) const {
    auto p = path_;
    if (!key.empty()) {
      p.push_back(key);
    }
    throw ConfigError((p.empty() ? std::string("configuration") : join_path(p)) + ": " + message, src_->line_of(p));
  }

  Section section(const std::string& key) const {
    if (!has(key)) {
      fail("missing section", key);
    }
    auto p = path_;
    p.push_back(key);
    return Section(*src_, node_->at(key), std::move(p));
  }

  template <class T>
  T get(const std::string& key) const {
    if (!has(key)) {
      fail("missing required key", key);
    }
    return convert<T>(key);
  }

  template <class T>
  T get_or(const std::string& key, T fallback) const {
    return has(key) ? convert<T>(key) : std::move(fallback);
  }

  /// Rejects keys not in `allowed`, so typos do not pass silently.
  void allow_only(std::initializer_list<const char*> allowed) const {
    for (const auto& item : node_->items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return item.key() == a; })) {
        std::string list;
        for (const char* a : allowed) {
          list += list.empty() ? "" : ", ";
          list += a;
        }
        fail("unknown key (expected one of: " + list + ")", item.key());
      }
    }
  }

 private:
  template <class T>
  T convert(const std::string& key) const {
    const Json& v = node_->at(key);
    try {
      if constexpr (std::is_same_v<T, std::uint64_t> || std::is_same_v<T, std::size_t>) {
        if (v.is_number_float()) {
          const double d = v.get<double>();
          if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) {
            fail("expected a nonnegative integer", key);
          }
          return static_cast<T>(d);
        }
        if (!v.is_number_unsigned()) {
          fail("expected a nonnegative integer", key);
        }
      }
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) {
          fail("expected a number", key);
        }
      }
      return v.get<T>();
    } catch (const Json::exception& e) {
      fail(std::string("wrong type: ") + e.what(), key);
    }
  }

  const ConfigSource* src_;
  const Json* node_;
  std::vector<std::string> path_;
};

enum class SamplerKind { rej, rej_mu, mh_mu, sis_mu, hybrid_mu };

inline const std::vector<std::pair<SamplerKind, std::string>>& sampler_names() {
  static const std::vector<std::pair<SamplerKind, std::string>> names{{SamplerKind::rej, "rej"},
                                                                       {SamplerKind::rej_mu, "rej-mu"},
                                                                       {SamplerKind::mh_mu, "mh-mu"},
                                                                       {SamplerKind::sis_mu, "sis-mu"},
                                                                       {SamplerKind::hybrid_mu, "hybrid-mu"}};
  return names;
}

inline std::string to_string(SamplerKind k) {
  for (const auto& [kind, name] : sampler_names()) {
    if (kind == k) {
      return name;
    }
  }
  return "?";
}

struct SamplerConfig {
  SamplerKind kind = SamplerKind::rej_mu;
  // rejection
  std::size_t n_accept = 1000;
  std::uint64_t max_simulations = 10'000'000;
  // Metropolis-Hastings
  std::size_t chains = 4;
  std::size_t post_burn_in_iterations = 1000;
  std::size_t max_burn_in_iterations = 1'000'000;
  std::size_t max_init_attempts = 10'000;
  std::vector<double> proposal_sd;
  std::vector<double> stage_scales;
  // sequential importance sampling
  std::size_t particles = 1000;
  std::size_t stages = 4;
  AnnealingPolicy annealing;
  ProposalRule proposal_rule = ProposalRule::annealed;
  std::uint64_t max_attempts_per_stage = 0;
  std::size_t pilot_size = 1000;
  // hybrid
  std::size_t thin = 20;
  std::size_t n_seed = 100;
  std::size_t extra_stages = 2;
};

/// Explicit rows, or a geometric ladder from `initial` to `final_row`.
struct ToleranceConfig {
  std::vector<std::vector<double>> schedule;
  std::vector<double> initial;
  std::vector<double> final_row;
  double factor = 0.5;
};

struct DiagnosticsConfig {
  bool all_pairs = false;
  std::vector<std::pair<std::size_t, std::size_t>> ash_pairs;
  std::size_t ash_bins = 30;
  std::size_t ash_shifts = 4;
};

struct PriorEntry {
  std::string name;
  double lower;
  double upper;
};

struct RunConfig {
  Json model;  // interpreted by the model registry
  std::vector<PriorEntry> prior;
  SamplerConfig sampler;
  ToleranceConfig tolerance;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::size_t batch_size = 64;
  std::string output_dir = "abcmu-out";
  DiagnosticsConfig diagnostics;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
};

namespace detail {

inline std::vector<double> positive_row(const Section& s, const std::string& key) {
  const auto row = s.get<std::vector<double>>(key);
  if (row.empty()) {
    s.fail("must not be empty", key);
  }
  for (double t : row) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      s.fail("tolerances must be positive and finite", key);
    }
  }
  return row;
}

inline SamplerConfig parse_sampler(const Section& s) {
  s.allow_only({"type", "n_accept", "max_simulations", "chains", "post_burn_in_iterations", "max_burn_in_iterations",
                "max_init_attempts", "proposal_sd", "stage_scales", "particles", "stages", "annealing",
                "proposal_rule", "max_attempts_per_stage", "pilot_size", "thin", "n_seed", "extra_stages"});
  SamplerConfig c;
  const auto type = s.get<std::string>("type");
  bool known = false;
  std::string valid;
  for (const auto& [kind, name] : sampler_names()) {
    valid += valid.empty() ? name : ", " + name;
    if (name == type) {
      c.kind = kind;
      known = true;
    }
  }
  if (!known) {
    s.fail("unknown sampler '" + type + "' (expected one of: " + valid + ")", "type");
  }
  c.n_accept = s.get_or<std::size_t>("n_accept", c.n_accept);
  c.max_simulations = s.get_or<std::uint64_t>("max_simulations", c.max_simulations);
  c.chains = s.get_or<std::size_t>("chains", c.chains);
  c.post_burn_in_iterations = s.get_or<std::size_t>("post_burn_in_iterations", c.post_burn_in_iterations);
  c.max_burn_in_iterations = s.get_or<std::size_t>("max_burn_in_iterations", c.max_burn_in_iterations);
  c.max_init_attempts = s.get_or<std::size_t>("max_init_attempts", c.max_init_attempts);
  c.proposal_sd = s.get_or<std::vector<double>>("proposal_sd", {});
  for (double sd : c.proposal_sd) {
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      s.fail("proposal standard deviations must be positive", "proposal_sd");
    }
  }
  c.stage_scales = s.get_or<std::vector<double>>("stage_scales", {});
  c.particles = s.get_or<std::size_t>("particles", c.particles);
  c.stages = s.get_or<std::size_t>("stages", c.stages);
  if (s.has("annealing")) {
    const Section a = s.section("annealing");
    a.allow_only({"mode", "factor", "quantile", "scale_multipliers"});
    const auto mode = a.get_or<std::string>("mode", "geometric");
    if (mode == "geometric") {
      c.annealing.mode = AnnealingMode::geometric;
    } else if (mode == "quantile") {
      c.annealing.mode = AnnealingMode::quantile;
    } else if (mode == "fixed") {
      c.annealing.mode = AnnealingMode::fixed_schedule;
    } else {
      a.fail("unknown mode '" + mode + "' (expected geometric, quantile or fixed)", "mode");
    }
    c.annealing.factor = a.get_or<double>("factor", c.annealing.factor);
    c.annealing.quantile = a.get_or<double>("quantile", c.annealing.quantile);
    c.annealing.scale_multipliers = a.get_or<std::vector<double>>("scale_multipliers", {});
    try {
      c.annealing.validate();
    } catch (const std::invalid_argument& e) {
      a.fail(e.what());
    }
  }
  const auto rule =
      s.get_or<std::string>("proposal_rule", c.kind == SamplerKind::hybrid_mu ? "weighted_variance" : "annealed");
  if (rule == "annealed") {
    c.proposal_rule = ProposalRule::annealed;
  } else if (rule == "weighted_variance") {
    c.proposal_rule = ProposalRule::weighted_variance;
  } else {
    s.fail("unknown proposal_rule '" + rule + "' (expected annealed or weighted_variance)", "proposal_rule");
  }
  c.max_attempts_per_stage = s.get_or<std::uint64_t>("max_attempts_per_stage", c.max_attempts_per_stage);
  c.pilot_size = s.get_or<std::size_t>("pilot_size", c.pilot_size);
  c.thin = s.get_or<std::size_t>("thin", c.thin);
  c.n_seed = s.get_or<std::size_t>("n_seed", c.n_seed);
  c.extra_stages = s.get_or<std::size_t>("extra_stages", c.extra_stages);
  const bool uses_chains = c.kind == SamplerKind::mh_mu || c.kind == SamplerKind::hybrid_mu;
  if (uses_chains && c.chains == 0) {
    s.fail("must be positive", "chains");
  }
  if ((c.kind == SamplerKind::rej || c.kind == SamplerKind::rej_mu) && c.n_accept == 0) {
    s.fail("must be positive", "n_accept");
  }
  if ((c.kind == SamplerKind::sis_mu || c.kind == SamplerKind::hybrid_mu) && c.particles == 0) {
    s.fail("must be positive", "particles");
  }
  if (c.kind == SamplerKind::sis_mu && c.stages == 0) {
    s.fail("must be positive", "stages");
  }
  if (c.kind == SamplerKind::hybrid_mu && (c.thin == 0 || c.n_seed == 0 || c.extra_stages == 0)) {
    s.fail("thin, n_seed and extra_stages must be positive");
  }
  return c;
}

inline ToleranceConfig parse_tolerance(const Section& s) {
  s.allow_only({"schedule", "initial", "final", "factor"});
  ToleranceConfig t;
  if (s.has("schedule")) {
    t.schedule = s.get<std::vector<std::vector<double>>>("schedule");
    try {
      ToleranceSchedule check(t.schedule);
    } catch (const std::invalid_argument& e) {
      s.fail(e.what(), "schedule");
    }
    t.final_row = t.schedule.back();
    if (s.has("final") && positive_row(s, "final") != t.final_row) {
      s.fail("disagrees with the last schedule row", "final");
    }
  } else {
    t.final_row = positive_row(s, "final");
  }
  if (s.has("initial")) {
    t.initial = positive_row(s, "initial");
    if (t.initial.size() != t.final_row.size()) {
      s.fail("must have as many entries as the final row", "initial");
    }
  }
  t.factor = s.get_or<double>("factor", t.factor);
  if (!(t.factor > 0.0 && t.factor < 1.0)) {
    s.fail("must lie in (0, 1)", "factor");
  }
  return t;
}

}  // namespace detail

/// Parses and checks everything except the model section, which the
/// registry validates against the model's own parameters.
inline RunConfig parse_run_config(const ConfigSource& src, const Overrides& overrides = {}) {
  const Json& root = src.root();
  // A metadata file produced by `run` embeds the resolved configuration.
  const Json& cfg = root.contains("resolved_config") ? root.at("resolved_config") : root;
  const Section top(src, cfg, root.contains("resolved_config") ? std::vector<std::string>{"resolved_config"}
                                                               : std::vector<std::string>{});
  top.allow_only({"model", "prior", "sampler", "tolerance", "seed", "workers", "batch_size", "output_dir",
                  "diagnostics"});
  RunConfig c;
  c.model = top.section("model").json();
  if (!c.model.contains("name") || !c.model.at("name").is_string()) {
    top.section("model").fail("missing model name", "name");
  }
  const Section prior = top.section("prior");
  for (const auto& item : prior.json().items()) {
    const auto bounds = prior.get<std::vector<double>>(item.key());
    if (bounds.size() != 2 || !(bounds[0] < bounds[1]) || !std::isfinite(bounds[0]) || !std::isfinite(bounds[1])) {
      prior.fail("expected [lower, upper] with lower < upper", item.key());
    }
    c.prior.push_back({item.key(), bounds[0], bounds[1]});
  }
  c.sampler = detail::parse_sampler(top.section("sampler"));
  c.tolerance = detail::parse_tolerance(top.section("tolerance"));
  if (overrides.seed) {
    c.seed = *overrides.seed;
  } else if (top.has("seed")) {
    c.seed = top.get<std::uint64_t>("seed");
  } else {
    top.fail("missing required key (runs must be seeded)", "seed");
  }
  c.workers = top.get_or<std::size_t>("workers", c.workers);
  if (c.workers == 0) {
    top.fail("must be positive", "workers");
  }
  c.batch_size = top.get_or<std::size_t>("batch_size", c.batch_size);
  if (c.batch_size == 0) {
    top.fail("must be positive", "batch_size");
  }
  c.output_dir = overrides.output_dir ? *overrides.output_dir : top.get_or<std::string>("output_dir", c.output_dir);
  if (top.has("diagnostics")) {
    const Section d = top.section("diagnostics");
    d.allow_only({"ash_pairs", "ash_bins", "ash_shifts"});
    if (d.has("ash_pairs") && d.json().at("ash_pairs").is_string()) {
      if (d.get<std::string>("ash_pairs") != "all") {
        d.fail("expected \"all\" or a list of [k1, k2] pairs", "ash_pairs");
      }
      c.diagnostics.all_pairs = true;
    } else {
      for (const auto& pair : d.get_or<std::vector<std::vector<std::size_t>>>("ash_pairs", {})) {
        if (pair.size() != 2 || pair[0] == pair[1]) {
          d.fail("each pair must name two different summaries", "ash_pairs");
        }
        c.diagnostics.ash_pairs.emplace_back(pair[0], pair[1]);
      }
    }
    c.diagnostics.ash_bins = d.get_or<std::size_t>("ash_bins", c.diagnostics.ash_bins);
    c.diagnostics.ash_shifts = d.get_or<std::size_t>("ash_shifts", c.diagnostics.ash_shifts);
    if (c.diagnostics.ash_bins < 4 || c.diagnostics.ash_shifts < 1) {
      d.fail("need ash_bins >= 4 and ash_shifts >= 1");
    }
  }
  return c;
}

inline std::string to_string(AnnealingMode m) {
  switch (m) {
    case AnnealingMode::geometric:
      return "geometric";
    case AnnealingMode::quantile:
      return "quantile";
    case AnnealingMode::fixed_schedule:
      return "fixed";
  }
  return "?";
}

/// Fully resolved configuration; parsing it again gives the same run.
inline Json to_json(const RunConfig& c) {
  Json j;
  j["model"] = c.model;
  Json prior = Json::object();
  for (const auto& p : c.prior) {
    prior[p.name] = {p.lower, p.upper};
  }
  j["prior"] = prior;
  const auto& s = c.sampler;
  Json sj;
  sj["type"] = to_string(s.kind);
  switch (s.kind) {
    case SamplerKind::rej:
    case SamplerKind::rej_mu:
      sj["n_accept"] = s.n_accept;
      sj["max_simulations"] = s.max_simulations;
      break;
    case SamplerKind::hybrid_mu:
      sj["thin"] = s.thin;
      sj["n_seed"] = s.n_seed;
      sj["extra_stages"] = s.extra_stages;
      sj["particles"] = s.particles;
      sj["proposal_rule"] = s.proposal_rule == ProposalRule::annealed ? "annealed" : "weighted_variance";
      sj["max_attempts_per_stage"] = s.max_attempts_per_stage;
      [[fallthrough]];
    case SamplerKind::mh_mu:
      sj["chains"] = s.chains;
      sj["post_burn_in_iterations"] = s.post_burn_in_iterations;
      sj["max_burn_in_iterations"] = s.max_burn_in_iterations;
      sj["max_init_attempts"] = s.max_init_attempts;
      sj["stage_scales"] = s.stage_scales;
      sj["pilot_size"] = s.pilot_size;
      break;
    case SamplerKind::sis_mu:
      sj["particles"] = s.particles;
      sj["stages"] = s.stages;
      sj["annealing"] = {{"mode", to_string(s.annealing.mode)},
                         {"factor", s.annealing.factor},
                         {"quantile", s.annealing.quantile},
                         {"scale_multipliers", s.annealing.scale_multipliers}};
      sj["proposal_rule"] = s.proposal_rule == ProposalRule::annealed ? "annealed" : "weighted_variance";
      sj["max_attempts_per_stage"] = s.max_attempts_per_stage;
      sj["pilot_size"] = s.pilot_size;
      break;
  }
  if (!s.proposal_sd.empty()) {
    sj["proposal_sd"] = s.proposal_sd;
  }
  j["sampler"] = sj;
  Json tj;
  if (!c.tolerance.schedule.empty()) {
    tj["schedule"] = c.tolerance.schedule;
  }
  if (!c.tolerance.initial.empty()) {
    tj["initial"] = c.tolerance.initial;
  }
  tj["final"] = c.tolerance.final_row;
  tj["factor"] = c.tolerance.factor;
  j["tolerance"] = tj;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["batch_size"] = c.batch_size;
  j["output_dir"] = c.output_dir;
  Json dj;
  if (c.diagnostics.all_pairs) {
    dj["ash_pairs"] = "all";
  } else {
    Json pairs = Json::array();
    for (const auto& [a, b] : c.diagnostics.ash_pairs) {
      pairs.push_back({a, b});
    }
    dj["ash_pairs"] = pairs;
  }
  dj["ash_bins"] = c.diagnostics.ash_bins;
  dj["ash_shifts"] = c.diagnostics.ash_shifts;
  j["diagnostics"] = dj;
  return j;
}

}  // namespace abcmu::cli
