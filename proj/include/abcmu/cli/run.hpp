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

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "abcmu/cli/analysis.hpp"
#include "abcmu/cli/config.hpp"
#include "abcmu/cli/registry.hpp"
#include "abcmu/samplers/annealing.hpp"
#include "abcmu/samplers/hybrid.hpp"
#include "abcmu/samplers/mh.hpp"
#include "abcmu/samplers/rejection.hpp"
#include "abcmu/samplers/sis.hpp"
#include "abcmu/samplers/trace.hpp"

namespace abcmu::cli {

inline constexpr std::string_view kToolName = "abcmu";
inline constexpr std::string_view kVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitSampler = 3, kExitIo = 4 };

/// Sampler hit a budget or stalled; artifacts of the partial run exist.
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
}

struct LoadedRun {
  ConfigSource source;
  RunConfig config;
  BuiltProblem built;
};

namespace detail {

inline void resolve_sampler(const ConfigSource& src, RunConfig& c, std::size_t dim) {
  auto& s = c.sampler;
  const auto sampler_line = src.line_of({"sampler"});
  if (s.kind == SamplerKind::sis_mu) {
    if (!c.tolerance.schedule.empty()) {
      s.annealing.mode = AnnealingMode::fixed_schedule;
      s.stages = c.tolerance.schedule.size();
    } else if (s.annealing.mode == AnnealingMode::fixed_schedule) {
      throw ConfigError("sampler.annealing: mode \"fixed\" needs tolerance.schedule", sampler_line);
    }
  }
  const bool mh = s.kind == SamplerKind::mh_mu || s.kind == SamplerKind::hybrid_mu;
  if (mh && !s.stage_scales.empty()) {
    if (c.tolerance.schedule.empty()) {
      throw ConfigError("sampler.stage_scales: needs an explicit tolerance.schedule", sampler_line);
    }
    if (s.stage_scales.size() != c.tolerance.schedule.size()) {
      throw ConfigError("sampler.stage_scales: expected one entry per tolerance row", sampler_line);
    }
  }
  if (s.proposal_sd.size() != dim) {
    throw ConfigError("sampler.proposal_sd: wrong length", sampler_line);
  }
}

}  // namespace detail

/// Reads, parses and builds a run; ConfigError or IoError on failure.
inline LoadedRun load_run(const std::filesystem::path& config_path, const Overrides& overrides = {}) {
  ConfigSource source(read_text(config_path), config_path);
  RunConfig config = parse_run_config(source, overrides);
  BuiltProblem built = build_problem(source, config);
  detail::resolve_sampler(source, config, built.prior.dimension());
  return LoadedRun{std::move(source), std::move(config), std::move(built)};
}

/// Trace plus bookkeeping from one sampler execution.
struct SamplerOutput {
  Trace trace;
  RunStatus status = RunStatus::complete;
  Json counters = Json::object();
  Json stages = Json::array();
  Json r_hat = Json::array();
  std::string failure;  // set when the sampler stopped early
};

namespace detail {

inline Json stage_json(const std::vector<StageMetadata>& stages) {
  Json out = Json::array();
  for (const auto& s : stages) {
    out.push_back({{"stage", s.stage},
                   {"taus", s.taus},
                   {"proposal_stddevs", s.proposal_stddevs},
                   {"simulations", s.simulations},
                   {"attempts", s.attempts},
                   {"ess", s.ess}});
  }
  return out;
}

struct MhSetup {
  MhConfig config;
  std::uint64_t pilot_simulations = 0;
};

inline MhSetup mh_setup(const RunConfig& c, const BuiltProblem& b, const ExecutionOptions& exec) {
  const auto& s = c.sampler;
  const auto& t = c.tolerance;
  MhSetup out{MhConfig{ToleranceSchedule::constant(t.final_row), GaussianRandomWalkProposal(s.proposal_sd), {}}, 0};
  if (!t.schedule.empty()) {
    out.config.schedule = ToleranceSchedule(t.schedule);
  } else if (!t.initial.empty()) {
    out.config.schedule = make_geometric_schedule(t.initial, t.final_row, t.factor);
  } else {
    const auto initial = pilot_initial_row(b.problem, b.prior, s.pilot_size, exec);
    out.config.schedule = make_geometric_schedule(initial, t.final_row, t.factor);
    out.pilot_simulations = s.pilot_size;
  }
  out.config.stage_scales = s.stage_scales;
  out.config.post_burn_in_iterations = s.post_burn_in_iterations;
  out.config.max_burn_in_iterations = s.max_burn_in_iterations;
  out.config.max_init_attempts = s.max_init_attempts;
  return out;
}

inline void mh_counters(SamplerOutput& out, const MultiChainResult& mh, std::uint64_t pilot) {
  Json iters = Json::array();
  Json status = Json::array();
  Json accepted = Json::array();
  for (const auto& chain : mh.chains) {
    iters.push_back(chain.burn_in_iterations ? Json(*chain.burn_in_iterations) : Json(nullptr));
    status.push_back(std::string(to_string(chain.status)));
    accepted.push_back(chain.accepted);
  }
  out.counters["pilot_simulations"] = pilot;
  out.counters["burn_in_iterations"] = iters;
  out.counters["total_burn_in_iterations"] = mh.report.total_burn_in_iterations;
  out.counters["chain_status"] = status;
  out.counters["chain_accepted"] = accepted;
  out.counters["mh_simulations"] = mh.total_simulations;
  out.r_hat = mh.report.r_hat;
}

inline RunStatus chains_status(const MultiChainResult& mh) {
  for (const auto& chain : mh.chains) {
    if (chain.status != RunStatus::complete) {
      return chain.status;
    }
  }
  return RunStatus::complete;
}

}  // namespace detail

/// Runs the configured sampler.
inline SamplerOutput execute(const RunConfig& c, const BuiltProblem& b) {
  const ExecutionOptions exec{c.seed, c.workers, c.batch_size};
  const auto& s = c.sampler;
  SamplerOutput out;
  out.trace.parameter_names = b.parameter_names;
  out.trace.error_names = b.error_names;
  switch (s.kind) {
    case SamplerKind::rej:
    case SamplerKind::rej_mu: {
      const RejectionConfig rc{s.n_accept, s.max_simulations};
      const auto r = s.kind == SamplerKind::rej ? rej_abc(b.problem, b.prior, c.tolerance.final_row.front(), rc, exec)
                                                : rej_abcmu(b.problem, b.prior, c.tolerance.final_row, rc, exec);
      append_rows(out.trace, r);
      out.status = r.status;
      out.counters["total_simulations"] = r.simulations;
      out.counters["executed_simulations"] = r.executed_simulations;
      out.counters["burn_in_simulations"] = 0;
      out.counters["accepted"] = r.accepted.size();
      break;
    }
    case SamplerKind::mh_mu: {
      const auto setup = detail::mh_setup(c, b, exec);
      const auto mh = mh_multichain(b.problem, b.prior, setup.config, s.chains, exec);
      append_rows(out.trace, mh);
      out.status = detail::chains_status(mh);
      detail::mh_counters(out, mh, setup.pilot_simulations);
      out.counters["total_simulations"] = mh.total_simulations + setup.pilot_simulations;
      out.counters["burn_in_simulations"] = mh.report.total_burn_in_simulations + setup.pilot_simulations;
      break;
    }
    case SamplerKind::sis_mu: {
      SisConfig sc;
      sc.n_particles = s.particles;
      sc.n_stages = s.stages;
      sc.annealing = s.annealing;
      if (!c.tolerance.schedule.empty()) {
        sc.schedule = ToleranceSchedule(c.tolerance.schedule);
      }
      sc.initial_row = c.tolerance.initial;
      sc.final_row = c.tolerance.final_row;
      sc.proposal = GaussianRandomWalkProposal(s.proposal_sd);
      sc.proposal_rule = s.proposal_rule;
      sc.max_attempts_per_stage = s.max_attempts_per_stage;
      sc.pilot_size = s.pilot_size;
      const auto r = sis_abcmu(b.problem, b.prior, sc, InitFromPrior{}, exec);
      append_rows(out.trace, r);
      out.status = r.status;
      out.stages = detail::stage_json(r.stages);
      out.counters["completed_stages"] = r.history.size();
      out.counters["total_simulations"] = r.total_simulations();
      out.counters["burn_in_simulations"] = r.burn_in_simulations;
      break;
    }
    case SamplerKind::hybrid_mu: {
      const auto setup = detail::mh_setup(c, b, exec);
      const HybridConfig hc{setup.config, s.chains,       s.thin,          s.n_seed,
                            s.particles,  s.extra_stages, std::nullopt,    s.proposal_rule,
                            s.max_attempts_per_stage};
      auto mh = mh_multichain(b.problem, b.prior, hc.mh, hc.n_chains, exec);
      const auto pooled = thinned_states(mh, hc.thin);
      if (pooled.size() < hc.n_seed) {
        // Not enough chain output to seed the particle stage: keep the chains.
        append_rows(out.trace, mh);
        out.status = detail::chains_status(mh);
        if (out.status == RunStatus::complete) {
          out.status = RunStatus::budget_exhausted;
        }
        out.failure = "only " + std::to_string(pooled.size()) + " thinned chain states for " +
                      std::to_string(hc.n_seed) + " seeds";
        detail::mh_counters(out, mh, setup.pilot_simulations);
        out.counters["total_simulations"] = mh.total_simulations + setup.pilot_simulations;
        out.counters["burn_in_simulations"] = mh.report.total_burn_in_simulations + setup.pilot_simulations;
        break;
      }
      const auto r = hybrid_from_chains(b.problem, b.prior, hc, std::move(mh), exec);
      append_rows(out.trace, r);
      out.status = r.status() == RunStatus::complete ? detail::chains_status(r.mh) : r.status();
      detail::mh_counters(out, r.mh, setup.pilot_simulations);
      out.stages = detail::stage_json(r.sis.stages);
      out.counters["completed_stages"] = r.sis.history.size();
      out.counters["total_simulations"] = r.sis.total_simulations() + setup.pilot_simulations;
      out.counters["burn_in_simulations"] = r.sis.burn_in_simulations + setup.pilot_simulations;
      break;
    }
  }
  if (out.status != RunStatus::complete && out.failure.empty()) {
    out.failure = std::string(to_string(out.status));
  }
  return out;
}

/// Pairs of summaries to write ASH grids for.
inline std::vector<std::pair<std::size_t, std::size_t>> ash_pairs(const RunConfig& c, std::size_t k) {
  if (!c.diagnostics.all_pairs) {
    return c.diagnostics.ash_pairs;
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      out.emplace_back(a, b);
    }
  }
  return out;
}

struct RunArtifacts {
  std::filesystem::path out_dir;
  RunStatus status = RunStatus::complete;
  std::string failure;
  std::optional<TraceAnalysis> analysis;
  std::string report;
};

inline Json performance_json(const TraceAnalysis& a) {
  if (!a.performance) {
    return nullptr;
  }
  const auto& p = *a.performance;
  return {{"burn_in", p.burn_in},
          {"ess_per_1000", p.ess_per_1000},
          {"sims_per_ess", p.sims_per_ess},
          {"ess", p.ess},
          {"n_samples", p.n_samples},
          {"total_simulations", p.total_sims},
          {"ess_method", std::string(diagnostics::to_string(*a.ess_method))}};
}

/// Executes a loaded run and writes trace.csv, metadata.json,
/// diagnostics.txt and ash_<k1>_<k2>.txt into the output directory.
/// Partial runs are written too, with their status in metadata.json.
inline RunArtifacts run_and_write(const LoadedRun& run) {
  const RunConfig& c = run.config;
  RunArtifacts art;
  art.out_dir = c.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(art.out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + art.out_dir.string() + ": " + ec.message());
  }
  SamplerOutput out = execute(c, run.built);
  art.status = out.status;
  art.failure = out.failure;

  std::ostringstream trace_text;
  write_trace(trace_text, out.trace);
  write_text(art.out_dir / "trace.csv", trace_text.str());

  Json meta;
  meta["tool"] = kToolName;
  meta["version"] = kVersion;
  meta["resolved_config"] = to_json(c);
  meta["status"] = std::string(to_string(out.status));
  if (!out.failure.empty()) {
    meta["failure"] = out.failure;
  }
  meta["parameter_names"] = out.trace.parameter_names;
  meta["error_names"] = out.trace.error_names;
  meta["counters"] = out.counters;
  meta["stages"] = out.stages;
  meta["r_hat"] = out.r_hat;

  std::ostringstream diag;
  Json ash_files = Json::array();
  if (!out.trace.rows.empty()) {
    try {
      art.analysis = analyze_trace(out.trace, &meta);
    } catch (const std::exception& e) {
      diag << "no diagnostics: " << e.what() << "\n";
    }
  } else {
    diag << "no diagnostics: the sampler produced no samples\n";
  }
  if (art.analysis) {
    diag << format_report(*art.analysis, out.trace, to_string(c.sampler.kind), std::string(to_string(out.status)));
    const auto& samples = art.analysis->samples;
    for (const auto& [k1, k2] : ash_pairs(c, out.trace.error_names.size())) {
      const std::string name = "ash_" + std::to_string(k1) + "_" + std::to_string(k2) + ".txt";
      try {
        const auto grid = diagnostics::error_density_ash2d(samples.errors, samples.weights, k1, k2,
                                                           c.diagnostics.ash_bins, c.diagnostics.ash_shifts);
        std::ostringstream g;
        diagnostics::write_ash_grid(g, grid);
        write_text(art.out_dir / name, g.str());
        ash_files.push_back(name);
      } catch (const DegenerateData& e) {
        diag << "\nASH " << out.trace.error_names[k1] << " x " << out.trace.error_names[k2]
             << " skipped: " << e.what() << "\n";
      } catch (const std::invalid_argument& e) {
        diag << "\nASH " << out.trace.error_names[k1] << " x " << out.trace.error_names[k2]
             << " skipped: " << e.what() << "\n";
      }
    }
  }
  if (!out.failure.empty()) {
    diag << "\nPARTIAL RUN: " << out.failure << "\n";
  }
  meta["performance"] = art.analysis ? performance_json(*art.analysis) : Json(nullptr);
  meta["ash_grids"] = ash_files;
  write_text(art.out_dir / "metadata.json", meta.dump(2) + "\n");
  art.report = diag.str();
  write_text(art.out_dir / "diagnostics.txt", art.report);
  return art;
}

}  // namespace abcmu::cli
