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
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "abcmu/cli/config.hpp"
#include "abcmu/diagnostics/ash.hpp"
#include "abcmu/diagnostics/error_analysis.hpp"
#include "abcmu/diagnostics/ess.hpp"
#include "abcmu/diagnostics/performance.hpp"
#include "abcmu/samplers/trace.hpp"

namespace abcmu::cli {

/// Target-density samples extracted from a trace: accepted rejection
/// draws, post-burn-in MH states, or the final particle stage.
struct TraceSamples {
  std::string kind;  // "rej", "mh" or "sis"
  std::vector<std::vector<double>> theta;
  std::vector<ErrorVector> errors;
  std::vector<double> weights;  // normalised
};

struct TraceAnalysis {
  TraceSamples samples;
  std::optional<diagnostics::PerformanceReport> performance;
  std::optional<diagnostics::EssMethod> ess_method;
  std::string performance_note;  // why no report could be made
  std::vector<double> expected_error;
};

namespace detail {

inline std::vector<std::optional<std::uint64_t>> burn_in_from(const Json* metadata) {
  std::vector<std::optional<std::uint64_t>> out;
  if (!metadata || !metadata->contains("counters") || !metadata->at("counters").contains("burn_in_iterations")) {
    throw IoError("MH trace needs the burn-in iterations from its metadata.json");
  }
  for (const auto& v : metadata->at("counters").at("burn_in_iterations")) {
    out.push_back(v.is_null() ? std::nullopt : std::optional<std::uint64_t>(v.get<std::uint64_t>()));
  }
  return out;
}

inline std::uint64_t counter(const Json* metadata, const char* key, std::uint64_t fallback) {
  if (metadata && metadata->contains("counters") && metadata->at("counters").contains(key)) {
    return metadata->at("counters").at(key).get<std::uint64_t>();
  }
  return fallback;
}

}  // namespace detail

/// Samples and Table-4 style metrics of a trace. metadata (the run's
/// metadata.json) is required for MH traces, which need the burn-in.
inline TraceAnalysis analyze_trace(const Trace& trace, const Json* metadata = nullptr) {
  TraceAnalysis a;
  if (trace.rows.empty()) {
    throw std::invalid_argument("trace has no rows");
  }
  bool has_sis = false;
  bool has_mh = false;
  std::int64_t final_stage = 0;
  for (const auto& r : trace.rows) {
    if (r.kind == "sis") {
      has_sis = true;
      final_stage = std::max(final_stage, r.chain_or_stage);
    } else if (r.kind == "mh") {
      has_mh = true;
    }
  }
  auto push = [&](const TraceRow& r, double w) {
    a.samples.theta.push_back(r.theta);
    a.samples.errors.emplace_back(r.errors);
    a.samples.weights.push_back(w);
  };

  if (has_sis) {
    a.samples.kind = "sis";
    std::uint64_t previous_cum = 0;
    std::uint64_t final_cum = 0;
    for (const auto& r : trace.rows) {
      if (r.kind != "sis") {
        continue;
      }
      if (r.chain_or_stage == final_stage) {
        push(r, r.weight);
        final_cum = r.cum_sims;
      } else if (r.chain_or_stage == final_stage - 1) {
        previous_cum = r.cum_sims;
      }
    }
    const bool known = final_stage > 1 || (metadata && metadata->contains("counters") &&
                                           metadata->at("counters").contains("burn_in_simulations"));
    if (known) {
      const std::uint64_t burn = detail::counter(metadata, "burn_in_simulations", previous_cum);
      a.performance = diagnostics::performance_report(burn, final_cum, diagnostics::ess_weights(a.samples.weights));
      a.ess_method = diagnostics::EssMethod::inverse_sum_squared_weights;
    } else {
      a.performance_note = "burn-in unknown: one particle stage and no metadata";
    }
  } else if (has_mh) {
    a.samples.kind = "mh";
    const auto burn_in = detail::burn_in_from(metadata);
    std::map<std::int64_t, std::vector<std::vector<double>>> series;
    std::map<std::int64_t, std::uint64_t> chain_sims;
    for (const auto& r : trace.rows) {
      if (r.kind != "mh") {
        continue;
      }
      chain_sims[r.chain_or_stage] = r.cum_sims;
      const auto c = static_cast<std::size_t>(r.chain_or_stage);
      if (c >= burn_in.size() || !burn_in[c] || r.index <= *burn_in[c]) {
        continue;
      }
      auto& s = series[r.chain_or_stage];
      s.resize(r.theta.size());
      for (std::size_t d = 0; d < r.theta.size(); ++d) {
        s[d].push_back(r.theta[d]);
      }
      push(r, 1.0);
    }
    std::uint64_t total = 0;
    for (const auto& [c, sims] : chain_sims) {
      total += sims;
    }
    total = detail::counter(metadata, "total_simulations", total);
    const std::uint64_t burn = detail::counter(metadata, "burn_in_simulations", 0);
    std::vector<std::vector<std::vector<double>>> chains;
    for (auto& [c, s] : series) {
      chains.push_back(std::move(s));
    }
    if (!a.samples.errors.empty()) {
      a.performance = diagnostics::performance_report(burn, total, diagnostics::mcmc_ess(chains));
      a.ess_method = diagnostics::EssMethod::sokal_autocorrelation;
    } else {
      a.performance_note = "no chain reached the final tolerance row";
    }
    for (auto& w : a.samples.weights) {
      w = 1.0 / static_cast<double>(a.samples.weights.size());
    }
  } else {
    a.samples.kind = "rej";
    for (const auto& r : trace.rows) {
      push(r, 1.0 / static_cast<double>(trace.rows.size()));
    }
    const std::uint64_t total = detail::counter(metadata, "total_simulations", trace.rows.back().cum_sims);
    a.performance = diagnostics::performance_report(0, total, diagnostics::ess_weights(a.samples.weights));
    a.ess_method = diagnostics::EssMethod::inverse_sum_squared_weights;
  }
  if (!a.samples.errors.empty()) {
    a.expected_error = diagnostics::expected_error(a.samples.errors, a.samples.weights);
  }
  return a;
}

inline std::string format_number(double x, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

/// Plain-text report: Table-4 style metrics, then the expected error.
inline std::string format_report(const TraceAnalysis& a, const Trace& trace, const std::string& sampler,
                                 const std::string& status) {
  std::ostringstream out;
  out << "sampler: " << sampler << "\n";
  out << "status: " << status << "\n";
  out << "samples: " << a.samples.errors.size() << " (" << a.samples.kind << ")\n";
  if (a.ess_method) {
    out << "ess method: " << diagnostics::to_string(*a.ess_method) << "\n";
  }
  out << "burn-in: simulations spent before ";
  out << (a.samples.kind == "sis"  ? "the final particle stage"
          : a.samples.kind == "mh" ? "each chain reached the final tolerance row, summed over chains"
                                   : "sampling (none for rejection)");
  out << "\n\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %14s %12s %12s\n", "sampler", "burn-in", "ESS/1000", "#sim/ESS");
  out << line;
  if (a.performance) {
    std::snprintf(line, sizeof line, "%-12s %14llu %12.1f %12.1f\n", sampler.c_str(),
                  static_cast<unsigned long long>(a.performance->burn_in), a.performance->ess_per_1000,
                  a.performance->sims_per_ess);
    out << line;
    out << "\nESS " << format_number(a.performance->ess) << " of " << a.performance->n_samples << " samples, "
        << a.performance->total_sims << " simulations in total\n";
  } else {
    std::snprintf(line, sizeof line, "%-12s %14s %12s %12s\n", sampler.c_str(), "-", "-", "-");
    out << line << "\n(" << a.performance_note << ")\n";
  }
  if (!a.expected_error.empty()) {
    out << "\nexpected error:\n";
    for (std::size_t k = 0; k < a.expected_error.size(); ++k) {
      std::snprintf(line, sizeof line, "  %-12s %14.6g\n", trace.error_names[k].c_str(), a.expected_error[k]);
      out << line;
    }
  }
  return out.str();
}

/// Index of a summary given as a number or by name.
inline std::size_t summary_index(const std::string& token, const Names& names) {
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == token) {
      return k;
    }
  }
  if (!token.empty() && std::all_of(token.begin(), token.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
    const auto k = std::stoul(token);
    if (k < names.size()) {
      return k;
    }
  }
  std::string valid;
  for (std::size_t k = 0; k < names.size(); ++k) {
    valid += (valid.empty() ? "" : ", ") + names[k] + " (" + std::to_string(k) + ")";
  }
  throw std::invalid_argument("unknown summary '" + token + "'; valid choices: " + valid);
}

}  // namespace abcmu::cli
