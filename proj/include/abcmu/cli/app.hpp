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
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "abcmu/cli/analysis.hpp"
#include "abcmu/cli/plot.hpp"
#include "abcmu/cli/run.hpp"

namespace abcmu::cli {

/// Trace plus the metadata.json written next to it, if any.
struct LoadedTrace {
  Trace trace;
  std::optional<Json> metadata;
};

inline LoadedTrace load_trace(const std::filesystem::path& path) {
  LoadedTrace out;
  std::istringstream in(read_text(path));
  out.trace = read_trace(in);
  const auto meta_path = path.parent_path() / "metadata.json";
  if (std::filesystem::exists(meta_path)) {
    try {
      out.metadata = Json::parse(read_text(meta_path));
    } catch (const Json::parse_error& e) {
      throw IoError(meta_path.string() + ": " + e.what());
    }
  }
  return out;
}

/// Runs fn and turns exceptions into exit codes and a message on err.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const TraceFormatError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DegenerateData& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

inline int cmd_validate(const std::filesystem::path& config, const Overrides& overrides, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    const auto run = load_run(config, overrides);
    out << "ok: model " << run.config.model.at("name").get<std::string>() << ", sampler "
        << to_string(run.config.sampler.kind) << ", " << run.built.parameter_names.size() << " parameters, "
        << run.built.error_names.size() << " summaries\n";
    return static_cast<int>(kExitOk);
  });
}

inline int cmd_run(const std::filesystem::path& config, const Overrides& overrides, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    const auto run = load_run(config, overrides);
    const auto art = run_and_write(run);
    out << art.report;
    out << "artifacts written to " << art.out_dir.string() << "\n";
    if (art.status != RunStatus::complete) {
      err << "sampler stopped early (" << to_string(art.status) << "): " << art.failure << "\n";
      return static_cast<int>(kExitSampler);
    }
    return static_cast<int>(kExitOk);
  });
}

inline int cmd_diagnose(const std::filesystem::path& trace_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto loaded = load_trace(trace_path);
    const Json* meta = loaded.metadata ? &*loaded.metadata : nullptr;
    const auto analysis = analyze_trace(loaded.trace, meta);
    std::string sampler = analysis.samples.kind;
    std::string status = "unknown";
    if (meta) {
      sampler = meta->at("resolved_config").at("sampler").at("type").get<std::string>();
      status = meta->at("status").get<std::string>();
    }
    out << format_report(analysis, loaded.trace, sampler, status);
    return static_cast<int>(kExitOk);
  });
}

/// Parses "k1,k2" where each side is an index or a summary name.
inline std::pair<std::size_t, std::size_t> parse_pair(const std::string& text, const Names& names) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw std::invalid_argument("--pair expects k1,k2");
  }
  const auto a = summary_index(text.substr(0, comma), names);
  const auto b = summary_index(text.substr(comma + 1), names);
  if (a == b) {
    throw std::invalid_argument("--pair needs two different summaries");
  }
  return {a, b};
}

inline int cmd_plot(const std::filesystem::path& trace_path, const std::string& pair,
                    const std::filesystem::path& out_path, std::size_t bins, std::size_t shifts, std::ostream& out,
                    std::ostream& err) {
  return guarded(err, [&] {
    const auto loaded = load_trace(trace_path);
    const auto [k1, k2] = parse_pair(pair, loaded.trace.error_names);
    const auto analysis = analyze_trace(loaded.trace, loaded.metadata ? &*loaded.metadata : nullptr);
    const auto& s = analysis.samples;
    const auto grid = diagnostics::error_density_ash2d(s.errors, s.weights, k1, k2, bins, shifts);
    write_text(out_path, render_heatmap_svg(grid, loaded.trace.error_names[k1], loaded.trace.error_names[k2]));
    out << "wrote " << out_path.string() << " (" << loaded.trace.error_names[k1] << " x "
        << loaded.trace.error_names[k2] << ", " << s.errors.size() << " samples)\n";
    return static_cast<int>(kExitOk);
  });
}

}  // namespace abcmu::cli
