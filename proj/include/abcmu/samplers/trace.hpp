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

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "abcmu/samplers/hybrid.hpp"
#include "abcmu/samplers/mh.hpp"
#include "abcmu/samplers/rejection.hpp"
#include "abcmu/samplers/sis.hpp"
#include "abcmu/types.hpp"

namespace abcmu {

/// One CSV row: an MH iteration, a particle of one stage, or an accepted
/// rejection draw.
struct TraceRow {
  std::string kind;  // "mh", "sis" or "rej"
  std::int64_t chain_or_stage = 0;
  std::uint64_t index = 0;
  std::int64_t ancestor = -1;
  std::vector<double> theta;
  std::vector<double> errors;
  double weight = 1.0;
  bool accepted = true;
  std::uint64_t cum_sims = 0;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct Trace {
  Names parameter_names;
  Names error_names;
  std::vector<TraceRow> rows;

  friend bool operator==(const Trace&, const Trace&) = default;
};

class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kThetaPrefix = "theta_";
inline constexpr std::string_view kErrorPrefix = "eps_";

namespace detail {

inline void put_double(std::ostream& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out << buf;
}

template <class T>
T parse_field(std::string_view field, std::size_t line, std::string_view column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw TraceFormatError("trace line " + std::to_string(line) + ": bad value '" + std::string(field) +
                           "' in column " + std::string(column));
  }
  return value;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

inline void check_name(const std::string& name) {
  if (name.empty() || name.find_first_of(",\r\n") != std::string::npos) {
    throw std::invalid_argument("trace: component name '" + name + "' cannot be used as a CSV column");
  }
}

}  // namespace detail

/// Headered CSV, columns: kind, chain_or_stage, index, ancestor,
/// theta_<name>..., eps_<name>..., weight, accepted, cum_sims. Reals are
/// written with 17 significant digits.
inline void write_trace(std::ostream& out, const Trace& trace) {
  out << "kind,chain_or_stage,index,ancestor";
  for (const auto& n : trace.parameter_names) {
    detail::check_name(n);
    out << ',' << kThetaPrefix << n;
  }
  for (const auto& n : trace.error_names) {
    detail::check_name(n);
    out << ',' << kErrorPrefix << n;
  }
  out << ",weight,accepted,cum_sims\n";
  for (const auto& r : trace.rows) {
    if (r.theta.size() != trace.parameter_names.size() || r.errors.size() != trace.error_names.size()) {
      throw std::invalid_argument("write_trace: row width does not match the header");
    }
    out << r.kind << ',' << r.chain_or_stage << ',' << r.index << ',' << r.ancestor;
    for (double x : r.theta) {
      out << ',';
      detail::put_double(out, x);
    }
    for (double x : r.errors) {
      out << ',';
      detail::put_double(out, x);
    }
    out << ',';
    detail::put_double(out, r.weight);
    out << ',' << (r.accepted ? 1 : 0) << ',' << r.cum_sims << '\n';
  }
}

inline Trace read_trace(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw TraceFormatError("trace: empty file");
  }
  const auto header = detail::split_csv(line);
  if (header.size() < 7 || header[0] != "kind" || header[1] != "chain_or_stage" || header[2] != "index" ||
      header[3] != "ancestor" || header[header.size() - 3] != "weight" || header[header.size() - 2] != "accepted" ||
      header.back() != "cum_sims") {
    throw TraceFormatError("trace: unexpected header");
  }
  Trace trace;
  for (std::size_t c = 4; c + 3 < header.size(); ++c) {
    const std::string_view name = header[c];
    if (name.substr(0, kThetaPrefix.size()) == kThetaPrefix) {
      if (!trace.error_names.empty()) {
        throw TraceFormatError("trace: parameter column after error columns");
      }
      trace.parameter_names.emplace_back(name.substr(kThetaPrefix.size()));
    } else if (name.substr(0, kErrorPrefix.size()) == kErrorPrefix) {
      trace.error_names.emplace_back(name.substr(kErrorPrefix.size()));
    } else {
      throw TraceFormatError("trace: unknown column " + std::string(name));
    }
  }
  const std::size_t p = trace.parameter_names.size();
  const std::size_t k = trace.error_names.size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const auto f = detail::split_csv(line);
    if (f.size() != header.size()) {
      throw TraceFormatError("trace line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, found " + std::to_string(f.size()));
    }
    TraceRow r;
    r.kind = std::string(f[0]);
    if (r.kind != "mh" && r.kind != "sis" && r.kind != "rej") {
      throw TraceFormatError("trace line " + std::to_string(line_no) + ": unknown kind " + r.kind);
    }
    r.chain_or_stage = detail::parse_field<std::int64_t>(f[1], line_no, "chain_or_stage");
    r.index = detail::parse_field<std::uint64_t>(f[2], line_no, "index");
    r.ancestor = detail::parse_field<std::int64_t>(f[3], line_no, "ancestor");
    for (std::size_t i = 0; i < p; ++i) {
      r.theta.push_back(detail::parse_field<double>(f[4 + i], line_no, header[4 + i]));
    }
    for (std::size_t i = 0; i < k; ++i) {
      r.errors.push_back(detail::parse_field<double>(f[4 + p + i], line_no, header[4 + p + i]));
    }
    r.weight = detail::parse_field<double>(f[4 + p + k], line_no, "weight");
    const int accepted = detail::parse_field<int>(f[5 + p + k], line_no, "accepted");
    if (accepted != 0 && accepted != 1) {
      throw TraceFormatError("trace line " + std::to_string(line_no) + ": accepted must be 0 or 1");
    }
    r.accepted = accepted == 1;
    r.cum_sims = detail::parse_field<std::uint64_t>(f[6 + p + k], line_no, "cum_sims");
    trace.rows.push_back(std::move(r));
  }
  return trace;
}

inline void append_rows(Trace& trace, const RejectionResult& result) {
  for (const auto& rec : result.accepted) {
    const auto th = rec.theta.values();
    const auto er = rec.errors.values();
    trace.rows.push_back(
        {"rej", 0, rec.attempt, -1, {th.begin(), th.end()}, {er.begin(), er.end()}, 1.0, true, rec.attempt + 1});
  }
}

inline void append_rows(Trace& trace, const MultiChainResult& result) {
  for (std::size_t c = 0; c < result.chains.size(); ++c) {
    for (const auto& rec : result.chains[c].records) {
      trace.rows.push_back({"mh", static_cast<std::int64_t>(c), rec.iteration, -1, rec.theta, rec.errors, 1.0,
                            rec.accepted, rec.cum_sims});
    }
  }
}

inline void append_rows(Trace& trace, const SisResult& result) {
  for (const auto& system : result.history) {
    for (std::size_t i = 0; i < system.particles.size(); ++i) {
      const auto& p = system.particles[i];
      const auto th = p.theta.values();
      const auto er = p.errors.values();
      trace.rows.push_back({"sis", static_cast<std::int64_t>(system.stage), i, p.ancestor, {th.begin(), th.end()},
                            {er.begin(), er.end()}, p.W, true, system.cumulative_sim_count});
    }
  }
}

inline void append_rows(Trace& trace, const HybridResult& result) {
  append_rows(trace, result.mh);
  append_rows(trace, result.sis);
}

template <class Result>
Trace make_trace(Names parameter_names, Names error_names, const Result& result) {
  Trace trace{std::move(parameter_names), std::move(error_names), {}};
  append_rows(trace, result);
  return trace;
}

}  // namespace abcmu
