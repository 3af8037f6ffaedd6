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
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "abcmu/errors.hpp"
#include "abcmu/model.hpp"
#include "abcmu/models/network/graph.hpp"
#include "abcmu/models/network/growth.hpp"
#include "abcmu/models/network/observation.hpp"
#include "abcmu/models/network/summaries.hpp"

namespace abcmu::network {

enum class ObservationMode { links, baitprey };

struct NetworkObservation {
  ObservationMode mode = ObservationMode::links;
  std::size_t m_obs = 1;  // links mode
  BaitPreySpec baitprey;  // baitprey mode; lists are drawn per simulation
};

/// Grows a network for theta, subsamples it like the observed data and
/// summarises the result. theta is (alpha, delta_div, delta_a) for DD+PA
/// and (alpha, delta_div, lambda_dup, lambda_add, lambda_del) for
/// DD+LNK+PA.
class NetworkModel {
 public:
  NetworkModel(NetworkModelSpec base, NetworkObservation observation)
      : base_(std::move(base)), observation_(std::move(observation)) {
    if (base_.variant != GrowthVariant::dd_pa && base_.variant != GrowthVariant::dd_lnk_pa) {
      throw std::invalid_argument("NetworkModel: only DD+PA and DD+LNK+PA are parameterised");
    }
  }

  Names parameter_names() const {
    if (base_.variant == GrowthVariant::dd_pa) {
      return {"alpha", "delta_div", "delta_a"};
    }
    return {"alpha", "delta_div", "lambda_dup", "lambda_add", "lambda_del"};
  }
  Names summary_names() const { return network::summary_names(); }
  const NetworkModelSpec& base() const noexcept { return base_; }
  const NetworkObservation& observation() const noexcept { return observation_; }

  NetworkModelSpec spec_for(const ParameterVector& theta) const {
    NetworkModelSpec spec = base_;
    if (theta.size() != parameter_names().size()) {
      throw std::invalid_argument("NetworkModel: wrong number of parameters");
    }
    spec.alpha = theta[0];
    spec.delta_div = theta[1];
    if (spec.variant == GrowthVariant::dd_pa) {
      spec.delta_a = theta[2];
    } else {
      spec.lambda_dup = theta[2];
      spec.lambda_add = theta[3];
      spec.lambda_del = theta[4];
    }
    return spec;
  }

  Graph observe(const Graph& full, Rng& rng) const {
    if (observation_.mode == ObservationMode::links) {
      return observe_links(full, observation_.m_obs, rng);
    }
    return observe_baitprey(full, observation_.baitprey, rng).graph;
  }

  SummaryVector simulate(const ParameterVector& theta, Rng& rng) const {
    Graph full;
    try {
      full = grow_network(spec_for(theta), rng);
    } catch (const GrowthStalled& e) {
      throw SimulationRejected(e.what());
    }
    const Graph seen = observe(full, rng);
    if (seen.order() < 2) {
      throw SimulationRejected("network: observed subgraph has fewer than two nodes");
    }
    return summaries_network(seen);
  }

 private:
  NetworkModelSpec base_;
  NetworkObservation observation_;
};

struct NetworkDistance {
  ErrorVector operator()(const SummaryVector& sim, const SummaryVector& obs) const {
    return distances_network(sim, obs);
  }
};

using NetworkProblem = AbcProblem<NetworkModel, NetworkDistance>;

struct LabeledGraph {
  Graph graph;
  std::vector<std::string> labels;
  std::unordered_map<std::string, Node> index;
};

/// Edge list text: one "u v" pair per line, '#' starts a comment. Labels
/// are arbitrary tokens; duplicate links and self-loops are dropped.
inline LabeledGraph read_edge_list(std::istream& in) {
  LabeledGraph out;
  auto id_of = [&](const std::string& label) {
    const auto [it, inserted] = out.index.try_emplace(label, out.labels.size());
    if (inserted) {
      out.labels.push_back(label);
      out.graph.add_node();
    }
    return it->second;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::istringstream ss(line);
    std::string a;
    std::string b;
    if (!(ss >> a)) {
      continue;
    }
    std::string extra;
    if (!(ss >> b) || (ss >> extra)) {
      throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": expected two node labels");
    }
    const Node u = id_of(a);
    const Node v = id_of(b);
    out.graph.add_edge(u, v);
  }
  return out;
}

/// Node labels, whitespace separated; labels missing from the graph are
/// ignored.
inline std::vector<Node> read_node_list(std::istream& in, const LabeledGraph& g) {
  std::vector<Node> out;
  std::string label;
  while (in >> label) {
    if (const auto it = g.index.find(label); it != g.index.end()) {
      out.push_back(it->second);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace abcmu::network
