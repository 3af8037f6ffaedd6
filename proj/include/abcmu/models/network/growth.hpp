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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "abcmu/errors.hpp"
#include "abcmu/models/network/graph.hpp"
#include "abcmu/rng.hpp"

namespace abcmu::network {

enum class GrowthVariant { pa, dd, dd_pa, dd_lnk_pa };

inline std::string_view to_string(GrowthVariant v) noexcept {
  switch (v) {
    case GrowthVariant::pa:
      return "PA";
    case GrowthVariant::dd:
      return "DD";
    case GrowthVariant::dd_pa:
      return "DD+PA";
    case GrowthVariant::dd_lnk_pa:
      return "DD+LNK+PA";
  }
  return "?";
}

struct NetworkModelSpec {
  GrowthVariant variant = GrowthVariant::dd_pa;
  double alpha = 0.0;      // PA frequency
  double delta_div = 0.0;  // divergence probability per duplicated pair
  double delta_a = 0.0;    // parent-child attachment probability
  double lambda_dup = 0.0;
  double lambda_add = 0.0;
  double lambda_del = 0.0;
  std::size_t target_order = 300;
  Graph seed_graph = Graph::complete(2);
  std::uint64_t max_steps = 0;  // 0: 100 * target_order

  void validate() const {
    auto prob = [](double p, const char* name) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string("NetworkModelSpec: ") + name + " must lie in [0, 1]");
      }
    };
    auto rate = [](double r, const char* name) {
      if (!(r >= 0.0) || !std::isfinite(r)) {
        throw std::invalid_argument(std::string("NetworkModelSpec: ") + name + " must be a nonnegative rate");
      }
    };
    prob(alpha, "alpha");
    prob(delta_div, "delta_div");
    prob(delta_a, "delta_a");
    rate(lambda_dup, "lambda_dup");
    rate(lambda_add, "lambda_add");
    rate(lambda_del, "lambda_del");
    if (target_order < 2) {
      throw std::invalid_argument("NetworkModelSpec: target_order must be at least 2");
    }
    if (seed_graph.order() == 0 || seed_graph.order() > target_order) {
      throw std::invalid_argument("NetworkModelSpec: seed graph must be nonempty and no larger than target_order");
    }
  }
};

/// Node drawn with probability proportional to weight(v) over v in
/// candidates; uniform when all weights vanish. Candidates must be
/// nonempty.
template <class Weight>
Node pick_weighted(const std::vector<Node>& candidates, Weight&& weight, Rng& rng) {
  double total = 0.0;
  for (Node v : candidates) {
    total += weight(v);
  }
  const double u = rng.uniform();
  if (!(total > 0.0)) {
    return candidates[static_cast<std::size_t>(u * static_cast<double>(candidates.size()))];
  }
  double r = u * total;
  for (Node v : candidates) {
    r -= weight(v);
    if (r < 0.0) {
      return v;
    }
  }
  for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
    if (weight(*it) > 0.0) {
      return *it;
    }
  }
  return candidates.back();
}

inline Node uniform_node(const Graph& g, Rng& rng) {
  return static_cast<Node>(rng.uniform() * static_cast<double>(g.order()));
}

/// Adds a node linked to one existing node chosen proportionally to its
/// degree.
inline Node preferential_attachment(Graph& g, Rng& rng) {
  std::vector<Node> existing(g.order());
  for (Node v = 0; v < existing.size(); ++v) {
    existing[v] = v;
  }
  const Node target = pick_weighted(existing, [&](Node v) { return static_cast<double>(g.degree(v)); }, rng);
  const Node child = g.add_node();
  g.add_edge(child, target);
  return child;
}

/// Duplicates `parent` into a new child. For each parental link, with
/// probability delta_div exactly one of the parental and duplicated
/// copies is lost, each side equally likely. Outcomes are re-flipped so
/// the child, and where possible the parent, keeps a link. Finally the
/// parent is linked to the child with probability delta_a.
inline Node duplicate_node(Graph& g, Node parent, double delta_div, double delta_a, Rng& rng) {
  enum Outcome { keep_both, lose_parental, lose_duplicate };
  const std::vector<Node> partners = g.neighbors(parent);
  const Node child = g.add_node();
  std::vector<Outcome> outcome(partners.size(), keep_both);
  for (auto& o : outcome) {
    if (rng.uniform() < delta_div) {
      o = rng.uniform() < 0.5 ? lose_parental : lose_duplicate;
    }
  }
  auto count = [&](Outcome o) { return static_cast<std::size_t>(std::count(outcome.begin(), outcome.end(), o)); };
  auto reflip_one = [&](Outcome from, Outcome to) {
    std::size_t pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(count(from)));
    for (auto& o : outcome) {
      if (o == from && pick-- == 0) {
        o = to;
        return;
      }
    }
  };
  if (!partners.empty() && count(lose_duplicate) == partners.size()) {
    reflip_one(lose_duplicate, lose_parental);
  }
  if (!partners.empty() && count(lose_parental) == partners.size() && partners.size() >= 2) {
    reflip_one(lose_parental, lose_duplicate);
  }
  for (std::size_t i = 0; i < partners.size(); ++i) {
    if (outcome[i] != lose_duplicate) {
      g.add_edge(child, partners[i]);
    }
    if (outcome[i] == lose_parental) {
      g.remove_edge(parent, partners[i]);
    }
  }
  if (rng.uniform() < delta_a) {
    g.add_edge(parent, child);
  }
  return child;
}

/// A uniformly chosen node gains a link to a non-neighbour chosen
/// proportionally to degree. False if the node is already saturated.
inline bool add_link(Graph& g, Rng& rng) {
  const Node u = uniform_node(g, rng);
  std::vector<Node> candidates;
  for (Node v = 0; v < g.order(); ++v) {
    if (v != u && !g.has_edge(u, v)) {
      candidates.push_back(v);
    }
  }
  if (candidates.empty()) {
    return false;
  }
  const Node v = pick_weighted(candidates, [&](Node x) { return static_cast<double>(g.degree(x)); }, rng);
  return g.add_edge(u, v);
}

/// A uniformly chosen node loses the link to a partner chosen
/// proportionally to the partner's degree. False if it has no links.
inline bool delete_link(Graph& g, Rng& rng) {
  const Node u = uniform_node(g, rng);
  if (g.degree(u) == 0) {
    return false;
  }
  const std::vector<Node> partners = g.neighbors(u);
  const Node v = pick_weighted(partners, [&](Node x) { return static_cast<double>(g.degree(x)); }, rng);
  return g.remove_edge(u, v);
}

/// Grows the seed graph until it has target_order nodes.
inline Graph grow_network(const NetworkModelSpec& spec, Rng& rng) {
  spec.validate();
  Graph g = spec.seed_graph;
  const std::uint64_t max_steps = spec.max_steps > 0 ? spec.max_steps : 100ULL * spec.target_order;
  std::uint64_t steps = 0;
  while (g.order() < spec.target_order) {
    if (++steps > max_steps) {
      throw GrowthStalled("grow_network: " + std::string(to_string(spec.variant)) + " reached order " +
                          std::to_string(g.order()) + " of " + std::to_string(spec.target_order) + " after " +
                          std::to_string(max_steps) + " steps");
    }
    const double u = rng.uniform();
    if (spec.variant != GrowthVariant::dd_lnk_pa) {
      const double alpha = spec.variant == GrowthVariant::pa   ? 1.0
                           : spec.variant == GrowthVariant::dd ? 0.0
                                                               : spec.alpha;
      if (u < alpha) {
        preferential_attachment(g, rng);
      } else {
        duplicate_node(g, uniform_node(g, rng), spec.delta_div, spec.delta_a, rng);
      }
      continue;
    }
    const double n = static_cast<double>(g.order());
    const double w_dup = spec.lambda_dup * n;
    const double w_add = spec.lambda_add * (n * (n - 1.0) / 2.0 - static_cast<double>(g.size()));
    const double w_del = spec.lambda_del * w_add;
    const double total = w_dup + w_add + w_del;
    if (u < spec.alpha || !(total > 0.0)) {
      preferential_attachment(g, rng);
      continue;
    }
    const double r = (u - spec.alpha) / (1.0 - spec.alpha) * total;
    if (r < w_dup) {
      duplicate_node(g, uniform_node(g, rng), spec.delta_div, 0.0, rng);
    } else if (r < w_dup + w_add) {
      add_link(g, rng);
    } else {
      delete_link(g, rng);
    }
  }
  return g;
}

}  // namespace abcmu::network
