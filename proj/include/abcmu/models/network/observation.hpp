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
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "abcmu/models/network/graph.hpp"
#include "abcmu/rng.hpp"

namespace abcmu::network {

/// Fisher-Yates shuffle driven by Rng::uniform, so the permutation does
/// not depend on the standard library.
template <class T>
void shuffle(std::vector<T>& xs, Rng& rng) {
  for (std::size_t i = xs.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(xs[i - 1], xs[j]);
  }
}

/// Link subsampling: edges are drawn uniformly without replacement until
/// m_obs are collected or none remain. original_ids, if given, receives
/// the source node of each output node.
inline Graph observe_links(const Graph& g, std::size_t m_obs, Rng& rng, std::vector<Node>* original_ids = nullptr) {
  if (m_obs == 0) {
    throw std::invalid_argument("observe_links: m_obs must be positive");
  }
  std::vector<Edge> edges = g.edges();
  shuffle(edges, rng);
  edges.resize(std::min(m_obs, edges.size()));
  return edge_induced(edges, original_ids);
}

struct BaitPreySpec {
  std::size_t n_bait = 1;
  std::size_t n_prey = 1;
  /// Explicit bait and prey lists; when unset each list is a random subset
  /// of list_fraction * order nodes.
  std::optional<std::vector<Node>> bait_list;
  std::optional<std::vector<Node>> prey_list;
  double list_fraction = 1.0;
};

struct BaitPreyResult {
  Graph graph;
  std::size_t marked_baits = 0;
  std::size_t marked_preys = 0;
  bool exhausted = false;  // stopped because no eligible link remained
  std::vector<Node> original_ids;  // source node of each output node
};

/// Bait-prey subsampling. A link (u, v) is eligible when u is in the bait
/// list and v in the prey list; drawing it marks u as bait and v as prey.
/// Once n_bait baits are marked only links from marked baits stay
/// eligible. Stops when n_bait baits and at least n_prey preys are marked.
inline BaitPreyResult observe_baitprey(const Graph& g, const BaitPreySpec& spec, Rng& rng) {
  if (spec.n_bait == 0 || spec.n_prey == 0) {
    throw std::invalid_argument("observe_baitprey: bait and prey counts must be positive");
  }
  if (!(spec.list_fraction > 0.0 && spec.list_fraction <= 1.0)) {
    throw std::invalid_argument("observe_baitprey: list_fraction must lie in (0, 1]");
  }
  auto make_list = [&](const std::optional<std::vector<Node>>& given) {
    std::vector<char> in(g.order(), 0);
    if (given) {
      for (Node v : *given) {
        if (v >= g.order()) {
          throw std::invalid_argument("observe_baitprey: listed node does not exist");
        }
        in[v] = 1;
      }
      return in;
    }
    std::vector<Node> all(g.order());
    std::iota(all.begin(), all.end(), Node{0});
    shuffle(all, rng);
    const auto keep = static_cast<std::size_t>(std::ceil(spec.list_fraction * static_cast<double>(g.order())));
    for (std::size_t i = 0; i < keep && i < all.size(); ++i) {
      in[all[i]] = 1;
    }
    return in;
  };
  const std::vector<char> bait_list = make_list(spec.bait_list);
  const std::vector<char> prey_list = make_list(spec.prey_list);

  std::vector<Edge> edges = g.edges();
  shuffle(edges, rng);
  std::vector<char> is_bait(g.order(), 0);
  std::vector<char> is_prey(g.order(), 0);
  BaitPreyResult out;
  std::vector<Edge> kept;
  auto done = [&] { return out.marked_baits == spec.n_bait && out.marked_preys >= spec.n_prey; };
  // Eligibility only shrinks over time, so taking the first eligible edge
  // of a random permutation samples uniformly among eligible edges.
  std::size_t next = 0;
  while (!done()) {
    const bool quota = out.marked_baits >= spec.n_bait;
    auto usable = [&](Node u, Node v) { return bait_list[u] && prey_list[v] && (!quota || is_bait[u]); };
    bool found = false;
    for (; next < edges.size(); ++next) {
      const auto [a, b] = edges[next];
      const bool ab = usable(a, b);
      const bool ba = usable(b, a);
      if (!ab && !ba) {
        continue;
      }
      Node u = a;
      Node v = b;
      if (ab && ba ? rng.uniform() < 0.5 : ba) {
        std::swap(u, v);
      }
      if (!is_bait[u]) {
        is_bait[u] = 1;
        ++out.marked_baits;
      }
      if (!is_prey[v]) {
        is_prey[v] = 1;
        ++out.marked_preys;
      }
      kept.push_back(edges[next]);
      ++next;
      found = true;
      break;
    }
    if (!found) {
      out.exhausted = true;
      break;
    }
  }
  out.graph = edge_induced(kept, &out.original_ids);
  return out;
}

}  // namespace abcmu::network
