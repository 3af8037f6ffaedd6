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
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

#include "abcmu/distance.hpp"
#include "abcmu/errors.hpp"
#include "abcmu/models/network/graph.hpp"
#include "abcmu/types.hpp"

namespace abcmu::network {

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

inline const Names& summary_names() {
  static const Names names{"ND", "WR", "DIA", "CC", "FRAG", "CONN", "OD-BOX"};
  return names;
}

namespace summary_index {
inline constexpr std::size_t nd = 0, wr = 1, dia = 2, cc = 3, frag = 4, conn = 5, od_box = 6;
}

/// Hop distances from `source`; kUnreachable for other components.
inline std::vector<std::size_t> bfs_distances(const Graph& g, Node source) {
  std::vector<std::size_t> dist(g.order(), kUnreachable);
  std::queue<Node> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const Node u = frontier.front();
    frontier.pop();
    for (Node v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

inline std::vector<std::vector<std::size_t>> all_pairs_distances(const Graph& g) {
  std::vector<std::vector<std::size_t>> d(g.order());
  for (Node u = 0; u < g.order(); ++u) {
    d[u] = bfs_distances(g, u);
  }
  return d;
}

inline double average_degree(const Graph& g) {
  return 2.0 * static_cast<double>(g.size()) / static_cast<double>(g.order());
}

/// Mean local clustering over nodes of degree >= 2; 0 if there are none.
inline double clustering_coefficient(const Graph& g) {
  double sum = 0.0;
  std::size_t counted = 0;
  for (Node u = 0; u < g.order(); ++u) {
    const auto& nb = g.neighbors(u);
    if (nb.size() < 2) {
      continue;
    }
    std::size_t triangles = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        triangles += g.has_edge(nb[i], nb[j]) ? 1 : 0;
      }
    }
    const double pairs = static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1) / 2.0;
    sum += static_cast<double>(triangles) / pairs;
    ++counted;
  }
  return counted ? sum / static_cast<double>(counted) : 0.0;
}

/// Component id per node, numbered from 0 in order of smallest member.
inline std::vector<std::size_t> components(const Graph& g) {
  std::vector<std::size_t> comp(g.order(), kUnreachable);
  std::size_t next = 0;
  for (Node s = 0; s < g.order(); ++s) {
    if (comp[s] != kUnreachable) {
      continue;
    }
    std::vector<Node> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      const Node u = stack.back();
      stack.pop_back();
      for (Node v : g.neighbors(u)) {
        if (comp[v] == kUnreachable) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

/// 1 - |largest component| / order.
inline double fragmentation(const Graph& g) {
  const auto comp = components(g);
  std::vector<std::size_t> sizes(g.order(), 0);
  for (std::size_t c : comp) {
    ++sizes[c];
  }
  const std::size_t largest = *std::max_element(sizes.begin(), sizes.end());
  return 1.0 - static_cast<double>(largest) / static_cast<double>(g.order());
}

/// log(p(k1,k2) ND^2 / (k1 p(k1) k2 p(k2))) per degree pair (k1 <= k2)
/// seen on some edge; p(k1,k2) counts each edge once.
inline KeyedValues log_connectivity(const Graph& g) {
  std::map<std::size_t, double> p_degree;
  for (Node u = 0; u < g.order(); ++u) {
    p_degree[g.degree(u)] += 1.0 / static_cast<double>(g.order());
  }
  std::map<std::pair<int, int>, double> p_pair;
  for (const auto& [u, v] : g.edges()) {
    const auto a = static_cast<int>(std::min(g.degree(u), g.degree(v)));
    const auto b = static_cast<int>(std::max(g.degree(u), g.degree(v)));
    p_pair[{a, b}] += 1.0 / static_cast<double>(g.size());
  }
  const double nd = average_degree(g);
  KeyedValues out;
  for (const auto& [key, p] : p_pair) {
    const auto k1 = static_cast<std::size_t>(key.first);
    const auto k2 = static_cast<std::size_t>(key.second);
    out[key] = std::log(p * nd * nd /
                        (static_cast<double>(k1) * p_degree[k1] * static_cast<double>(k2) * p_degree[k2]));
  }
  return out;
}

/// Greedy-colouring box covering: nodes at distance >= box_size may not
/// share a box, so every box has diameter below box_size. Nodes are
/// coloured in index order with the smallest free colour.
inline std::vector<std::size_t> box_covering(const std::vector<std::vector<std::size_t>>& dist,
                                             std::size_t box_size) {
  const std::size_t n = dist.size();
  std::vector<std::size_t> colour(n, 0);
  std::vector<char> used;
  for (Node i = 0; i < n; ++i) {
    used.assign(i + 1, 0);
    for (Node j = 0; j < i; ++j) {
      if (dist[i][j] >= box_size) {
        used[colour[j]] = 1;
      }
    }
    colour[i] = static_cast<std::size_t>(std::find(used.begin(), used.end(), 0) - used.begin());
  }
  return colour;
}

/// Number of links leaving each box of the covering with box diameter 2.
inline std::vector<double> box_external_degrees(const Graph& g, const std::vector<std::vector<std::size_t>>& dist) {
  const auto box = box_covering(dist, 3);
  const std::size_t n_boxes = *std::max_element(box.begin(), box.end()) + 1;
  std::vector<double> external(n_boxes, 0.0);
  for (const auto& [u, v] : g.edges()) {
    if (box[u] != box[v]) {
      external[box[u]] += 1.0;
      external[box[v]] += 1.0;
    }
  }
  return external;
}

/// ND, WR, DIA, CC, FRAG, CONN, OD-BOX.
///
/// WR is the list of hop distances over connected unordered node pairs;
/// its ECDF at k is the fraction of reachable pairs within distance k.
inline SummaryVector summaries_network(const Graph& g) {
  if (g.order() < 2) {
    throw std::invalid_argument("summaries_network: graph needs at least two nodes");
  }
  const auto dist = all_pairs_distances(g);
  std::vector<double> within_reach;
  std::size_t diameter = 0;
  for (Node u = 0; u < g.order(); ++u) {
    for (Node v = u + 1; v < g.order(); ++v) {
      if (dist[u][v] != kUnreachable) {
        within_reach.push_back(static_cast<double>(dist[u][v]));
        diameter = std::max(diameter, dist[u][v]);
      }
    }
  }
  if (within_reach.empty()) {
    throw DegenerateData("summaries_network: graph has no links");
  }
  SummaryVector s;
  s.reserve(7);
  s.emplace_back(average_degree(g));
  s.emplace_back(EmpiricalDistribution(std::move(within_reach)));
  s.emplace_back(static_cast<double>(diameter));
  s.emplace_back(clustering_coefficient(g));
  s.emplace_back(fragmentation(g));
  s.emplace_back(log_connectivity(g));
  s.emplace_back(EmpiricalDistribution(box_external_degrees(g, dist)));
  return s;
}

/// Signed relative differences for the scalars, Cramer-von Mises for WR
/// and OD-BOX, and the mean difference over shared degree pairs for CONN.
/// No shared degree pair rejects the simulation.
inline ErrorVector distances_network(const SummaryVector& sim, const SummaryVector& obs) {
  if (sim.size() != 7 || obs.size() != 7) {
    throw std::invalid_argument("distances_network: expected 7 summaries");
  }
  using namespace summary_index;
  std::vector<double> e(7);
  for (std::size_t k : {nd, dia, cc, frag}) {
    e[k] = relative_difference(std::get<double>(sim[k]), std::get<double>(obs[k]));
  }
  for (std::size_t k : {wr, od_box}) {
    e[k] = distance_cvm(std::get<EmpiricalDistribution>(sim[k]), std::get<EmpiricalDistribution>(obs[k]));
  }
  const auto& cs = std::get<KeyedValues>(sim[conn]);
  const auto& co = std::get<KeyedValues>(obs[conn]);
  double sum = 0.0;
  std::size_t shared = 0;
  for (const auto& [key, value] : cs) {
    if (const auto it = co.find(key); it != co.end()) {
      sum += value - it->second;
      ++shared;
    }
  }
  if (shared == 0) {
    throw DistanceDomainError("distances_network: no degree pair in common for CONN");
  }
  e[conn] = sum / static_cast<double>(shared);
  return ErrorVector(std::move(e));
}

}  // namespace abcmu::network
