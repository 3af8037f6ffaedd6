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
#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace abcmu::network {

using Node = std::size_t;
using Edge = std::pair<Node, Node>;  // first < second

/// Undirected simple graph with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t order) : adj_(order) {}

  static Graph complete(std::size_t order) {
    Graph g(order);
    for (Node u = 0; u < order; ++u) {
      for (Node v = u + 1; v < order; ++v) {
        g.add_edge(u, v);
      }
    }
    return g;
  }

  static Graph from_edges(std::size_t order, const std::vector<Edge>& edges) {
    Graph g(order);
    for (const auto& [u, v] : edges) {
      if (!g.add_edge(u, v)) {
        throw std::invalid_argument("Graph: duplicate edge or self-loop in edge list");
      }
    }
    return g;
  }

  std::size_t order() const noexcept { return adj_.size(); }
  std::size_t size() const noexcept { return size_; }
  std::size_t degree(Node u) const { return adj_.at(u).size(); }
  const std::vector<Node>& neighbors(Node u) const { return adj_.at(u); }

  Node add_node() {
    adj_.emplace_back();
    return adj_.size() - 1;
  }

  bool has_edge(Node u, Node v) const {
    const auto& a = adj_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
  }

  /// Adds {u, v}; false if it is a self-loop or already present.
  bool add_edge(Node u, Node v) {
    check(u);
    check(v);
    if (u == v || has_edge(u, v)) {
      return false;
    }
    insert_sorted(adj_[u], v);
    insert_sorted(adj_[v], u);
    ++size_;
    return true;
  }

  bool remove_edge(Node u, Node v) {
    check(u);
    check(v);
    if (!has_edge(u, v)) {
      return false;
    }
    erase_sorted(adj_[u], v);
    erase_sorted(adj_[v], u);
    --size_;
    return true;
  }

  /// All edges with first < second, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(size_);
    for (Node u = 0; u < adj_.size(); ++u) {
      for (Node v : adj_[u]) {
        if (u < v) {
          out.emplace_back(u, v);
        }
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void check(Node u) const {
    if (u >= adj_.size()) {
      throw std::out_of_range("Graph: node " + std::to_string(u) + " does not exist");
    }
  }
  static void insert_sorted(std::vector<Node>& xs, Node x) { xs.insert(std::lower_bound(xs.begin(), xs.end(), x), x); }
  static void erase_sorted(std::vector<Node>& xs, Node x) { xs.erase(std::lower_bound(xs.begin(), xs.end(), x)); }

  std::vector<std::vector<Node>> adj_;
  std::size_t size_ = 0;
};

/// Graph spanned by `edges` of some larger graph, with nodes renumbered in
/// order of first appearance.
inline Graph edge_induced(const std::vector<Edge>& edges, std::vector<Node>* original_ids = nullptr) {
  std::vector<Node> ids;
  std::unordered_map<Node, Node> index;
  std::vector<Edge> relabeled;
  auto id_of = [&](Node u) {
    const auto [it, inserted] = index.try_emplace(u, ids.size());
    if (inserted) {
      ids.push_back(u);
    }
    return it->second;
  };
  for (const auto& [u, v] : edges) {
    const Node a = id_of(u);
    const Node b = id_of(v);
    relabeled.emplace_back(std::min(a, b), std::max(a, b));
  }
  Graph g = Graph::from_edges(ids.size(), relabeled);
  if (original_ids) {
    *original_ids = std::move(ids);
  }
  return g;
}

}  // namespace abcmu::network
