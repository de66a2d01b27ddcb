// Copyright 2026 The ciproof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"

namespace ciproof {

struct NodeId {
  std::uint32_t value = 0;

  friend auto operator<=>(NodeId, NodeId) = default;
};

using NodePair = std::pair<NodeId, NodeId>;

/// Undirected graph whose nodes carry non-empty element sets. An element may
/// appear in several nodes. Edges are stored as ordered pairs (low, high).
class UGraph {
 public:
  UGraph() = default;

  /// Adds a node with the next free id.
  NodeId add_node(ElementSet elements) {
    const NodeId id = next_id();
    add_node(id, elements);
    return id;
  }

  void add_node(NodeId id, ElementSet elements) {
    if (elements.empty()) throw Error(ErrorCode::kInvalidArgument, "nodes must carry at least one element");
    if (!nodes_.emplace(id, elements).second)
      throw Error(ErrorCode::kInvalidArgument, "node id " + std::to_string(id.value) + " already in use");
  }

  /// Adds the edge {a, b}; a no-op when it already exists.
  void add_edge(NodeId a, NodeId b) {
    require(a);
    require(b);
    if (a == b) throw Error(ErrorCode::kSelfLoop, "node " + std::to_string(a.value) + " cannot be adjacent to itself");
    edges_.insert(ordered(a, b));
  }

  void remove_node(NodeId n) {
    require(n);
    nodes_.erase(n);
    std::erase_if(edges_, [n](const NodePair& e) { return e.first == n || e.second == n; });
  }

  bool contains(NodeId n) const { return nodes_.count(n) != 0; }
  bool adjacent(NodeId a, NodeId b) const { return a != b && edges_.count(ordered(a, b)) != 0; }

  ElementSet elements(NodeId n) const {
    require(n);
    return nodes_.at(n);
  }

  /// Union of all node element sets.
  ElementSet elements() const {
    ElementSet all;
    for (const auto& [id, els] : nodes_) all |= els;
    return all;
  }

  std::vector<NodeId> neighbors(NodeId n) const {
    require(n);
    std::vector<NodeId> out;
    for (const auto& [a, b] : edges_) {
      if (a == n) out.push_back(b);
      if (b == n) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  NodeId next_id() const { return nodes_.empty() ? NodeId{0} : NodeId{nodes_.rbegin()->first.value + 1}; }

  const std::map<NodeId, ElementSet>& nodes() const { return nodes_; }
  const std::set<NodePair>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }

  void require(NodeId n) const {
    if (!contains(n)) throw Error(ErrorCode::kUnknownNode, "no node with id " + std::to_string(n.value));
  }

  friend bool operator==(const UGraph&, const UGraph&) = default;

  static NodePair ordered(NodeId a, NodeId b) { return a < b ? NodePair{a, b} : NodePair{b, a}; }

 private:
  std::map<NodeId, ElementSet> nodes_;
  std::set<NodePair> edges_;
};

/// Simple graph with one vertex per element.
struct ElementGraph {
  ElementSet vertices;
  std::array<ElementSet, kMaxElements> adjacency{};

  bool has_edge(std::size_t a, std::size_t b) const { return a != b && adjacency[a].contains(b); }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (auto a : vertices)
      for (auto b : adjacency[a])
        if (a < b) out.emplace_back(a, b);
    return out;
  }

  friend bool operator==(const ElementGraph&, const ElementGraph&) = default;
};

/// Element-level view: two distinct elements are adjacent iff they share a
/// node or sit in adjacent nodes.
inline ElementGraph expand(const UGraph& g) {
  ElementGraph out;
  auto connect = [&out](ElementSet a, ElementSet b) {
    for (auto i : a) out.adjacency[i] |= b;
  };
  for (const auto& [id, els] : g.nodes()) {
    out.vertices |= els;
    connect(els, els);
  }
  for (const auto& [a, b] : g.edges()) {
    const ElementSet ea = g.elements(a);
    const ElementSet eb = g.elements(b);
    connect(ea, eb);
    connect(eb, ea);
  }
  for (auto i : out.vertices) out.adjacency[i].erase(i);
  return out;
}

/// Elements reachable from `from` without entering `blocked`.
inline ElementSet reachable(const ElementGraph& g, ElementSet from, ElementSet blocked) {
  ElementSet seen = (from & g.vertices) - blocked;
  ElementSet frontier = seen;
  while (!frontier.empty()) {
    ElementSet next;
    for (auto v : frontier) next |= g.adjacency[v];
    next = next - blocked - seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

/// True iff every path from x to y in the element graph meets z. Shared
/// elements of x and y outside z are never separated.
inline bool separates(const ElementGraph& g, ElementSet x, ElementSet z, ElementSet y) {
  if (!g.vertices.contains(x | z | y))
    throw Error(ErrorCode::kMissingElements, "statement mentions elements absent from the graph");
  const ElementSet from = x - z;
  const ElementSet to = y - z;
  return !reachable(g, from, z).intersects(to);
}

inline bool separates(const UGraph& g, ElementSet x, ElementSet z, ElementSet y) {
  return separates(expand(g), x, z, y);
}

/// Copy of `g` with the given arcs added.
inline UGraph add_arcs(const UGraph& g, std::span<const NodePair> arcs) {
  UGraph out = g;
  for (const auto& [a, b] : arcs) out.add_edge(a, b);
  return out;
}

/// Copy of `g` with `n` removed after its neighbours are made pairwise adjacent.
/// Other nodes that share an element with `n` join that clique: the shared
/// element stays in the graph, so the paths it carried through `n` must too.
inline UGraph delete_node(const UGraph& g, NodeId n) {
  auto nbrs = g.neighbors(n);
  const ElementSet els = g.elements(n);
  for (const auto& [id, other] : g.nodes())
    if (id != n && other.intersects(els) && !g.adjacent(id, n)) nbrs.push_back(id);
  UGraph out = g;
  for (std::size_t i = 0; i < nbrs.size(); ++i)
    for (std::size_t j = i + 1; j < nbrs.size(); ++j) out.add_edge(nbrs[i], nbrs[j]);
  out.remove_node(n);
  return out;
}

/// Replaces n1 and n2 by one node (keeping n1's id) that carries both element
/// sets and inherits both neighbourhoods.
inline UGraph merge_nodes(const UGraph& g, NodeId n1, NodeId n2) {
  g.require(n1);
  g.require(n2);
  if (n1 == n2) throw Error(ErrorCode::kSameNode, "cannot merge a node with itself");
  std::vector<NodeId> nbrs = g.neighbors(n1);
  for (auto m : g.neighbors(n2)) nbrs.push_back(m);

  UGraph out;
  for (const auto& [id, els] : g.nodes()) {
    if (id == n2) continue;
    out.add_node(id, id == n1 ? els | g.elements(n2) : els);
  }
  for (const auto& [a, b] : g.edges()) {
    if (a == n2 || b == n2 || a == n1 || b == n1) continue;
    out.add_edge(a, b);
  }
  for (auto m : nbrs)
    if (m != n1 && m != n2) out.add_edge(n1, m);
  return out;
}

/// Replaces `n` by two adjacent nodes carrying `part1` (id of n) and `part2`
/// (a fresh id), each inheriting n's neighbourhood. Parts may overlap.
inline UGraph split_node(const UGraph& g, NodeId n, ElementSet part1, ElementSet part2) {
  const ElementSet els = g.elements(n);
  if (part1.empty() || part2.empty()) throw Error(ErrorCode::kEmptyPart, "split parts must be non-empty");
  if ((part1 | part2) != els)
    throw Error(ErrorCode::kCoverageGap, "split parts must together hold exactly the node's elements");
  const auto nbrs = g.neighbors(n);
  UGraph out;
  for (const auto& [id, e] : g.nodes()) out.add_node(id, id == n ? part1 : e);
  for (const auto& [a, b] : g.edges()) out.add_edge(a, b);
  const NodeId fresh = out.add_node(part2);
  out.add_edge(n, fresh);
  for (auto m : nbrs) out.add_edge(fresh, m);
  return out;
}

/// Graph with one node per element, ids equal to element indices, and the
/// edges of expand(g).
inline UGraph singleton_form(const UGraph& g) {
  const ElementGraph eg = expand(g);
  UGraph out;
  for (auto v : eg.vertices) out.add_node(NodeId{static_cast<std::uint32_t>(v)}, ElementSet::single(v));
  for (const auto& [a, b] : eg.edges())
    out.add_edge(NodeId{static_cast<std::uint32_t>(a)}, NodeId{static_cast<std::uint32_t>(b)});
  return out;
}

inline bool has_single_element_nodes(const UGraph& g) {
  return std::all_of(g.nodes().begin(), g.nodes().end(), [](const auto& kv) { return kv.second.size() == 1; });
}

/// Two nodes sharing an element, joined by a simple path through a node that
/// lacks it.
struct PathViolation {
  std::size_t element;
  NodeId first;
  NodeId second;
  NodeId through;

  friend bool operator==(const PathViolation&, const PathViolation&) = default;
};

namespace detail {

// Unit-capacity max flow on the split-vertex network: is there a simple path
// a ... via ... b? Equivalent to two internally disjoint paths from `via` to
// {a, b}.
inline bool simple_path_through(const UGraph& g, NodeId a, NodeId b, NodeId via) {
  std::vector<NodeId> ids;
  for (const auto& [id, els] : g.nodes()) ids.push_back(id);
  const std::size_t n = ids.size();
  auto index = [&ids](NodeId id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  // Vertex v is split into in = 2v and out = 2v + 1; the sink is 2n.
  const std::size_t sink = 2 * n;
  std::vector<std::vector<int>> cap(2 * n + 1, std::vector<int>(2 * n + 1, 0));
  for (std::size_t v = 0; v < n; ++v) cap[2 * v][2 * v + 1] = 1;
  const std::size_t s = index(via);
  cap[2 * s][2 * s + 1] = 2;
  for (const auto& [p, q] : g.edges()) {
    const std::size_t i = index(p);
    const std::size_t j = index(q);
    cap[2 * i + 1][2 * j] = 1;
    cap[2 * j + 1][2 * i] = 1;
  }
  cap[2 * index(a) + 1][sink] = 1;
  cap[2 * index(b) + 1][sink] = 1;

  const std::size_t source = 2 * s;
  int flow = 0;
  while (flow < 2) {
    std::vector<std::size_t> parent(2 * n + 1, SIZE_MAX);
    std::queue<std::size_t> q;
    q.push(source);
    parent[source] = source;
    while (!q.empty() && parent[sink] == SIZE_MAX) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v = 0; v <= sink; ++v)
        if (cap[u][v] > 0 && parent[v] == SIZE_MAX) {
          parent[v] = u;
          q.push(v);
        }
    }
    if (parent[sink] == SIZE_MAX) break;
    for (std::size_t v = sink; v != source; v = parent[v]) {
      --cap[parent[v]][v];
      ++cap[v][parent[v]];
    }
    ++flow;
  }
  return flow == 2;
}

}  // namespace detail

/// Reports, for each element held by two or more nodes, every pair of its
/// nodes joined by a simple path with an intermediate node lacking it.
/// One violation per pair, naming the smallest such intermediate node.
inline std::vector<PathViolation> validate_element_paths(const UGraph& g) {
  std::vector<PathViolation> out;
  for (auto e : g.elements()) {
    std::vector<NodeId> holders;
    std::vector<NodeId> others;
    for (const auto& [id, els] : g.nodes()) (els.contains(e) ? holders : others).push_back(id);
    for (std::size_t i = 0; i < holders.size(); ++i)
      for (std::size_t j = i + 1; j < holders.size(); ++j)
        for (auto w : others)
          if (detail::simple_path_through(g, holders[i], holders[j], w)) {
            out.push_back({e, holders[i], holders[j], w});
            break;
          }
  }
  return out;
}

}  // namespace ciproof
