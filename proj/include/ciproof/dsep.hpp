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
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"
#include "ciproof/ugraph.hpp"

namespace ciproof {

/// Directed acyclic graph over a subset of a universe's elements, with a flag
/// marking deterministic elements (functions of their parents).
class DiGraph {
 public:
  DiGraph() = default;
  explicit DiGraph(Universe u) : universe_(std::move(u)) {}

  const Universe& universe() const { return universe_; }
  ElementSet nodes() const { return nodes_; }
  ElementSet deterministic() const { return deterministic_; }
  ElementSet parents(std::size_t v) const { return parents_.at(v); }
  ElementSet children(std::size_t v) const {
    ElementSet out;
    for (auto c : nodes_)
      if (parents_[c].contains(v)) out.insert(c);
    return out;
  }

  void add_node(std::size_t v, bool deterministic = false) {
    if (v >= universe_.size()) throw Error(ErrorCode::kUnknownElement, "element index out of range");
    nodes_.insert(v);
    if (deterministic) deterministic_.insert(v);
  }

  /// Adds from -> to; throws CyclicGraph if that closes a cycle.
  void add_arc(std::size_t from, std::size_t to) {
    require(from);
    require(to);
    if (from == to || ancestors(ElementSet::single(from)).contains(to))
      throw Error(ErrorCode::kCyclicGraph,
                  "arc " + universe_.name(from) + " -> " + universe_.name(to) + " closes a cycle");
    parents_[to].insert(from);
  }

  void remove_arc(std::size_t from, std::size_t to) { parents_.at(to).erase(from); }

  bool has_arc(std::size_t from, std::size_t to) const { return nodes_.contains(to) && parents_[to].contains(from); }

  /// Arcs sorted by (from, to).
  std::vector<std::pair<std::size_t, std::size_t>> arcs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (auto to : nodes_)
      for (auto from : parents_[to]) out.emplace_back(from, to);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// `set` together with all of its ancestors.
  ElementSet ancestors(ElementSet set) const {
    ElementSet seen = set;
    ElementSet frontier = set;
    while (!frontier.empty()) {
      ElementSet next;
      for (auto v : frontier) next |= parents_[v];
      next -= seen;
      seen |= next;
      frontier = next;
    }
    return seen;
  }

  /// Kahn's algorithm, smallest index first among ready elements.
  std::vector<std::size_t> topological_order() const {
    std::vector<std::size_t> order;
    ElementSet placed;
    while (order.size() < nodes_.size()) {
      bool progressed = false;
      for (auto v : nodes_ - placed) {
        if (placed.contains(parents_[v])) {
          order.push_back(v);
          placed.insert(v);
          progressed = true;
          break;
        }
      }
      if (!progressed) throw Error(ErrorCode::kCyclicGraph, "graph has a cycle");
    }
    return order;
  }

  void require(std::size_t v) const {
    if (!nodes_.contains(v))
      throw Error(ErrorCode::kUnknownElement,
                  v < universe_.size() ? "'" + universe_.name(v) + "' is not a node of the graph"
                                       : "element index out of range");
  }

  friend bool operator==(const DiGraph& a, const DiGraph& b) {
    return a.nodes_ == b.nodes_ && a.deterministic_ == b.deterministic_ && a.arcs() == b.arcs();
  }

 private:
  Universe universe_;
  ElementSet nodes_;
  ElementSet deterministic_;
  std::array<ElementSet, kMaxElements> parents_{};
};

/// Induced subgraph on `keep` and its ancestors.
inline DiGraph ancestral_prune(const DiGraph& d, ElementSet keep) {
  if (!d.nodes().contains(keep))
    throw Error(ErrorCode::kUnknownElement, "elements outside the graph: " + d.universe().format(keep - d.nodes()));
  const ElementSet kept = d.ancestors(keep);
  DiGraph out(d.universe());
  for (auto v : kept) out.add_node(v, d.deterministic().contains(v));
  for (const auto& [from, to] : d.arcs())
    if (kept.contains(from) && kept.contains(to)) out.add_arc(from, to);
  return out;
}

/// In topological order, reroutes each deterministic element's outgoing arcs
/// (unless it is observed in `observed`) to come from its current parents.
/// The element keeps its incoming arcs.
inline DiGraph det_propagate(const DiGraph& d, ElementSet observed) {
  DiGraph out = d;
  for (auto v : d.topological_order()) {
    if (!d.deterministic().contains(v) || observed.contains(v)) continue;
    const ElementSet pa = out.parents(v);
    for (auto c : out.children(v)) {
      out.remove_arc(v, c);
      for (auto p : pa)
        if (!out.has_arc(p, c)) out.add_arc(p, c);
    }
  }
  return out;
}

/// Moral graph: arcs lose direction and co-parents are joined. Node ids
/// equal element indices.
inline UGraph moralize(const DiGraph& d) {
  UGraph g;
  auto id = [](std::size_t v) { return NodeId{static_cast<std::uint32_t>(v)}; };
  for (auto v : d.nodes()) g.add_node(id(v), ElementSet::single(v));
  for (auto v : d.nodes()) {
    const auto pa = d.parents(v).indices();
    for (std::size_t i = 0; i < pa.size(); ++i) {
      g.add_edge(id(pa[i]), id(v));
      for (std::size_t j = i + 1; j < pa.size(); ++j) g.add_edge(id(pa[i]), id(pa[j]));
    }
  }
  return g;
}

struct DsepOptions {
  /// Also propagate deterministic elements that are in the conditioning set.
  /// Only useful for demonstrating why the exemption exists.
  bool propagate_observed = false;
};

/// Prune to x u y u z and ancestors, propagate unobserved deterministic
/// elements, moralize, then test separation.
inline bool d_separated(const DiGraph& d, ElementSet x, ElementSet z, ElementSet y, DsepOptions options = {}) {
  const ElementSet mentioned = x | y | z;
  if (!d.nodes().contains(mentioned))
    throw Error(ErrorCode::kUnknownElement,
                "elements outside the graph: " + d.universe().format(mentioned - d.nodes()));
  if ((x - z).intersects(y - z))
    throw Error(ErrorCode::kInvalidOverlap, "outer sides share elements not in the conditioning set");
  const DiGraph pruned = ancestral_prune(d, mentioned);
  const DiGraph propagated = det_propagate(pruned, options.propagate_observed ? ElementSet{} : z);
  return separates(moralize(propagated), x, z, y);
}

}  // namespace ciproof
