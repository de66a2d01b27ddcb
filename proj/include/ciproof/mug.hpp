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

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"
#include "ciproof/statement.hpp"
#include "ciproof/ugraph.hpp"

namespace ciproof {

/// Canonical, id-free description of a graph: sorted node element sets and
/// sorted edges between them. Equal keys mean element-wise identical graphs.
struct GraphKey {
  std::vector<ElementSet> nodes;
  std::vector<std::pair<ElementSet, ElementSet>> edges;

  friend bool operator==(const GraphKey&, const GraphKey&) = default;
  friend std::strong_ordering operator<=>(const GraphKey& a, const GraphKey& b) {
    if (auto c = std::lexicographical_compare_three_way(a.nodes.begin(), a.nodes.end(), b.nodes.begin(),
                                                        b.nodes.end());
        c != 0)
      return c;
    return std::lexicographical_compare_three_way(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end());
  }
};

inline GraphKey graph_key(const UGraph& g) {
  GraphKey key;
  for (const auto& [id, els] : g.nodes()) key.nodes.push_back(els);
  std::sort(key.nodes.begin(), key.nodes.end());
  for (const auto& [a, b] : g.edges()) {
    ElementSet ea = g.elements(a);
    ElementSet eb = g.elements(b);
    if (eb < ea) std::swap(ea, eb);
    key.edges.emplace_back(ea, eb);
  }
  std::sort(key.edges.begin(), key.edges.end());
  return key;
}

/// A multiple undirected graph: a set of graphs over one universe. A
/// statement holds when some graph holding all its elements separates it.
/// Graphs are only ever appended; duplicates (by GraphKey) are stored once.
class Mug {
 public:
  Mug() = default;
  explicit Mug(Universe universe) : universe_(std::move(universe)) {}
  Mug(Universe universe, const std::vector<UGraph>& graphs) : universe_(std::move(universe)) {
    for (const auto& g : graphs) append(g);
  }

  const Universe& universe() const { return universe_; }
  const std::vector<UGraph>& graphs() const { return graphs_; }
  const UGraph& graph(std::size_t index) const {
    if (index >= graphs_.size())
      throw Error(ErrorCode::kInvalidArgument, "no graph with index " + std::to_string(index));
    return graphs_[index];
  }
  std::size_t size() const { return graphs_.size(); }

  /// Appends `g` unless an identical graph is present. Returns the index
  /// holding the graph either way.
  std::size_t append(UGraph g) {
    if (!universe_.all().contains(g.elements()))
      throw Error(ErrorCode::kUnknownElement, "graph mentions elements outside the universe");
    GraphKey key = graph_key(g);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    index_.emplace(std::move(key), graphs_.size());
    graphs_.push_back(std::move(g));
    return graphs_.size() - 1;
  }

  /// Keys of all graphs in sorted order; identifies the MUG up to graph order.
  std::vector<GraphKey> sorted_keys() const {
    std::vector<GraphKey> out;
    out.reserve(index_.size());
    for (const auto& [key, idx] : index_) out.push_back(key);
    return out;
  }

 private:
  Universe universe_;
  std::vector<UGraph> graphs_;
  std::map<GraphKey, std::size_t> index_;
};

/// Lowest index of a graph witnessing `s`, if any.
inline std::optional<std::size_t> satisfies(const Mug& m, const CanonicalStatement& s) {
  const ElementSet needed = s.elements();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const UGraph& g = m.graphs()[i];
    if (!g.elements().contains(needed)) continue;
    if (separates(g, s.x(), s.z(), s.y())) return i;
  }
  return std::nullopt;
}

/// Statements satisfied by a single graph.
inline std::vector<CanonicalStatement> satisfied_by(const UGraph& g, std::size_t universe_size,
                                                    std::size_t guard = kDefaultEnumerationGuard) {
  const ElementGraph eg = expand(g);
  std::vector<CanonicalStatement> out;
  for (const auto& s : enumerate_canonical(universe_size, guard))
    if (eg.vertices.contains(s.elements()) && separates(eg, s.x(), s.z(), s.y())) out.push_back(s);
  return out;
}

/// All canonical statements over the universe that `m` satisfies, sorted.
inline std::vector<CanonicalStatement> enumerate_satisfied(const Mug& m,
                                                           std::size_t guard = kDefaultEnumerationGuard) {
  const auto all = enumerate_canonical(m.universe(), guard);
  std::vector<ElementGraph> expanded;
  for (const auto& g : m.graphs()) expanded.push_back(expand(g));
  std::vector<CanonicalStatement> out;
  for (const auto& s : all) {
    for (const auto& eg : expanded) {
      if (eg.vertices.contains(s.elements()) && separates(eg, s.x(), s.z(), s.y())) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

/// The graph produced by combining graph `gi` with the satisfied statement
/// `s`. The graph must hold exactly one outer side plus the conditioning set;
/// the other side is added as single-element nodes, cliqued together with
/// every node carrying a conditioning element.
inline UGraph combined_graph(const Mug& m, const CanonicalStatement& s, std::size_t gi) {
  const UGraph& g = m.graph(gi);
  if (!satisfies(m, s)) throw Error(ErrorCode::kStatementNotSatisfied, format(m.universe(), s));
  const ElementSet present = g.elements();
  ElementSet added;
  if (present == (s.x() | s.z())) {
    added = s.y();
  } else if (present == (s.y() | s.z())) {
    added = s.x();
  } else {
    throw Error(ErrorCode::kWrongElementSet, "graph " + std::to_string(gi) + " holds " +
                                                 m.universe().format(present) + ", expected one side plus " +
                                                 m.universe().format(s.z()));
  }
  UGraph out = g;
  std::vector<NodeId> clique;
  for (const auto& [id, els] : g.nodes())
    if (els.intersects(s.z())) clique.push_back(id);
  for (auto e : added) clique.push_back(out.add_node(ElementSet::single(e)));
  for (std::size_t i = 0; i < clique.size(); ++i)
    for (std::size_t j = i + 1; j < clique.size(); ++j) out.add_edge(clique[i], clique[j]);
  return out;
}

inline Mug combine(const Mug& m, const CanonicalStatement& s, std::size_t gi) {
  Mug out = m;
  out.append(combined_graph(m, s, gi));
  return out;
}

struct AddArcs {
  std::vector<NodePair> arcs;
};
struct DeleteNode {
  NodeId node;
};
struct MergeNodes {
  NodeId first;
  NodeId second;
};
struct SplitNode {
  NodeId node;
  ElementSet part1;
  ElementSet part2;
};

/// One of the equivalence-preserving per-graph transformations.
using Transformation = std::variant<AddArcs, DeleteNode, MergeNodes, SplitNode>;

inline UGraph apply(const UGraph& g, const Transformation& t) {
  struct Visitor {
    const UGraph& g;
    UGraph operator()(const AddArcs& a) const { return add_arcs(g, a.arcs); }
    UGraph operator()(const DeleteNode& d) const { return delete_node(g, d.node); }
    UGraph operator()(const MergeNodes& mn) const { return merge_nodes(g, mn.first, mn.second); }
    UGraph operator()(const SplitNode& sp) const { return split_node(g, sp.node, sp.part1, sp.part2); }
  };
  return std::visit(Visitor{g}, t);
}

inline Mug append_transformed(const Mug& m, std::size_t gi, const Transformation& t) {
  Mug out = m;
  out.append(apply(m.graph(gi), t));
  return out;
}

}  // namespace ciproof
