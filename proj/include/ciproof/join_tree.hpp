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
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"
#include "ciproof/ugraph.hpp"

namespace ciproof {

/// Tree of element clusters. Separator sets live on the edges.
struct JoinTree {
  std::map<NodeId, ElementSet> clusters;
  std::set<NodePair> edges;
  std::map<NodePair, ElementSet> sepsets;

  /// Adds a link whose sepset is the endpoint intersection.
  void link(NodeId a, NodeId b) {
    const NodePair e = UGraph::ordered(a, b);
    edges.insert(e);
    sepsets[e] = clusters.at(a) & clusters.at(b);
  }

  friend bool operator==(const JoinTree&, const JoinTree&) = default;
};

enum class JoinTreeIssue { kUnknownCluster, kSelfLink, kNotATree, kSepsetMismatch, kRunningIntersection };

constexpr std::string_view to_string(JoinTreeIssue i) {
  switch (i) {
    case JoinTreeIssue::kUnknownCluster: return "unknown-cluster";
    case JoinTreeIssue::kSelfLink: return "self-link";
    case JoinTreeIssue::kNotATree: return "not-a-tree";
    case JoinTreeIssue::kSepsetMismatch: return "sepset-mismatch";
    case JoinTreeIssue::kRunningIntersection: return "running-intersection";
  }
  return "unknown";
}

struct JoinTreeViolation {
  JoinTreeViolation(JoinTreeIssue i, std::string d, std::optional<std::size_t> e = std::nullopt)
      : issue(i), detail(std::move(d)), element(e) {}

  JoinTreeIssue issue;
  std::string detail;
  std::optional<std::size_t> element;  // set for running-intersection violations

  friend bool operator==(const JoinTreeViolation&, const JoinTreeViolation&) = default;
};

/// Empty iff the links form a tree, every sepset is the intersection of its
/// endpoints, and every element's clusters form a connected subtree.
inline std::vector<JoinTreeViolation> validate_join_tree(const JoinTree& t) {
  std::vector<JoinTreeViolation> out;
  auto name = [](NodeId n) { return std::to_string(n.value); };
  bool structural = true;
  for (const auto& [a, b] : t.edges) {
    if (!t.clusters.count(a) || !t.clusters.count(b)) {
      out.push_back({JoinTreeIssue::kUnknownCluster, "link " + name(a) + " " + name(b)});
      structural = false;
    } else if (a == b) {
      out.push_back({JoinTreeIssue::kSelfLink, "link " + name(a) + " " + name(b)});
      structural = false;
    }
  }
  if (!structural) return out;

  std::vector<NodeId> ids;
  for (const auto& [id, els] : t.clusters) ids.push_back(id);
  auto index = [&ids](NodeId id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  std::vector<std::size_t> parent(ids.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&parent](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  bool acyclic = true;
  for (const auto& [a, b] : t.edges) {
    const auto ra = root(index(a));
    const auto rb = root(index(b));
    if (ra == rb) acyclic = false;
    parent[ra] = rb;
  }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < ids.size(); ++i) roots.insert(root(i));
  if (!acyclic || roots.size() > 1) {
    out.push_back({JoinTreeIssue::kNotATree, acyclic ? "links do not connect all clusters" : "links form a cycle"});
    return out;
  }

  for (const auto& e : t.edges) {
    const ElementSet expected = t.clusters.at(e.first) & t.clusters.at(e.second);
    auto it = t.sepsets.find(e);
    if (it == t.sepsets.end() || it->second != expected)
      out.push_back({JoinTreeIssue::kSepsetMismatch, "link " + name(e.first) + " " + name(e.second)});
  }

  // In a tree, an element's clusters are connected iff the links whose both
  // endpoints hold it number one fewer than those clusters.
  ElementSet all;
  for (const auto& [id, els] : t.clusters) all |= els;
  for (auto e : all) {
    std::size_t holders = 0;
    for (const auto& [id, els] : t.clusters) holders += els.contains(e) ? 1 : 0;
    std::size_t links = 0;
    for (const auto& [a, b] : t.edges)
      if (t.clusters.at(a).contains(e) && t.clusters.at(b).contains(e)) ++links;
    if (links + 1 != holders)
      out.push_back({JoinTreeIssue::kRunningIntersection, "element index " + std::to_string(e), e});
  }
  return out;
}

struct JoinTreeBuild {
  UGraph chordal;
  std::vector<std::pair<std::size_t, std::size_t>> fill_ins;
  JoinTree tree;
};

/// Triangulates a single-element-node graph by eliminating along `order`,
/// collects the maximal cliques, and joins them with a maximum-weight
/// spanning tree on sepset size (ties broken by cluster ids).
inline JoinTreeBuild build_join_tree(const UGraph& g, const std::vector<std::size_t>& order) {
  if (!has_single_element_nodes(g))
    throw Error(ErrorCode::kInvalidArgument, "join tree construction needs single-element nodes");
  const ElementGraph eg = expand(g);
  {
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != eg.vertices.indices())
      throw Error(ErrorCode::kInvalidOrder, "elimination order must list every element exactly once");
  }

  JoinTreeBuild out;
  out.chordal = g;
  std::map<std::size_t, NodeId> node_of;
  for (const auto& [id, els] : g.nodes()) node_of[*els.begin()] = id;

  std::array<ElementSet, kMaxElements> adj = eg.adjacency;
  ElementSet remaining = eg.vertices;
  std::vector<ElementSet> cliques;
  for (auto v : order) {
    const ElementSet nbrs = adj[v] & remaining;
    for (auto a : nbrs)
      for (auto b : nbrs) {
        if (a >= b || adj[a].contains(b)) continue;
        adj[a].insert(b);
        adj[b].insert(a);
        out.fill_ins.emplace_back(a, b);
        out.chordal.add_edge(node_of.at(a), node_of.at(b));
      }
    ElementSet clique = nbrs;
    clique.insert(v);
    cliques.push_back(clique);
    remaining.erase(v);
  }

  std::vector<ElementSet> maximal;
  for (std::size_t i = 0; i < cliques.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < cliques.size() && !dominated; ++j)
      if (i != j && cliques[j].contains(cliques[i]) && (cliques[j] != cliques[i] || j < i)) dominated = true;
    if (!dominated) maximal.push_back(cliques[i]);
  }
  std::sort(maximal.begin(), maximal.end());

  for (std::size_t i = 0; i < maximal.size(); ++i)
    out.tree.clusters.emplace(NodeId{static_cast<std::uint32_t>(i)}, maximal[i]);

  struct Candidate {
    std::size_t weight;
    std::size_t a;
    std::size_t b;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < maximal.size(); ++i)
    for (std::size_t j = i + 1; j < maximal.size(); ++j)
      candidates.push_back({(maximal[i] & maximal[j]).size(), i, j});
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& l, const Candidate& r) { return l.weight > r.weight; });
  std::vector<std::size_t> parent(maximal.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&parent](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& c : candidates) {
    const auto ra = root(c.a);
    const auto rb = root(c.b);
    if (ra == rb) continue;
    parent[ra] = rb;
    out.tree.link(NodeId{static_cast<std::uint32_t>(c.a)}, NodeId{static_cast<std::uint32_t>(c.b)});
  }
  return out;
}

}  // namespace ciproof
