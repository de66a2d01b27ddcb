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
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ciproof/closure.hpp"
#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"
#include "ciproof/mug.hpp"
#include "ciproof/statement.hpp"
#include "ciproof/ugraph.hpp"

namespace ciproof {

struct DeleteMove {
  std::size_t graph;
  NodeId node;
  friend bool operator==(const DeleteMove&, const DeleteMove&) = default;
};
struct AddArcsMove {
  std::size_t graph;
  std::vector<NodePair> arcs;
  friend bool operator==(const AddArcsMove&, const AddArcsMove&) = default;
};
struct CombineMove {
  CanonicalStatement statement;
  std::size_t graph;
  friend bool operator==(const CombineMove&, const CombineMove&) = default;
};
struct MergeMove {
  std::size_t graph;
  NodeId first;
  NodeId second;
  friend bool operator==(const MergeMove&, const MergeMove&) = default;
};
struct SplitMove {
  std::size_t graph;
  NodeId node;
  ElementSet part1;
  ElementSet part2;
  friend bool operator==(const SplitMove&, const SplitMove&) = default;
};

/// Graph indices refer to the MUG as it stands when the move is applied.
using Move = std::variant<DeleteMove, AddArcsMove, CombineMove, MergeMove, SplitMove>;

/// A graphical proof: moves replayed from `initial` end in a MUG that
/// satisfies `target`.
struct MoveScript {
  Mug initial;
  std::vector<Move> moves;
  CanonicalStatement target;
};

/// Applies one move in place and returns the index of the resulting graph
/// (an existing index when the result duplicates a stored graph).
inline std::size_t apply_move(Mug& m, const Move& move) {
  struct Visitor {
    Mug& m;
    std::size_t operator()(const DeleteMove& d) const { return m.append(delete_node(m.graph(d.graph), d.node)); }
    std::size_t operator()(const AddArcsMove& a) const { return m.append(add_arcs(m.graph(a.graph), a.arcs)); }
    std::size_t operator()(const CombineMove& c) const { return m.append(combined_graph(m, c.statement, c.graph)); }
    std::size_t operator()(const MergeMove& mm) const {
      return m.append(merge_nodes(m.graph(mm.graph), mm.first, mm.second));
    }
    std::size_t operator()(const SplitMove& s) const {
      return m.append(split_node(m.graph(s.graph), s.node, s.part1, s.part2));
    }
  };
  return std::visit(Visitor{m}, move);
}

/// Encodes a statement as one graph: a clique on x u z, a clique on z u y,
/// nothing between x and y. Node ids equal element indices.
inline UGraph witness_graph(const CanonicalStatement& s) {
  UGraph g;
  for (auto e : s.elements()) g.add_node(NodeId{static_cast<std::uint32_t>(e)}, ElementSet::single(e));
  auto clique = [&g](ElementSet set) {
    const auto idx = set.indices();
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = i + 1; j < idx.size(); ++j)
        g.add_edge(NodeId{static_cast<std::uint32_t>(idx[i])}, NodeId{static_cast<std::uint32_t>(idx[j])});
  };
  clique(s.x() | s.z());
  clique(s.y() | s.z());
  return g;
}

inline Mug witness_mug(const Universe& u, const std::vector<CanonicalStatement>& statements) {
  Mug m(u);
  for (const auto& s : statements) m.append(witness_graph(s));
  return m;
}

/// Same satisfied statements, single-element nodes only.
inline Mug singleton_mug(const Mug& m) {
  Mug out(m.universe());
  for (const auto& g : m.graphs()) out.append(singleton_form(g));
  return out;
}

/// Turns an axiom chain into a move script. Graphs with multi-element nodes
/// are first rewritten to single-element form; the script's `initial` is
/// that rewritten MUG.
///
/// Decomposition and weak union need no moves: the premise's witness graph
/// already separates the conclusion. Contraction from I(x, z u y, w) and
/// I(x, z, y) takes the witness of I(x, z, y), deletes every node outside
/// x u z u y in element order, then combines the reduced graph with
/// I(x, z u y, w), or with a satisfied statement that puts less of z u y in
/// the conditioning set.
inline MoveScript replay_chain(const Mug& m0, const Chain& chain) {
  if (chain.empty()) throw Error(ErrorCode::kInvalidArgument, "empty derivation chain");
  const Mug initial = std::all_of(m0.graphs().begin(), m0.graphs().end(), has_single_element_nodes)
                          ? m0
                          : singleton_mug(m0);
  MoveScript script{initial, {}, chain.back().conclusion};
  Mug current = initial;
  const Universe& u = current.universe();

  for (const AxiomStep& step : chain) {
    switch (step.rule) {
      case Rule::kGiven:
        if (!satisfies(initial, step.conclusion))
          throw Error(ErrorCode::kPremiseNotSatisfied, format(u, step.conclusion));
        break;
      case Rule::kSymmetry:
      case Rule::kDecomposition:
      case Rule::kWeakUnion:
        break;
      case Rule::kContraction: {
        if (step.premises.size() != 2) throw Error(ErrorCode::kInvalidArgument, "contraction needs two premises");
        const CanonicalStatement& s1 = chain.at(step.premises[0]).conclusion;
        const CanonicalStatement& s2 = chain.at(step.premises[1]).conclusion;
        std::optional<ContractionMatch> match;
        for (const auto& m : contraction_matches(s1, s2))
          if (m.conclusion() == step.conclusion) {
            match = m;
            break;
          }
        if (!match) throw Error(ErrorCode::kInvalidArgument, "contraction step does not match its premises");

        const auto inner = canonical(match->x, match->z, match->y);
        auto witness = satisfies(current, inner);
        if (!witness) throw Error(ErrorCode::kPremiseNotSatisfied, format(u, inner));
        std::size_t gi = *witness;

        const ElementSet keep = match->x | match->z | match->y;
        std::vector<std::pair<ElementSet, NodeId>> extra;
        for (const auto& [id, els] : current.graph(gi).nodes())
          if (!keep.contains(els)) extra.emplace_back(els, id);
        std::sort(extra.begin(), extra.end());
        for (const auto& [els, id] : extra) {
          DeleteMove move{gi, id};
          gi = apply_move(current, move);
          script.moves.emplace_back(move);
        }
        const UGraph& reduced = current.graph(gi);
        if (reduced.elements() != keep || !separates(reduced, match->x, match->z, match->y))
          throw Error(ErrorCode::kReducedGraphLosesSeparation, format(u, inner));

        // Any satisfied I(keep - c, c, w) with c inside z u y keeps x apart
        // from y u w; the smallest such c adds the fewest arcs. The chain's
        // own premise (c = z u y) is always among them.
        std::vector<ElementSet> conds;
        for_each_subset(match->z | match->y, [&conds](ElementSet c) { conds.push_back(c); });
        std::stable_sort(conds.begin(), conds.end(),
                         [](ElementSet a, ElementSet b) { return a.size() < b.size(); });
        std::optional<CanonicalStatement> with;
        for (auto c : conds) {
          auto r = canonicalize(Statement{keep - c, c, match->w});
          if (is_trivial(r)) continue;
          if (satisfies(current, std::get<CanonicalStatement>(r))) {
            with = std::get<CanonicalStatement>(r);
            break;
          }
        }
        if (!with) throw Error(ErrorCode::kPremiseNotSatisfied, format(u, canonical(match->x, match->z | match->y, match->w)));
        CombineMove move{*with, gi};
        apply_move(current, move);
        script.moves.emplace_back(move);
        break;
      }
    }
    if (!satisfies(current, step.conclusion))
      throw Error(ErrorCode::kPremiseNotSatisfied, "replayed step not satisfied: " + format(u, step.conclusion));
  }
  return script;
}

struct ScriptCheck {
  bool ok = true;
  std::optional<std::size_t> failing_move;  // == moves.size() when only the target check fails
  std::string reason;

  explicit operator bool() const { return ok; }
};

/// Replays every move from the script's initial MUG and checks the target.
inline ScriptCheck verify_script(const MoveScript& script) {
  Mug m = script.initial;
  for (std::size_t i = 0; i < script.moves.size(); ++i) {
    try {
      apply_move(m, script.moves[i]);
    } catch (const Error& e) {
      return {false, i, e.what()};
    }
  }
  if (!satisfies(m, script.target)) return {false, script.moves.size(), "target not satisfied"};
  return {};
}

/// Returns the MUG a script ends in; throws on the first bad move.
inline Mug replay(const MoveScript& script) {
  Mug m = script.initial;
  for (const auto& move : script.moves) apply_move(m, move);
  return m;
}

struct SearchLimits {
  std::size_t max_moves = 4;
  std::size_t max_graphs = 16;
  std::size_t max_states = 200000;
};

struct SearchStats {
  std::size_t states_visited = 0;
  std::size_t frontier_size = 0;
  std::size_t depth_reached = 0;
  bool state_cap_hit = false;
};

struct Exhausted {
  SearchStats stats;
};

using SearchResult = std::variant<MoveScript, Exhausted>;

/// Moves available in `m`, in a fixed order: per graph, node deletions by
/// node id, then combinations by statement order. Deleting a graph's last
/// node is never offered.
inline std::vector<Move> candidate_moves(const Mug& m) {
  std::vector<Move> out;
  const ElementSet all = m.universe().all();
  for (std::size_t gi = 0; gi < m.size(); ++gi) {
    const UGraph& g = m.graphs()[gi];
    if (g.node_count() > 1)
      for (const auto& [id, els] : g.nodes()) out.emplace_back(DeleteMove{gi, id});

    const ElementSet present = g.elements();
    const ElementSet outside = all - present;
    std::set<CanonicalStatement> combos;
    for_each_subset(present, [&](ElementSet side) {
      if (side.empty()) return;
      const ElementSet cond = present - side;
      for_each_subset(outside, [&](ElementSet added) {
        if (added.empty()) return;
        const auto s = canonical(side, cond, added);
        if (satisfies(m, s)) combos.insert(s);
      });
    });
    for (const auto& s : combos) out.emplace_back(CombineMove{s, gi});
  }
  return out;
}

/// Breadth-first search over node deletions and graph combinations. States
/// are deduplicated by their sorted graph keys; the first script reaching the
/// target is returned. `observer` sees every newly visited MUG.
inline SearchResult search(const Mug& m0, const CanonicalStatement& target, const SearchLimits& limits,
                           const std::function<void(const Mug&)>& observer = {}) {
  if (limits.max_moves == 0 || limits.max_graphs == 0)
    throw Error(ErrorCode::kInvalidArgument, "search bounds must be positive");
  if (m0.universe().size() > kDefaultEnumerationGuard)
    throw Error(ErrorCode::kUniverseTooLarge, "universe too large for search");
  if (observer) observer(m0);
  if (satisfies(m0, target)) return MoveScript{m0, {}, target};

  struct State {
    Mug mug;
    std::vector<Move> moves;
  };
  std::set<std::vector<GraphKey>> seen{m0.sorted_keys()};
  std::vector<State> frontier{{m0, {}}};
  SearchStats stats;
  stats.states_visited = 1;

  for (std::size_t depth = 1; depth <= limits.max_moves && !frontier.empty(); ++depth) {
    stats.depth_reached = depth;
    std::vector<State> next;
    for (const State& state : frontier) {
      for (const Move& move : candidate_moves(state.mug)) {
        Mug m = state.mug;
        try {
          apply_move(m, move);
        } catch (const Error&) {
          continue;
        }
        if (m.size() == state.mug.size() || m.size() > limits.max_graphs) continue;
        if (!seen.insert(m.sorted_keys()).second) continue;
        ++stats.states_visited;
        if (observer) observer(m);
        std::vector<Move> moves = state.moves;
        moves.push_back(move);
        if (satisfies(m, target)) return MoveScript{m0, std::move(moves), target};
        if (stats.states_visited >= limits.max_states) {
          stats.state_cap_hit = true;
          stats.frontier_size = next.size();
          return Exhausted{stats};
        }
        next.push_back({std::move(m), std::move(moves)});
      }
    }
    frontier = std::move(next);
  }
  stats.frontier_size = frontier.size();
  return Exhausted{stats};
}

}  // namespace ciproof
