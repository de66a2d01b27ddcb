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

#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ciproof/derivation.hpp"
#include "ciproof/lexer.hpp"
#include "ciproof/model.hpp"

namespace ciproof {

/// Line-oriented move-script format:
///
///     universe <name>+
///     graph <index> { node <id> = {e,...}; edge <id> <id>; }   # initial MUG, indices 0..k-1
///     target {X} | {Z} | {Y}
///     move delete <graph> <node>
///     move add-arcs <graph> <node> <node> [<node> <node>]...
///     move combine <graph> {X} | {Z} | {Y}
///     move merge <graph> <node> <node>
///     move split <graph> <node> {P1} {P2}
///
/// Node ids are the numeric ids of the graphs they refer to.
inline void write_script(std::ostream& os, const MoveScript& script) {
  const Universe& u = script.initial.universe();
  write_universe(os, u);
  for (std::size_t i = 0; i < script.initial.size(); ++i)
    write_graph(os, u, std::to_string(i), script.initial.graphs()[i]);
  os << "target " << format(u, script.target) << '\n';
  struct Writer {
    std::ostream& os;
    const Universe& u;
    void operator()(const DeleteMove& m) const { os << "move delete " << m.graph << ' ' << m.node.value << '\n'; }
    void operator()(const AddArcsMove& m) const {
      os << "move add-arcs " << m.graph;
      for (const auto& [a, b] : m.arcs) os << ' ' << a.value << ' ' << b.value;
      os << '\n';
    }
    void operator()(const CombineMove& m) const { os << "move combine " << m.graph << ' ' << format(u, m.statement) << '\n'; }
    void operator()(const MergeMove& m) const {
      os << "move merge " << m.graph << ' ' << m.first.value << ' ' << m.second.value << '\n';
    }
    void operator()(const SplitMove& m) const {
      os << "move split " << m.graph << ' ' << m.node.value << ' ' << u.format(m.part1) << ' ' << u.format(m.part2)
         << '\n';
    }
  };
  for (const auto& m : script.moves) std::visit(Writer{os, u}, m);
}

inline std::string script_to_string(const MoveScript& script) {
  std::ostringstream os;
  write_script(os, script);
  return os.str();
}

/// Reads a script written by write_script(). Moves are parsed, not checked;
/// run verify_script() on the result.
inline MoveScript parse_script(std::string_view src) {
  text::Cursor in(text::tokenize(src));
  Universe u;
  bool have_universe = false;
  Mug initial;
  std::optional<CanonicalStatement> target;
  std::vector<Move> moves;

  auto statement = [&in, &u]() {
    const text::Token& at = in.peek();
    Statement s;
    s.x = in.element_set(u);
    in.expect("|");
    s.z = in.element_set(u);
    in.expect("|");
    s.y = in.element_set(u);
    CanonicalResult r = TriviallyTrue{};
    try {
      r = canonicalize(s);
    } catch (const Error& e) {
      in.fail(at, e.detail(), e.code());
    }
    if (is_trivial(r)) in.fail(at, "statement is trivially true");
    return std::get<CanonicalStatement>(r);
  };
  auto node = [&in]() { return NodeId{static_cast<std::uint32_t>(in.number("node id"))}; };

  while (true) {
    in.skip_newlines();
    if (in.at_end()) break;
    const text::Token& kw = in.word("keyword");
    if (kw.text == "universe") {
      if (have_universe) in.fail(kw, "universe declared twice");
      std::vector<std::string> names;
      while (in.peek().kind == text::TokenKind::kWord) names.push_back(in.next().text);
      try {
        u = Universe(std::move(names));
      } catch (const Error& e) {
        in.fail(kw, e.detail(), e.code());
      }
      initial = Mug(u);
      have_universe = true;
      in.end_of_line();
      continue;
    }
    if (!have_universe) in.fail(kw, "the universe must be declared first");
    if (kw.text == "graph") {
      if (target) in.fail(kw, "graphs must precede the target");
      const text::Token& idx_tok = in.peek();
      if (in.number("graph index") != initial.size()) in.fail(idx_tok, "graph indices must count up from 0");
      UGraph g;
      in.skip_newlines();
      in.expect("{");
      while (true) {
        while (in.accept(";") || in.peek().kind == text::TokenKind::kNewline) in.skip_newlines();
        if (in.accept("}")) break;
        const text::Token& item = in.word("'node' or 'edge'");
        try {
          if (item.text == "node") {
            const NodeId id = node();
            in.expect("=");
            g.add_node(id, in.element_set(u));
          } else if (item.text == "edge") {
            const NodeId a = node();
            const NodeId b = node();
            g.add_edge(a, b);
          } else {
            in.fail(item, "expected 'node' or 'edge', found '" + item.text + "'");
          }
        } catch (const Error& e) {
          if (e.code() == ErrorCode::kSyntaxError || e.code() == ErrorCode::kUnknownElement) throw;
          in.fail(item, e.detail(), e.code());
        }
      }
      const std::size_t before = initial.size();
      if (initial.append(std::move(g)) != before) in.fail(idx_tok, "duplicate initial graph");
      in.end_of_line();
    } else if (kw.text == "target") {
      if (target) in.fail(kw, "target declared twice");
      target = statement();
      in.end_of_line();
    } else if (kw.text == "move") {
      if (!target) in.fail(kw, "moves must follow the target");
      const text::Token& kind = in.word("move kind");
      const std::size_t graph = in.number("graph index");
      if (kind.text == "delete") {
        moves.emplace_back(DeleteMove{graph, node()});
      } else if (kind.text == "add-arcs") {
        AddArcsMove m{graph, {}};
        while (in.peek().kind == text::TokenKind::kWord) {
          const NodeId a = node();
          const NodeId b = node();
          m.arcs.emplace_back(a, b);
        }
        moves.emplace_back(std::move(m));
      } else if (kind.text == "combine") {
        moves.emplace_back(CombineMove{statement(), graph});
      } else if (kind.text == "merge") {
        const NodeId a = node();
        const NodeId b = node();
        moves.emplace_back(MergeMove{graph, a, b});
      } else if (kind.text == "split") {
        const NodeId n = node();
        const ElementSet p1 = in.element_set(u);
        const ElementSet p2 = in.element_set(u);
        moves.emplace_back(SplitMove{graph, n, p1, p2});
      } else {
        in.fail(kind, "unknown move '" + kind.text + "'");
      }
      in.end_of_line();
    } else {
      in.fail(kw, "unknown declaration '" + kw.text + "'");
    }
  }
  if (!have_universe) throw Error(ErrorCode::kSyntaxError, "1:1: missing universe declaration");
  if (!target) throw Error(ErrorCode::kSyntaxError, "missing target");
  return MoveScript{std::move(initial), std::move(moves), *target};
}

}  // namespace ciproof
