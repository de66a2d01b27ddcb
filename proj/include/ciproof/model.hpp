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

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ciproof/dsep.hpp"
#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"
#include "ciproof/join_tree.hpp"
#include "ciproof/lexer.hpp"
#include "ciproof/statement.hpp"
#include "ciproof/ugraph.hpp"

namespace ciproof {

struct NamedGraph {
  std::string name;
  UGraph graph;
  std::map<NodeId, std::string> node_names;

  friend bool operator==(const NamedGraph&, const NamedGraph&) = default;
};

struct NamedDigraph {
  std::string name;
  DiGraph graph;

  friend bool operator==(const NamedDigraph&, const NamedDigraph&) = default;
};

struct NamedJoinTree {
  std::string name;
  JoinTree tree;
  std::map<NodeId, std::string> cluster_names;

  friend bool operator==(const NamedJoinTree&, const NamedJoinTree&) = default;
};

struct NamedStatement {
  std::string name;
  Statement statement;

  friend bool operator==(const NamedStatement&, const NamedStatement&) = default;
};

/// Everything one model file declares: a universe, then any mix of
/// undirected graphs, directed graphs, join trees and statements.
struct ModelFile {
  Universe universe;
  std::vector<NamedGraph> graphs;
  std::vector<NamedDigraph> digraphs;
  std::vector<NamedJoinTree> jointrees;
  std::vector<NamedStatement> statements;

  const NamedGraph* find_graph(std::string_view name) const { return find(graphs, name); }
  const NamedDigraph* find_digraph(std::string_view name) const { return find(digraphs, name); }
  const NamedJoinTree* find_jointree(std::string_view name) const { return find(jointrees, name); }

  friend bool operator==(const ModelFile&, const ModelFile&) = default;

 private:
  template <typename T>
  static const T* find(const std::vector<T>& items, std::string_view name) {
    for (const auto& item : items)
      if (item.name == name) return &item;
    return nullptr;
  }
};

namespace detail {

class ModelParser {
 public:
  explicit ModelParser(std::string_view src) : in_(text::tokenize(src)) {}

  ModelFile parse() {
    while (true) {
      in_.skip_newlines();
      if (in_.at_end()) break;
      const text::Token& kw = in_.word("declaration");
      if (kw.text == "universe") {
        parse_universe(kw);
      } else {
        if (!have_universe_) in_.fail(kw, "the universe must be declared first");
        if (kw.text == "graph") parse_graph();
        else if (kw.text == "digraph") parse_digraph();
        else if (kw.text == "jointree") parse_jointree();
        else if (kw.text == "stmt") parse_statement();
        else in_.fail(kw, "unknown declaration '" + kw.text + "'");
      }
    }
    if (!have_universe_) throw Error(ErrorCode::kSyntaxError, "1:1: missing universe declaration");
    return std::move(model_);
  }

 private:
  void parse_universe(const text::Token& kw) {
    if (have_universe_) in_.fail(kw, "universe declared twice");
    std::vector<std::string> names;
    std::set<std::string> seen;
    while (in_.peek().kind == text::TokenKind::kWord) {
      const text::Token& t = in_.next();
      if (!seen.insert(t.text).second) in_.fail(t, "element '" + t.text + "' declared twice", ErrorCode::kDuplicateElement);
      names.push_back(t.text);
    }
    in_.end_of_line();
    model_.universe = Universe(std::move(names));
    have_universe_ = true;
  }

  std::string declare_name() {
    const text::Token& t = in_.word("name");
    if (!names_.insert(t.text).second) in_.fail(t, "name '" + t.text + "' already used", ErrorCode::kDuplicateName);
    return t.text;
  }

  // Items inside `{ ... }` are separated by ';' and/or newlines.
  template <typename Fn>
  void block(Fn&& item) {
    in_.skip_newlines();
    in_.expect("{");
    while (true) {
      while (in_.accept(";") || in_.peek().kind == text::TokenKind::kNewline) in_.skip_newlines();
      if (in_.accept("}")) break;
      if (in_.at_end()) in_.fail(in_.peek(), "unterminated block");
      item(in_.word("keyword"));
      if (!in_.accept(";") && in_.peek().kind != text::TokenKind::kNewline && !(in_.peek().text == "}"))
        in_.fail(in_.peek(), "expected ';'" + in_.found());
    }
    in_.end_of_line();
  }

  void parse_graph() {
    NamedGraph g{declare_name(), {}, {}};
    std::map<std::string, NodeId> ids;
    auto node_ref = [&](const text::Token& t) {
      auto it = ids.find(t.text);
      if (it == ids.end()) in_.fail(t, "unknown node '" + t.text + "'", ErrorCode::kUnknownNode);
      return it->second;
    };
    block([&](const text::Token& kw) {
      if (kw.text == "node") {
        const text::Token& id = in_.word("node id");
        if (ids.count(id.text)) in_.fail(id, "node '" + id.text + "' declared twice", ErrorCode::kDuplicateName);
        in_.expect("=");
        const text::Token& at = in_.peek();
        const ElementSet els = in_.element_set(model_.universe);
        if (els.empty()) in_.fail(at, "nodes must carry at least one element");
        const NodeId n = g.graph.add_node(els);
        ids.emplace(id.text, n);
        g.node_names.emplace(n, id.text);
      } else if (kw.text == "edge") {
        const text::Token& a = in_.word("node id");
        const NodeId na = node_ref(a);
        const text::Token& b = in_.word("node id");
        const NodeId nb = node_ref(b);
        if (na == nb) in_.fail(b, "self-loop on node '" + b.text + "'", ErrorCode::kSelfLoop);
        g.graph.add_edge(na, nb);
      } else {
        in_.fail(kw, "expected 'node' or 'edge', found '" + kw.text + "'");
      }
    });
    model_.graphs.push_back(std::move(g));
  }

  std::size_t element(const text::Token& t) {
    auto idx = model_.universe.find(t.text);
    if (!idx) in_.fail(t, "unknown element '" + t.text + "'", ErrorCode::kUnknownElement);
    return *idx;
  }

  void parse_digraph() {
    NamedDigraph d{declare_name(), DiGraph(model_.universe)};
    auto declared = [&](const text::Token& t) {
      const std::size_t e = element(t);
      if (!d.graph.nodes().contains(e)) in_.fail(t, "'" + t.text + "' is not a node of this digraph", ErrorCode::kUnknownElement);
      return e;
    };
    block([&](const text::Token& kw) {
      bool det = false;
      if (kw.text == "det") {
        in_.expect("node");
        det = true;
      }
      if (det || kw.text == "node") {
        const text::Token& t = in_.word("element");
        const std::size_t e = element(t);
        if (d.graph.nodes().contains(e)) in_.fail(t, "node '" + t.text + "' declared twice", ErrorCode::kDuplicateName);
        d.graph.add_node(e, det);
      } else if (kw.text == "arc") {
        const text::Token& a = in_.word("element");
        const std::size_t from = declared(a);
        const text::Token& b = in_.word("element");
        const std::size_t to = declared(b);
        try {
          d.graph.add_arc(from, to);
        } catch (const Error& e) {
          in_.fail(b, e.detail(), e.code());
        }
      } else {
        in_.fail(kw, "expected 'node', 'det node' or 'arc', found '" + kw.text + "'");
      }
    });
    model_.digraphs.push_back(std::move(d));
  }

  void parse_jointree() {
    NamedJoinTree t{declare_name(), {}, {}};
    std::map<std::string, NodeId> ids;
    auto cluster_ref = [&](const text::Token& tok) {
      auto it = ids.find(tok.text);
      if (it == ids.end()) in_.fail(tok, "unknown cluster '" + tok.text + "'", ErrorCode::kUnknownNode);
      return it->second;
    };
    block([&](const text::Token& kw) {
      if (kw.text == "cluster") {
        const text::Token& id = in_.word("cluster id");
        if (ids.count(id.text)) in_.fail(id, "cluster '" + id.text + "' declared twice", ErrorCode::kDuplicateName);
        in_.expect("=");
        const text::Token& at = in_.peek();
        const ElementSet els = in_.element_set(model_.universe);
        if (els.empty()) in_.fail(at, "clusters must carry at least one element");
        const NodeId n{static_cast<std::uint32_t>(ids.size())};
        ids.emplace(id.text, n);
        t.tree.clusters.emplace(n, els);
        t.cluster_names.emplace(n, id.text);
      } else if (kw.text == "link") {
        const NodeId a = cluster_ref(in_.word("cluster id"));
        const text::Token& bt = in_.word("cluster id");
        const NodeId b = cluster_ref(bt);
        if (a == b) in_.fail(bt, "self-link on cluster '" + bt.text + "'", ErrorCode::kSelfLoop);
        t.tree.link(a, b);
      } else {
        in_.fail(kw, "expected 'cluster' or 'link', found '" + kw.text + "'");
      }
    });
    model_.jointrees.push_back(std::move(t));
  }

  void parse_statement() {
    NamedStatement s;
    s.name = declare_name();
    in_.expect(":");
    const text::Token& at = in_.peek();
    s.statement.x = in_.element_set(model_.universe);
    in_.expect("|");
    s.statement.z = in_.element_set(model_.universe);
    in_.expect("|");
    s.statement.y = in_.element_set(model_.universe);
    try {
      canonicalize(s.statement);
    } catch (const Error& e) {
      in_.fail(at, e.detail(), e.code());
    }
    in_.end_of_line();
    model_.statements.push_back(std::move(s));
  }

  text::Cursor in_;
  ModelFile model_;
  bool have_universe_ = false;
  std::set<std::string> names_;
};

}  // namespace detail

/// Parses the model grammar. Errors carry `line:column` in their message.
///
///     universe <name>+
///     graph <Name> { node <id> = {e,...}; edge <id> <id>; }
///     digraph <Name> { node <e>; det node <e>; arc <e> <e>; }
///     jointree <Name> { cluster <id> = {e,...}; link <id> <id>; }
///     stmt <Name>: {X} | {Z} | {Y}
inline ModelFile parse_model(std::string_view src) { return detail::ModelParser(src).parse(); }

inline std::string node_label(const std::map<NodeId, std::string>& names, NodeId n) {
  auto it = names.find(n);
  return it != names.end() ? it->second : std::to_string(n.value);
}

inline void write_graph(std::ostream& os, const Universe& u, std::string_view name, const UGraph& g,
                        const std::map<NodeId, std::string>& names = {}) {
  os << "graph " << name << " {\n";
  for (const auto& [id, els] : g.nodes()) os << "  node " << node_label(names, id) << " = " << u.format(els) << ";\n";
  for (const auto& [a, b] : g.edges()) os << "  edge " << node_label(names, a) << ' ' << node_label(names, b) << ";\n";
  os << "}\n";
}

inline void write_digraph(std::ostream& os, std::string_view name, const DiGraph& d) {
  const Universe& u = d.universe();
  os << "digraph " << name << " {\n";
  for (auto v : d.nodes()) os << "  " << (d.deterministic().contains(v) ? "det node " : "node ") << u.name(v) << ";\n";
  for (const auto& [from, to] : d.arcs()) os << "  arc " << u.name(from) << ' ' << u.name(to) << ";\n";
  os << "}\n";
}

inline void write_jointree(std::ostream& os, const Universe& u, std::string_view name, const JoinTree& t,
                           const std::map<NodeId, std::string>& names = {}) {
  os << "jointree " << name << " {\n";
  for (const auto& [id, els] : t.clusters) os << "  cluster " << node_label(names, id) << " = " << u.format(els) << ";\n";
  for (const auto& [a, b] : t.edges) os << "  link " << node_label(names, a) << ' ' << node_label(names, b) << ";\n";
  os << "}\n";
}

inline void write_universe(std::ostream& os, const Universe& u) {
  os << "universe";
  for (const auto& n : u.names()) os << ' ' << n;
  os << '\n';
}

/// Text that parse_model() reads back into an equal model.
inline std::string serialize(const ModelFile& m) {
  std::ostringstream os;
  write_universe(os, m.universe);
  for (const auto& g : m.graphs) write_graph(os, m.universe, g.name, g.graph, g.node_names);
  for (const auto& d : m.digraphs) write_digraph(os, d.name, d.graph);
  for (const auto& t : m.jointrees) write_jointree(os, m.universe, t.name, t.tree, t.cluster_names);
  for (const auto& s : m.statements) os << "stmt " << s.name << ": " << format(m.universe, s.statement) << '\n';
  return os.str();
}

}  // namespace ciproof
