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
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ciproof/closure.hpp"
#include "ciproof/derivation.hpp"
#include "ciproof/dsep.hpp"
#include "ciproof/join_tree.hpp"
#include "ciproof/model.hpp"
#include "ciproof/mug.hpp"
#include "ciproof/script_io.hpp"
#include "ciproof/statement.hpp"

namespace ciproof::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kHolds = 0;
inline constexpr int kDoesNotFollow = 1;
inline constexpr int kFailure = 2;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// `a,b` or `{a, b}`; empty text is the empty set.
inline ElementSet parse_list(const Universe& u, std::string_view text) {
  std::string cleaned;
  for (char c : text)
    if (c != '{' && c != '}') cleaned += (c == ',' ? ' ' : c);
  std::istringstream is(cleaned);
  ElementSet s;
  for (std::string name; is >> name;) s.insert(u.index(name));
  return s;
}

inline std::vector<std::size_t> parse_order(const Universe& u, std::string_view text) {
  std::string cleaned;
  for (char c : text) cleaned += (c == ',' ? ' ' : c);
  std::istringstream is(cleaned);
  std::vector<std::size_t> out;
  for (std::string name; is >> name;) out.push_back(u.index(name));
  return out;
}

/// `X|Z|Y` with list syntax per side.
inline Statement parse_statement_arg(const Universe& u, std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i)
    if (i == text.size() || text[i] == '|') {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  if (parts.size() != 3) throw Error(ErrorCode::kInvalidArgument, "statement must have the form X|Z|Y");
  return {parse_list(u, parts[0]), parse_list(u, parts[1]), parse_list(u, parts[2])};
}

inline nlohmann::ordered_json names_json(const Universe& u, ElementSet s) {
  auto arr = nlohmann::ordered_json::array();
  for (auto i : s) arr.push_back(u.name(i));
  return arr;
}

inline nlohmann::ordered_json statement_json(const Universe& u, const CanonicalStatement& s) {
  return {{"x", names_json(u, s.x())}, {"z", names_json(u, s.z())}, {"y", names_json(u, s.y())},
          {"text", format(u, s)}};
}

inline std::string step_text(const Universe& u, std::size_t i, const AxiomStep& step) {
  std::string out = "step " + std::to_string(i) + ' ' + std::string(to_string(step.rule));
  if (!step.premises.empty()) {
    out += " from";
    for (auto p : step.premises) out += ' ' + std::to_string(p);
  }
  return out + " : " + format(u, step.conclusion);
}

inline nlohmann::ordered_json chain_json(const Universe& u, const Chain& chain) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& step : chain)
    arr.push_back({{"rule", std::string(to_string(step.rule))},
                   {"premises", step.premises},
                   {"conclusion", statement_json(u, step.conclusion)}});
  return arr;
}

/// Inputs shared by the statement engines: declared statements plus
/// everything the declared graphs satisfy.
inline std::vector<CanonicalStatement> axiom_premises(const ModelFile& model) {
  Mug graphs(model.universe);
  for (const auto& g : model.graphs) graphs.append(g.graph);
  std::set<CanonicalStatement> out;
  for (const auto& s : enumerate_satisfied(graphs)) out.insert(s);
  for (const auto& s : model.statements)
    if (auto r = canonicalize(s.statement); !is_trivial(r)) out.insert(std::get<CanonicalStatement>(r));
  return {out.begin(), out.end()};
}

/// Starting MUG for the graphical engines: declared graphs in single-element
/// form, then one witness graph per declared statement.
inline Mug initial_mug(const ModelFile& model) {
  Mug m(model.universe);
  for (const auto& g : model.graphs) m.append(singleton_form(g.graph));
  for (const auto& s : model.statements)
    if (auto r = canonicalize(s.statement); !is_trivial(r)) m.append(witness_graph(std::get<CanonicalStatement>(r)));
  return m;
}

inline const NamedGraph& require_graph(const ModelFile& m, const std::string& name) {
  if (const auto* g = m.find_graph(name)) return *g;
  throw Error(ErrorCode::kInvalidArgument, "no graph named '" + name + "'");
}
inline const NamedDigraph& require_digraph(const ModelFile& m, const std::string& name) {
  if (const auto* d = m.find_digraph(name)) return *d;
  throw Error(ErrorCode::kInvalidArgument, "no digraph named '" + name + "'");
}

struct Options {
  std::string file;
  bool emit_chains = false;
  bool json = false;
  std::string stmt;
  std::string mode = "axioms";
  std::size_t max_moves = 4;
  std::size_t max_graphs = 16;
  std::string script_out;
  std::string graph;
  std::string tree;
  std::string x;
  std::string z;
  std::string y;
  std::string order;
  bool propagate_observed = false;
};

inline int cmd_closure(const Options& o, std::ostream& out) {
  const ModelFile model = parse_model(read_file(o.file));
  const auto init = axiom_premises(model);
  const Closure c = closure(init, model.universe);
  const Universe& u = model.universe;
  if (o.json) {
    nlohmann::ordered_json j;
    j["universe"] = u.names();
    j["count"] = c.size();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : c.statements()) {
      auto entry = statement_json(u, s);
      if (o.emit_chains) entry["chain"] = chain_json(u, c.chain(s));
      arr.push_back(std::move(entry));
    }
    j["statements"] = std::move(arr);
    out << j.dump(2) << '\n';
    return kHolds;
  }
  write_universe(out, u);
  out << "statements " << c.size() << '\n';
  for (const auto& s : c.statements()) {
    out << "stmt " << format(u, s) << '\n';
    if (!o.emit_chains) continue;
    const Chain chain = c.chain(s);
    for (std::size_t i = 0; i < chain.size(); ++i) out << "  " << step_text(u, i, chain[i]) << '\n';
  }
  return kHolds;
}

inline void write_script_file(const std::string& path, const MoveScript& script) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  write_script(f, script);
}

inline int cmd_query(const Options& o, std::ostream& out) {
  const ModelFile model = parse_model(read_file(o.file));
  const Universe& u = model.universe;
  const Statement raw = parse_statement_arg(u, o.stmt);
  if (o.mode != "axioms" && o.mode != "replay" && o.mode != "search")
    throw Error(ErrorCode::kInvalidArgument, "mode must be axioms, replay or search");
  const CanonicalResult target = canonicalize(raw);

  nlohmann::ordered_json j;
  j["query"] = format(u, raw);
  j["mode"] = o.mode;
  auto finish = [&](const std::string& result, int code) {
    if (o.json) {
      j["result"] = result;
      out << j.dump(2) << '\n';
    }
    return code;
  };
  if (!o.json) out << "query " << format(u, raw) << "\nmode " << o.mode << '\n';

  if (is_trivial(target)) {
    if (!o.json) out << "result trivially-true\n";
    return finish("trivially-true", kHolds);
  }
  const CanonicalStatement& s = std::get<CanonicalStatement>(target);

  auto emit_script = [&](const MoveScript& script) {
    const ScriptCheck check = verify_script(script);
    if (!check) throw Error(ErrorCode::kInvalidArgument, "internal error: emitted script does not verify");
    if (!o.script_out.empty()) write_script_file(o.script_out, script);
    if (o.json) {
      j["moves"] = script.moves.size();
      j["verified"] = true;
      j["script"] = script_to_string(script);
      return;
    }
    out << "result proven\nmoves " << script.moves.size() << "\nverified yes\nbegin script\n";
    write_script(out, script);
    out << "end script\n";
  };

  if (o.mode == "axioms") {
    const auto init = axiom_premises(model);
    const Closure c = closure(init, u);
    if (!c.contains(s)) {
      if (!o.json) out << "result not-derivable\n";
      return finish("not-derivable", kDoesNotFollow);
    }
    const Chain chain = c.chain(s);
    if (!verify_chain(chain, init)) throw Error(ErrorCode::kInvalidArgument, "internal error: chain does not verify");
    if (o.json) {
      j["chain"] = chain_json(u, chain);
      return finish("proven", kHolds);
    }
    out << "result proven\nsteps " << chain.size() << '\n';
    for (std::size_t i = 0; i < chain.size(); ++i) out << step_text(u, i, chain[i]) << '\n';
    return kHolds;
  }

  const Mug m0 = initial_mug(model);
  if (o.mode == "replay") {
    const Closure c = closure(enumerate_satisfied(m0), u);
    if (!c.contains(s)) {
      if (!o.json) out << "result not-derivable\n";
      return finish("not-derivable", kDoesNotFollow);
    }
    emit_script(replay_chain(m0, c.chain(s)));
    return finish("proven", kHolds);
  }

  SearchLimits limits;
  limits.max_moves = o.max_moves;
  limits.max_graphs = o.max_graphs;
  const SearchResult r = search(m0, s, limits);
  if (const auto* ex = std::get_if<Exhausted>(&r)) {
    const auto& st = ex->stats;
    if (o.json) {
      j["states"] = st.states_visited;
      j["depth"] = st.depth_reached;
      j["frontier"] = st.frontier_size;
      j["state_cap_hit"] = st.state_cap_hit;
    } else {
      out << "result exhausted\nstates " << st.states_visited << "\ndepth " << st.depth_reached << "\nfrontier "
          << st.frontier_size << "\nstate-cap-hit " << (st.state_cap_hit ? "yes" : "no") << '\n';
    }
    return finish("exhausted", kDoesNotFollow);
  }
  emit_script(std::get<MoveScript>(r));
  return finish("proven", kHolds);
}

inline int cmd_dsep(const Options& o, std::ostream& out) {
  const ModelFile model = parse_model(read_file(o.file));
  const Universe& u = model.universe;
  const NamedDigraph& d = require_digraph(model, o.graph);
  const ElementSet x = parse_list(u, o.x);
  const ElementSet z = parse_list(u, o.z);
  const ElementSet y = parse_list(u, o.y);
  const bool sep = d_separated(d.graph, x, z, y, DsepOptions{o.propagate_observed});
  out << "dsep " << format(u, Statement{x, z, y}) << '\n' << (sep ? "separated" : "not-separated") << '\n';
  return sep ? kHolds : kDoesNotFollow;
}

inline std::map<NodeId, std::string> element_node_names(const Universe& u, const UGraph& g) {
  std::map<NodeId, std::string> names;
  for (const auto& [id, els] : g.nodes())
    if (els.size() == 1) names.emplace(id, u.name(*els.begin()));
  return names;
}

inline int cmd_moralize(const Options& o, std::ostream& out) {
  const ModelFile model = parse_model(read_file(o.file));
  const NamedDigraph& d = require_digraph(model, o.graph);
  const UGraph g = moralize(d.graph);
  write_graph(out, model.universe, d.name + "_moral", g, element_node_names(model.universe, g));
  return kHolds;
}

inline int cmd_check_jointree(const Options& o, std::ostream& out) {
  const ModelFile model = parse_model(read_file(o.file));
  const NamedJoinTree* t = model.find_jointree(o.tree);
  if (!t) throw Error(ErrorCode::kInvalidArgument, "no jointree named '" + o.tree + "'");
  const Universe& u = model.universe;
  out << "jointree " << t->name << '\n';
  for (const auto& [e, sep] : t->tree.sepsets)
    out << "sepset " << node_label(t->cluster_names, e.first) << ' ' << node_label(t->cluster_names, e.second) << " = "
        << u.format(sep) << '\n';
  auto violations = validate_join_tree(t->tree);
  if (violations.empty()) {
    out << "valid\n";
    return kHolds;
  }
  out << "invalid\n";
  for (const auto& v : violations) {
    const std::string detail = v.element ? "element " + u.name(*v.element) : v.detail;
    out << "violation " << to_string(v.issue) << ' ' << detail << '\n';
  }
  return kDoesNotFollow;
}

inline int cmd_build_jointree(const Options& o, std::ostream& out) {
  const ModelFile model = parse_model(read_file(o.file));
  const Universe& u = model.universe;
  UGraph g;
  std::map<NodeId, std::string> names;
  std::string base = o.graph;
  if (const auto* ng = model.find_graph(o.graph)) {
    g = ng->graph;
    names = ng->node_names;
  } else if (const auto* nd = model.find_digraph(o.graph)) {
    g = moralize(nd->graph);
    names = element_node_names(u, g);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "no graph or digraph named '" + o.graph + "'");
  }
  const JoinTreeBuild build = build_join_tree(g, parse_order(u, o.order));
  out << "fill-ins " << build.fill_ins.size() << '\n';
  for (const auto& [a, b] : build.fill_ins) out << "fill-in " << u.name(a) << ' ' << u.name(b) << '\n';
  write_graph(out, u, base + "_chordal", build.chordal, names);
  std::map<NodeId, std::string> cluster_names;
  for (const auto& [id, els] : build.tree.clusters) cluster_names.emplace(id, "c" + std::to_string(id.value));
  write_jointree(out, u, base + "_jointree", build.tree, cluster_names);
  out << (validate_join_tree(build.tree).empty() ? "valid\n" : "invalid\n");
  return kHolds;
}

inline int cmd_verify_script(const Options& o, std::ostream& out) {
  const MoveScript script = parse_script(read_file(o.file));
  const ScriptCheck check = verify_script(script);
  out << "moves " << script.moves.size() << '\n';
  if (check) {
    out << "verified yes\n";
    return kHolds;
  }
  out << "verified no\nfailing-move " << *check.failing_move << '\n' << "reason " << check.reason << '\n';
  return kDoesNotFollow;
}

/// Entry point shared by the executable and the tests.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional-independence inference with graphoid axioms and multiple undirected graphs",
               "ciproof"};
  app.require_subcommand(1);
  Options o;

  auto* closure_cmd = app.add_subcommand("closure", "Print the graphoid closure of a model's statements");
  closure_cmd->add_option("file", o.file, "Model file")->required();
  closure_cmd->add_flag("--emit-chains", o.emit_chains, "Print a derivation chain per statement");
  closure_cmd->add_flag("--json", o.json, "JSON output");

  auto* query_cmd = app.add_subcommand("query", "Decide whether a statement follows from a model");
  query_cmd->add_option("file", o.file, "Model file")->required();
  query_cmd->add_option("--stmt", o.stmt, "Statement as X|Z|Y")->required();
  query_cmd->add_option("--mode", o.mode, "axioms, replay or search")
      ->check(CLI::IsMember({"axioms", "replay", "search"}));
  query_cmd->add_option("--max-moves", o.max_moves, "Search depth bound")->check(CLI::PositiveNumber);
  query_cmd->add_option("--max-graphs", o.max_graphs, "Search bound on graphs per MUG")->check(CLI::PositiveNumber);
  query_cmd->add_option("--script-out", o.script_out, "Also write the move script to this file");
  query_cmd->add_flag("--json", o.json, "JSON output");

  auto* dsep_cmd = app.add_subcommand("dsep", "D-separation test on a directed graph");
  dsep_cmd->add_option("file", o.file, "Model file")->required();
  dsep_cmd->add_option("--graph", o.graph, "Digraph name")->required();
  dsep_cmd->add_option("--x", o.x, "Comma-separated elements")->required();
  dsep_cmd->add_option("--z", o.z, "Comma-separated elements (may be empty)");
  dsep_cmd->add_option("--y", o.y, "Comma-separated elements")->required();
  dsep_cmd->add_flag("--propagate-observed", o.propagate_observed,
                     "Also propagate deterministic elements in Z (for comparison)");

  auto* moral_cmd = app.add_subcommand("moralize", "Print the moral graph of a digraph");
  moral_cmd->add_option("file", o.file, "Model file")->required();
  moral_cmd->add_option("--graph", o.graph, "Digraph name")->required();

  auto* check_cmd = app.add_subcommand("check-jointree", "Validate a declared join tree");
  check_cmd->add_option("file", o.file, "Model file")->required();
  check_cmd->add_option("--tree", o.tree, "Jointree name")->required();

  auto* build_cmd = app.add_subcommand("build-jointree", "Triangulate a graph and build a join tree");
  build_cmd->add_option("file", o.file, "Model file")->required();
  build_cmd->add_option("--graph", o.graph, "Graph or digraph name")->required();
  build_cmd->add_option("--order", o.order, "Comma-separated elimination order")->required();

  auto* verify_cmd = app.add_subcommand("verify-script", "Replay and check a move script");
  verify_cmd->add_option("file", o.file, "Script file")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kHolds : kFailure;
  }

  try {
    if (closure_cmd->parsed()) return cmd_closure(o, out);
    if (query_cmd->parsed()) return cmd_query(o, out);
    if (dsep_cmd->parsed()) return cmd_dsep(o, out);
    if (moral_cmd->parsed()) return cmd_moralize(o, out);
    if (check_cmd->parsed()) return cmd_check_jointree(o, out);
    if (build_cmd->parsed()) return cmd_build_jointree(o, out);
    if (verify_cmd->parsed()) return cmd_verify_script(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace ciproof::cli
