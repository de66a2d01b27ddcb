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
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"
#include "ciproof/statement.hpp"

namespace ciproof {

enum class Rule { kGiven, kSymmetry, kDecomposition, kWeakUnion, kContraction };

constexpr std::string_view to_string(Rule r) {
  switch (r) {
    case Rule::kGiven: return "given";
    case Rule::kSymmetry: return "symmetry";
    case Rule::kDecomposition: return "decomposition";
    case Rule::kWeakUnion: return "weak-union";
    case Rule::kContraction: return "contraction";
  }
  return "unknown";
}

inline std::optional<Rule> rule_from_string(std::string_view s) {
  for (auto r : {Rule::kGiven, Rule::kSymmetry, Rule::kDecomposition, Rule::kWeakUnion, Rule::kContraction})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

struct Consequence {
  Rule rule;
  CanonicalStatement statement;

  friend bool operator==(const Consequence&, const Consequence&) = default;
};

/// Both readings of a canonical statement: (x, z, y) and (y, z, x).
inline std::vector<Statement> orientations(const CanonicalStatement& s) {
  if (s.x() == s.y()) return {s.raw()};
  return {s.raw(), Statement{s.y(), s.z(), s.x()}};
}

/// One way to read a pair of statements as contraction premises
/// I(x, z u y, w) and I(x, z, y).
struct ContractionMatch {
  ElementSet x;
  ElementSet z;
  ElementSet y;
  ElementSet w;

  CanonicalStatement conclusion() const { return canonical(x, z, y | w); }
};

inline std::vector<ContractionMatch> contraction_matches(const CanonicalStatement& s1,
                                                         const CanonicalStatement& s2) {
  std::vector<ContractionMatch> out;
  for (const auto& a : orientations(s1)) {
    for (const auto& b : orientations(s2)) {
      if (a.x != b.x) continue;
      // b.z u b.y must split a.z.
      if ((b.z | b.y) != a.z) continue;
      out.push_back({a.x, b.z, b.y, a.y});
    }
  }
  return out;
}

/// Single-rule consequences. Without `s2`: decomposition and weak union on
/// either outer side. With `s2`: contraction reading s1 as I(x, z u y, w) and
/// s2 as I(x, z, y). Results are canonical, nontrivial and distinct.
inline std::vector<Consequence> axiom_consequences(const CanonicalStatement& s1,
                                                   const std::optional<CanonicalStatement>& s2 = std::nullopt) {
  std::vector<Consequence> out;
  auto add = [&out](Rule r, const CanonicalStatement& c) {
    Consequence cons{r, c};
    if (std::find(out.begin(), out.end(), cons) == out.end()) out.push_back(cons);
  };
  if (s2) {
    for (const auto& m : contraction_matches(s1, *s2)) add(Rule::kContraction, m.conclusion());
    return out;
  }
  for (const auto& o : orientations(s1)) {
    for_each_subset(o.y, [&](ElementSet part) {
      if (part.empty() || part == o.y) return;
      add(Rule::kDecomposition, canonical(o.x, o.z, part));
    });
    for_each_subset(o.y, [&](ElementSet part) {
      if (part.empty() || part == o.y) return;
      add(Rule::kWeakUnion, canonical(o.x, o.z | part, o.y - part));
    });
  }
  return out;
}

/// One line of a derivation chain. Premises index earlier steps.
struct AxiomStep {
  Rule rule;
  std::vector<std::size_t> premises;
  CanonicalStatement conclusion;

  friend bool operator==(const AxiomStep&, const AxiomStep&) = default;
};

using Chain = std::vector<AxiomStep>;

/// Least fixpoint of a statement set under the graphoid axioms, with one
/// discovery-order derivation recorded per statement.
class Closure {
 public:
  struct Derivation {
    Rule rule;
    std::vector<CanonicalStatement> premises;
  };

  Closure() = default;
  explicit Closure(Universe u) : universe_(std::move(u)) {}

  const Universe& universe() const { return universe_; }
  /// Sorted.
  const std::set<CanonicalStatement>& statements() const { return statements_; }
  bool contains(const CanonicalStatement& s) const { return statements_.count(s) != 0; }
  std::size_t size() const { return statements_.size(); }

  const Derivation& derivation(const CanonicalStatement& s) const {
    auto it = derivations_.find(s);
    if (it == derivations_.end()) throw Error(ErrorCode::kInvalidArgument, "statement not in closure");
    return it->second;
  }

  /// Derivation chain ending in `s`: premises before conclusions, every step
  /// reachable from the last one.
  Chain chain(const CanonicalStatement& s) const {
    Chain out;
    std::map<CanonicalStatement, std::size_t> placed;
    // Iterative post-order so deep chains cannot overflow the stack.
    std::vector<std::pair<CanonicalStatement, bool>> stack{{s, false}};
    while (!stack.empty()) {
      auto [cur, expanded] = stack.back();
      stack.pop_back();
      if (placed.count(cur)) continue;
      const Derivation& d = derivation(cur);
      if (!expanded) {
        stack.emplace_back(cur, true);
        for (auto it = d.premises.rbegin(); it != d.premises.rend(); ++it)
          if (!placed.count(*it)) stack.emplace_back(*it, false);
        continue;
      }
      AxiomStep step{d.rule, {}, cur};
      for (const auto& p : d.premises) step.premises.push_back(placed.at(p));
      placed.emplace(cur, out.size());
      out.push_back(std::move(step));
    }
    return out;
  }

  bool insert(const CanonicalStatement& s, Rule rule, std::vector<CanonicalStatement> premises) {
    if (!statements_.insert(s).second) return false;
    derivations_.emplace(s, Derivation{rule, std::move(premises)});
    return true;
  }

 private:
  Universe universe_;
  std::set<CanonicalStatement> statements_;
  std::map<CanonicalStatement, Derivation> derivations_;
};

/// Saturates `init` under decomposition, weak union and contraction
/// (symmetry and overlap live in the canonical form). The worklist is FIFO,
/// seeded in sorted order, so results and chains are deterministic.
inline Closure closure(const std::vector<CanonicalStatement>& init, const Universe& u,
                       std::size_t guard = kDefaultEnumerationGuard) {
  if (u.size() > guard)
    throw Error(ErrorCode::kUniverseTooLarge,
                std::to_string(u.size()) + " elements exceed the enumeration guard of " + std::to_string(guard));
  Closure c(u);
  std::deque<CanonicalStatement> work;
  std::vector<CanonicalStatement> seeds = init;
  std::sort(seeds.begin(), seeds.end());
  for (const auto& s : seeds) {
    if (!u.all().contains(s.elements()))
      throw Error(ErrorCode::kUnknownElement, "statement mentions elements outside the universe");
    if (c.insert(s, Rule::kGiven, {})) work.push_back(s);
  }

  std::vector<CanonicalStatement> done;
  while (!work.empty()) {
    const CanonicalStatement s = work.front();
    work.pop_front();
    for (const auto& cons : axiom_consequences(s))
      if (c.insert(cons.statement, cons.rule, {s})) work.push_back(cons.statement);
    done.push_back(s);
    for (const auto& t : done) {
      for (const auto& cons : axiom_consequences(s, t))
        if (c.insert(cons.statement, cons.rule, {s, t})) work.push_back(cons.statement);
      for (const auto& cons : axiom_consequences(t, s))
        if (c.insert(cons.statement, cons.rule, {t, s})) work.push_back(cons.statement);
    }
  }
  return c;
}

struct Proven {
  Chain chain;
};
struct NotDerivable {};

using QueryResult = std::variant<Proven, NotDerivable>;

inline QueryResult query(const Closure& c, const Statement& s) {
  auto r = canonicalize(s);
  if (is_trivial(r)) return Proven{};
  const auto& cs = std::get<CanonicalStatement>(r);
  if (!c.contains(cs)) return NotDerivable{};
  return Proven{c.chain(cs)};
}

struct ChainCheck {
  bool ok = true;
  std::optional<std::size_t> failing_step;

  explicit operator bool() const { return ok; }
};

/// Re-derives every step independently of the closure that produced it.
inline ChainCheck verify_chain(const Chain& chain, const std::vector<CanonicalStatement>& init) {
  const std::set<CanonicalStatement> given(init.begin(), init.end());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const AxiomStep& step = chain[i];
    const auto fail = ChainCheck{false, i};
    if (std::any_of(step.premises.begin(), step.premises.end(), [i](std::size_t p) { return p >= i; }))
      return fail;
    auto premise = [&](std::size_t k) { return chain[step.premises[k]].conclusion; };
    switch (step.rule) {
      case Rule::kGiven:
        if (!step.premises.empty() || !given.count(step.conclusion)) return fail;
        break;
      case Rule::kSymmetry:
        if (step.premises.size() != 1 || premise(0) != step.conclusion) return fail;
        break;
      case Rule::kDecomposition:
      case Rule::kWeakUnion: {
        if (step.premises.size() != 1) return fail;
        const auto cons = axiom_consequences(premise(0));
        if (std::find(cons.begin(), cons.end(), Consequence{step.rule, step.conclusion}) == cons.end())
          return fail;
        break;
      }
      case Rule::kContraction: {
        if (step.premises.size() != 2) return fail;
        const auto cons = axiom_consequences(premise(0), premise(1));
        if (std::find(cons.begin(), cons.end(), Consequence{step.rule, step.conclusion}) == cons.end())
          return fail;
        break;
      }
    }
  }
  return {};
}

}  // namespace ciproof
