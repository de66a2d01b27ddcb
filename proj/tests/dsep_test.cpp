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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ciproof/dsep.hpp"
#include "ciproof/join_tree.hpp"
#include "oracles.hpp"

namespace ciproof {
namespace {

struct Arc {
  std::string from;
  std::string to;
};

DiGraph digraph(const Universe& u, const std::vector<Arc>& arcs, std::initializer_list<std::string_view> det = {}) {
  DiGraph d(u);
  const ElementSet dset = u.set(det);
  for (std::size_t v = 0; v < u.size(); ++v) d.add_node(v, dset.contains(v));
  for (const auto& a : arcs) d.add_arc(u.index(a.from), u.index(a.to));
  return d;
}

NodeId node(const Universe& u, std::string_view name) { return NodeId{static_cast<std::uint32_t>(u.index(name))}; }

// Directed fixtures; the last two have deterministic elements.
const Universe u7{"V", "W", "X", "Y", "Z"};

DiGraph pruned_dag() { return digraph(u7, {{"W", "Z"}, {"Z", "X"}, {"Z", "Y"}, {"X", "V"}, {"Y", "V"}}); }
DiGraph functional_dag() {
  return digraph(u7, {{"Z", "W"}, {"W", "Y"}, {"V", "Y"}, {"W", "X"}, {"Y", "X"}}, {"W", "Y"});
}
DiGraph observed_dag() { return digraph(u7, {{"X", "Z"}, {"Z", "Y"}, {"Z", "W"}}, {"Z"}); }

TEST(AncestralPrune, DropsLeafDescendant) {
  const DiGraph d = pruned_dag();
  const DiGraph p = ancestral_prune(d, u7.set({"X", "Y", "Z"}));
  EXPECT_FALSE(p.nodes().contains(u7.index("V")));
  EXPECT_TRUE(p.nodes().contains(u7.index("W")));
  EXPECT_TRUE(d_separated(d, u7.set({"X"}), u7.set({"Z"}), u7.set({"Y"})));
  // Without pruning, V's parents would be married.
  EXPECT_FALSE(separates(moralize(d), u7.set({"X"}), u7.set({"Z"}), u7.set({"Y"})));
}

TEST(AncestralPrune, IdentityAndEmpty) {
  const DiGraph d = pruned_dag();
  EXPECT_EQ(ancestral_prune(d, u7.all()), d);
  EXPECT_TRUE(ancestral_prune(d, {}).nodes().empty());
  DiGraph partial(u7);
  partial.add_node(0);
  EXPECT_THROW(ancestral_prune(partial, u7.set({"X"})), Error);
}

TEST(DetPropagate, CascadingReroute) {
  const DiGraph h = det_propagate(functional_dag(), u7.set({"Z"}));
  const auto i = [](std::string_view n) { return u7.index(n); };
  EXPECT_TRUE(h.has_arc(i("Z"), i("W")));
  EXPECT_TRUE(h.has_arc(i("Z"), i("Y")));
  EXPECT_TRUE(h.has_arc(i("V"), i("Y")));
  EXPECT_TRUE(h.has_arc(i("Z"), i("X")));
  EXPECT_TRUE(h.has_arc(i("V"), i("X")));
  EXPECT_EQ(h.arcs().size(), 5u);
}

TEST(DetPropagate, ObservedElementUntouched) {
  const DiGraph d = observed_dag();
  EXPECT_EQ(det_propagate(d, u7.set({"Z"})), d);
  const DiGraph moved = det_propagate(d, {});
  EXPECT_TRUE(moved.has_arc(u7.index("X"), u7.index("Y")));
  EXPECT_TRUE(moved.children(u7.index("Z")).empty());
}

TEST(DetPropagate, ConstantLosesItsChildren) {
  const Universe u{"a", "b", "c"};
  const DiGraph d = digraph(u, {{"a", "b"}, {"a", "c"}, {"b", "c"}}, {"a"});
  const DiGraph p = det_propagate(d, {});
  EXPECT_TRUE(p.children(u.index("a")).empty());
  EXPECT_TRUE(p.has_arc(u.index("b"), u.index("c")));
  EXPECT_EQ(p.arcs().size(), 1u);
}

TEST(DetPropagate, IdentityWithoutDeterminismAndStaysAcyclic) {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 100; ++round) {
    const Universe u = oracle::letters(2 + round % 5);
    const DiGraph plain = oracle::random_dag(rng, u, 0.5, 0.0);
    EXPECT_EQ(det_propagate(plain, {}), plain);
    const DiGraph mixed = oracle::random_dag(rng, u, 0.5, 0.4);
    DiGraph p(u);
    ASSERT_NO_THROW(p = det_propagate(mixed, {}));
    EXPECT_EQ(p.topological_order().size(), u.size());
  }
}

TEST(Moralize, MarriesCoParents) {
  const Universe u{"B", "D", "E", "L", "S", "T"};
  const DiGraph d = digraph(u, {{"S", "L"}, {"S", "B"}, {"T", "E"}, {"L", "E"}, {"E", "D"}, {"B", "D"}});
  const UGraph m = moralize(d);
  EXPECT_TRUE(m.adjacent(node(u, "T"), node(u, "L")));
  EXPECT_TRUE(m.adjacent(node(u, "E"), node(u, "B")));
  EXPECT_EQ(m.edges().size(), 8u);
}

TEST(Moralize, SmallCases) {
  const Universe u{"a", "b", "c"};
  EXPECT_TRUE(moralize(digraph(u, {})).edges().empty());
  EXPECT_EQ(moralize(digraph(u, {{"a", "c"}, {"b", "c"}})).edges().size(), 3u);
}

TEST(Moralize, ContainsSkeleton) {
  std::mt19937_64 rng(6);
  for (int round = 0; round < 50; ++round) {
    const Universe u = oracle::letters(2 + round % 5);
    const DiGraph d = oracle::random_dag(rng, u, 0.5, 0.2);
    const UGraph m = moralize(d);
    for (const auto& [a, b] : d.arcs())
      EXPECT_TRUE(m.adjacent(NodeId{static_cast<std::uint32_t>(a)}, NodeId{static_cast<std::uint32_t>(b)}));
  }
}

TEST(DSeparated, Collider) {
  const DiGraph d = digraph(u7, {{"X", "Z"}, {"Y", "Z"}});
  EXPECT_FALSE(d_separated(d, u7.set({"X"}), u7.set({"Z"}), u7.set({"Y"})));
  EXPECT_TRUE(d_separated(d, u7.set({"X"}), {}, u7.set({"Y"})));
}

TEST(DSeparated, DeterministicChain) {
  const DiGraph d = functional_dag();
  EXPECT_TRUE(d_separated(d, u7.set({"W"}), u7.set({"Z"}), u7.set({"X", "Y", "V"})));
  EXPECT_FALSE(d_separated(d, u7.set({"X"}), u7.set({"Z"}), u7.set({"Y"})));
}

TEST(DSeparated, ObservedDeterministicElementIsExempt) {
  const DiGraph d = observed_dag();
  const ElementSet x = u7.set({"X"}), z = u7.set({"Z"}), yw = u7.set({"Y", "W"});
  EXPECT_TRUE(d_separated(d, x, z, yw));
  EXPECT_FALSE(d_separated(d, x, z, yw, DsepOptions{true}));
}

TEST(DSeparated, Errors) {
  const DiGraph d = pruned_dag();
  EXPECT_THROW(d_separated(d, u7.set({"X"}), {}, u7.set({"X"})), Error);
  DiGraph partial(u7);
  partial.add_node(u7.index("X"));
  try {
    d_separated(partial, u7.set({"X"}), {}, u7.set({"Y"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownElement);
  }
  try {
    DiGraph cyc = digraph(u7, {{"X", "Y"}});
    cyc.add_arc(u7.index("Y"), u7.index("X"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCyclicGraph);
  }
}

TEST(DSeparated, AgreesWithActivePathsWithoutDeterminism) {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 120; ++round) {
    const std::size_t n = 3 + round % 3;
    const Universe u = oracle::letters(n);
    const DiGraph d = oracle::random_dag(rng, u, 0.45, 0.0);
    for (const auto& s : enumerate_canonical(u))
      ASSERT_EQ(d_separated(d, s.x(), s.z(), s.y()), oracle::path_d_separated(d, s.x(), s.z(), s.y()))
          << "round " << round << " " << format(u, s);
  }
}

// Join trees over the six-element network.
const Universe u5{"B", "D", "E", "L", "S", "T"};

JoinTree asia_tree(bool broken) {
  JoinTree t;
  t.clusters[NodeId{0}] = u5.set({"S", "L", "B"});
  t.clusters[NodeId{1}] = u5.set({"L", "B", "E"});
  t.clusters[NodeId{2}] = u5.set({"T", "L", "E"});
  t.clusters[NodeId{3}] = u5.set({"E", "B", "D"});
  if (broken) {
    t.link(NodeId{0}, NodeId{2});
    t.link(NodeId{2}, NodeId{1});
  } else {
    t.link(NodeId{0}, NodeId{1});
    t.link(NodeId{1}, NodeId{2});
  }
  t.link(NodeId{1}, NodeId{3});
  return t;
}

TEST(ValidateJoinTree, GoodTree) { EXPECT_TRUE(validate_join_tree(asia_tree(false)).empty()); }

TEST(ValidateJoinTree, BrokenRunningIntersection) {
  const auto v = validate_join_tree(asia_tree(true));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].issue, JoinTreeIssue::kRunningIntersection);
  EXPECT_EQ(v[0].element, u5.index("B"));
}

TEST(ValidateJoinTree, StructuralProblems) {
  JoinTree t = asia_tree(false);
  t.sepsets.begin()->second = {};
  ASSERT_EQ(validate_join_tree(t).size(), 1u);
  EXPECT_EQ(validate_join_tree(t)[0].issue, JoinTreeIssue::kSepsetMismatch);

  JoinTree cyc = asia_tree(false);
  cyc.link(NodeId{0}, NodeId{3});
  EXPECT_EQ(validate_join_tree(cyc)[0].issue, JoinTreeIssue::kNotATree);

  JoinTree split = asia_tree(false);
  split.clusters[NodeId{7}] = u5.set({"D"});
  EXPECT_EQ(validate_join_tree(split)[0].issue, JoinTreeIssue::kNotATree);

  JoinTree stray = asia_tree(false);
  stray.edges.insert({NodeId{1}, NodeId{9}});
  EXPECT_EQ(validate_join_tree(stray)[0].issue, JoinTreeIssue::kUnknownCluster);

  JoinTree single;
  single.clusters[NodeId{0}] = u5.set({"B"});
  EXPECT_TRUE(validate_join_tree(single).empty());
}

TEST(ValidateJoinTree, ElementSkippingACluster) {
  const Universe u{"a", "e"};
  JoinTree t;
  t.clusters[NodeId{0}] = u.set({"e"});
  t.clusters[NodeId{1}] = u.set({"a"});
  t.clusters[NodeId{2}] = u.set({"e"});
  t.link(NodeId{0}, NodeId{1});
  t.link(NodeId{1}, NodeId{2});
  const auto v = validate_join_tree(t);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].element, u.index("e"));
}

std::vector<std::size_t> order_of(const Universe& u, std::initializer_list<std::string_view> names) {
  std::vector<std::size_t> out;
  for (auto n : names) out.push_back(u.index(n));
  return out;
}

TEST(BuildJoinTree, FourCycleNeedsOneChord) {
  const Universe u{"a", "b", "c", "d"};
  const UGraph g = oracle::graph_of(u, {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}});
  const JoinTreeBuild b = build_join_tree(g, order_of(u, {"a", "b", "c", "d"}));
  ASSERT_EQ(b.fill_ins.size(), 1u);
  EXPECT_EQ(b.fill_ins[0], (std::pair<std::size_t, std::size_t>{u.index("b"), u.index("d")}));
  ASSERT_EQ(b.tree.clusters.size(), 2u);
  for (const auto& [id, els] : b.tree.clusters) EXPECT_EQ(els.size(), 3u);
  EXPECT_TRUE(validate_join_tree(b.tree).empty());
}

TEST(BuildJoinTree, TreeEliminatedFromTheLeaves) {
  const Universe u{"a", "b", "c", "d", "e"};
  const UGraph g = oracle::graph_of(u, {{"a", "b"}, {"b", "c"}, {"b", "d"}, {"d", "e"}});
  const JoinTreeBuild b = build_join_tree(g, order_of(u, {"a", "c", "e", "b", "d"}));
  EXPECT_TRUE(b.fill_ins.empty());
  EXPECT_EQ(b.tree.clusters.size(), 4u);
  for (const auto& [id, els] : b.tree.clusters) EXPECT_EQ(els.size(), 2u);
  // Eliminating the hub first does fill in.
  EXPECT_FALSE(build_join_tree(g, order_of(u, {"b", "a", "c", "d", "e"})).fill_ins.empty());
}

TEST(BuildJoinTree, MoralGraphSomeOrderAddsOneChord) {
  const DiGraph d = digraph(u5, {{"S", "L"}, {"S", "B"}, {"T", "E"}, {"L", "E"}, {"E", "D"}, {"B", "D"}});
  const UGraph m = moralize(d);
  std::vector<std::size_t> order(u5.size());
  std::iota(order.begin(), order.end(), 0);
  bool single_lb = false;
  do {
    const JoinTreeBuild b = build_join_tree(m, order);
    ASSERT_TRUE(validate_join_tree(b.tree).empty());
    const std::pair<std::size_t, std::size_t> lb{u5.index("B"), u5.index("L")};
    if (b.fill_ins.size() == 1 && b.fill_ins[0] == lb) single_lb = true;
  } while (std::next_permutation(order.begin(), order.end()));
  EXPECT_TRUE(single_lb);
}

TEST(BuildJoinTree, ValidForEveryOrderOnSmallGraphs) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 1 + round % 6;
    const UGraph g = oracle::random_singleton_graph(rng, n, 0.45);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    do {
      const JoinTreeBuild b = build_join_tree(g, order);
      ASSERT_TRUE(validate_join_tree(b.tree).empty());
      // Every original edge lives inside some cluster.
      for (const auto& [a, c] : g.edges()) {
        const ElementSet pair = g.elements(a) | g.elements(c);
        ASSERT_TRUE(std::any_of(b.tree.clusters.begin(), b.tree.clusters.end(),
                                [&](const auto& kv) { return kv.second.contains(pair); }));
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST(BuildJoinTree, Errors) {
  const Universe u{"a", "b"};
  const UGraph g = oracle::graph_of(u, {{"a", "b"}});
  try {
    build_join_tree(g, {0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidOrder);
  }
  EXPECT_THROW(build_join_tree(g, {0, 0}), Error);
  UGraph multi;
  multi.add_node(u.all());
  EXPECT_THROW(build_join_tree(multi, {0, 1}), Error);
}

}  // namespace
}  // namespace ciproof
