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
#include <random>
#include <vector>

#include "ciproof/closure.hpp"
#include "ciproof/dsep.hpp"
#include "ciproof/prob_oracle.hpp"
#include "oracles.hpp"

namespace ciproof {
namespace {

using RJoint = DiscreteJoint<Rational>;

Rational q(int num, int den) { return Rational(num) / den; }

// Table over binary variables from a function of the configuration bits.
template <typename F>
RJoint binary_joint(const Universe& u, F&& f) {
  std::vector<Rational> probs(std::size_t{1} << u.size());
  for (std::size_t c = 0; c < probs.size(); ++c) probs[c] = f(c);
  return RJoint(u, std::vector<std::size_t>(u.size(), 2), probs);
}

bool bit(std::size_t config, std::size_t v) { return ((config >> v) & 1U) != 0; }

TEST(CiHolds, IndependentBits) {
  const Universe u{"a", "b"};
  const RJoint p = binary_joint(u, [](std::size_t) { return q(1, 4); });
  EXPECT_TRUE(ci_holds(p, u.set({"a"}), {}, u.set({"b"})));
}

TEST(CiHolds, Xor) {
  const Universe u{"a", "b", "c"};
  const RJoint p = binary_joint(u, [](std::size_t c) { return bit(c, 2) == (bit(c, 0) != bit(c, 1)) ? q(1, 4) : q(0, 1); });
  EXPECT_TRUE(ci_holds(p, u.set({"a"}), {}, u.set({"b"})));
  EXPECT_FALSE(ci_holds(p, u.set({"a"}), u.set({"c"}), u.set({"b"})));
  const auto all = all_ci(p);
  EXPECT_EQ(all.size(), 3u);  // the three pairwise marginal independencies
  for (const auto& s : all) EXPECT_TRUE(s.z().empty());
}

TEST(CiHolds, CopiedBitScreensEverything) {
  const Universe u{"a", "b", "c"};
  // b = a, c independent fair bit.
  const RJoint p = binary_joint(u, [](std::size_t c) { return bit(c, 0) == bit(c, 1) ? q(1, 4) : q(0, 1); });
  EXPECT_TRUE(ci_holds(p, u.set({"a"}), u.set({"b"}), u.set({"c"})));
  EXPECT_FALSE(ci_holds(p, u.set({"a"}), {}, u.set({"b"})));
  EXPECT_TRUE(ci_holds(p, u.set({"a"}), u.set({"b"}), u.set({"b", "c"})));
}

TEST(CiHolds, IntersectionFailsWithZeros) {
  const Universe u{"w", "x", "y"};
  // Three copies of one fair bit.
  const RJoint p = binary_joint(u, [](std::size_t c) { return c == 0 || c == 7 ? q(1, 2) : q(0, 1); });
  const ElementSet x = u.set({"x"}), y = u.set({"y"}), w = u.set({"w"});
  EXPECT_TRUE(ci_holds(p, x, y, w));
  EXPECT_TRUE(ci_holds(p, x, w, y));
  EXPECT_FALSE(ci_holds(p, x, {}, y | w));
}

TEST(CiHolds, Errors) {
  const Universe u{"a", "b"};
  const RJoint p = binary_joint(u, [](std::size_t) { return q(1, 4); });
  try {
    ci_holds(p, u.set({"a"}), {}, ElementSet::single(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownVariable);
  }
  EXPECT_THROW(ci_holds(p, u.set({"a"}), {}, u.set({"a"})), Error);
  EXPECT_THROW(RJoint(u, {2, 2}, {q(1, 2), q(1, 2), q(1, 2), q(0, 1)}), Error);
  EXPECT_THROW(RJoint(u, {2, 2}, {q(1, 2)}), Error);
  EXPECT_THROW(RJoint(u, {2, 2}, {q(3, 2), q(-1, 2), q(0, 1), q(0, 1)}), Error);
  EXPECT_THROW(all_ci(binary_joint(oracle::letters(7), [](std::size_t) { return q(1, 128); })), Error);
}

TEST(CiHolds, NonBinaryCardinalities) {
  const Universe u{"a", "b"};
  // a in {0,1,2} uniform, b = (a == 2).
  std::vector<Rational> probs(6, q(0, 1));
  for (std::size_t a = 0; a < 3; ++a) probs[a + 3 * (a == 2 ? 1 : 0)] = q(1, 3);
  const RJoint p(u, {3, 2}, probs);
  EXPECT_FALSE(ci_holds(p, u.set({"a"}), {}, u.set({"b"})));
  EXPECT_EQ(p.marginal(u.set({"b"})), (std::vector<Rational>{q(2, 3), q(1, 3)}));
}

TEST(AllCi, FactorizedAndCopyChain) {
  const Universe u{"a", "b", "c"};
  const RJoint flat = binary_joint(u, [](std::size_t) { return q(1, 8); });
  EXPECT_EQ(all_ci(flat).size(), enumerate_canonical(u).size());

  const RJoint copies = binary_joint(u, [](std::size_t c) { return c == 0 || c == 7 ? q(1, 2) : q(0, 1); });
  const auto all = all_ci(copies);
  EXPECT_NE(std::find(all.begin(), all.end(), canonical(u.set({"a"}), u.set({"b"}), u.set({"c"}))), all.end());
}

TEST(AllCi, OverlapInvariance) {
  std::mt19937_64 rng(3);
  const Universe u = oracle::letters(4);
  for (int round = 0; round < 20; ++round) {
    const RJoint p = sample_dag_joint<Rational>(oracle::random_dag(rng, u, 0.4, 0.3), rng());
    for (const auto& s : enumerate_canonical(u)) {
      const bool base = ci_holds(p, s.x(), s.z(), s.y());
      ASSERT_EQ(ci_holds(p, s.x() | s.z(), s.z(), s.y()), base);
      ASSERT_EQ(ci_holds(p, s.x() | s.z(), s.z(), s.y() | s.z()), base);
      ASSERT_EQ(ci_holds(p, s.y(), s.z(), s.x()), base);
    }
  }
}

TEST(SampleDagJoint, ArclessIsProduct) {
  const Universe u{"a", "b"};
  DiGraph d(u);
  d.add_node(0);
  d.add_node(1);
  const RJoint p = sample_dag_joint<Rational>(d, 5);
  const auto pa = p.marginal(u.set({"a"}));
  const auto pb = p.marginal(u.set({"b"}));
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(p.probabilities()[c], pa[c & 1] * pb[c >> 1]);
}

TEST(SampleDagJoint, Reproducible) {
  std::mt19937_64 rng(1);
  const DiGraph d = oracle::random_dag(rng, oracle::letters(4), 0.5, 0.3);
  EXPECT_EQ(sample_dag_joint<Rational>(d, 77).probabilities(), sample_dag_joint<Rational>(d, 77).probabilities());
  EXPECT_EQ(sample_dag_joint<double>(d, 77).probabilities(), sample_dag_joint<double>(d, 77).probabilities());
  EXPECT_NE(sample_dag_joint<Rational>(d, 77).probabilities(), sample_dag_joint<Rational>(d, 78).probabilities());
}

TEST(SampleDagJoint, DeterministicRowsAreZeroOne) {
  const Universe u{"a", "b"};
  DiGraph d(u);
  d.add_node(0);
  d.add_node(1, true);
  d.add_arc(0, 1);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RJoint p = sample_dag_joint<Rational>(d, seed);
    // b is a function of a: for each a exactly one b value has mass.
    for (std::size_t a = 0; a < 2; ++a) EXPECT_TRUE(p.probabilities()[a] == 0 || p.probabilities()[a + 2] == 0);
  }
}

TEST(SampleDagJoint, ColliderDependsGivenChild) {
  const Universe u{"a", "b", "c"};
  DiGraph d(u);
  for (std::size_t v = 0; v < 3; ++v) d.add_node(v);
  d.add_arc(0, 2);
  d.add_arc(1, 2);
  int dependent = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RJoint p = sample_dag_joint<Rational>(d, seed);
    EXPECT_TRUE(ci_holds(p, u.set({"a"}), {}, u.set({"b"})));
    if (!ci_holds(p, u.set({"a"}), u.set({"c"}), u.set({"b"}))) ++dependent;
  }
  EXPECT_GE(dependent, 18);
}

TEST(Axioms, SoundOnSampledJoints) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 60; ++round) {
    const Universe u = oracle::letters(3 + round % 2);
    const RJoint p = sample_dag_joint<Rational>(oracle::random_dag(rng, u, 0.4, 0.3), rng());
    const auto holds = all_ci(p);
    const Closure c = closure(holds, u);
    ASSERT_EQ(c.statements(), std::set<CanonicalStatement>(holds.begin(), holds.end())) << "round " << round;
  }
}

TEST(Axioms, SoundOnSparseTables) {
  std::mt19937_64 rng(2025);
  std::uniform_int_distribution<int> weight(0, 2);
  for (int round = 0; round < 60; ++round) {
    const Universe u = oracle::letters(3 + round % 2);
    std::vector<int> w(std::size_t{1} << u.size());
    int total = 0;
    while (total == 0) {
      total = 0;
      for (auto& x : w) total += (x = weight(rng) == 0 ? 1 : 0);
    }
    const RJoint p = binary_joint(u, [&](std::size_t c) { return Rational(w[c]) / total; });
    const auto holds = all_ci(p);
    const Closure c = closure(holds, u);
    ASSERT_EQ(c.statements(), std::set<CanonicalStatement>(holds.begin(), holds.end())) << "round " << round;
  }
}

TEST(DSeparation, SoundAgainstSampledJoints) {
  std::mt19937_64 rng(55);
  for (int round = 0; round < 60; ++round) {
    const Universe u = oracle::letters(3 + round % 3);
    const DiGraph d = oracle::random_dag(rng, u, 0.45, round % 2 == 0 ? 0.0 : 0.35);
    const std::uint64_t seed = rng();
    const RJoint exact = sample_dag_joint<Rational>(d, seed);
    const DiscreteJoint<double> approx = sample_dag_joint<double>(d, seed);
    for (const auto& s : enumerate_canonical(u)) {
      if (!d_separated(d, s.x(), s.z(), s.y())) continue;
      ASSERT_TRUE(ci_holds(exact, s.x(), s.z(), s.y())) << "round " << round << " " << format(u, s);
      ASSERT_TRUE(ci_holds(approx, s.x(), s.z(), s.y())) << "round " << round << " " << format(u, s);
    }
  }
}

}  // namespace
}  // namespace ciproof
