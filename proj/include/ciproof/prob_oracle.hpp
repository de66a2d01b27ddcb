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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ciproof/dsep.hpp"
#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"
#include "ciproof/statement.hpp"

namespace ciproof {

using Rational = boost::multiprecision::cpp_rational;

/// Tolerance for conditional-probability comparisons in floating point.
inline constexpr double kConditionalTolerance = 1e-9;
/// Tolerance on the total mass of a floating-point joint.
inline constexpr double kMassTolerance = 1e-12;

namespace detail {

inline bool same_probability(const Rational& a, const Rational& b) { return a == b; }
inline bool same_probability(double a, double b) { return std::abs(a - b) <= kConditionalTolerance; }

inline bool unit_mass(const Rational& total) { return total == 1; }
inline bool unit_mass(double total) { return std::abs(total - 1.0) <= kMassTolerance; }

}  // namespace detail

/// Dense joint distribution over every element of a universe. Configurations
/// are indexed in mixed radix with element 0 varying fastest.
template <typename Scalar>
class DiscreteJoint {
 public:
  DiscreteJoint(Universe u, std::vector<std::size_t> cardinalities, std::vector<Scalar> probabilities)
      : universe_(std::move(u)), cards_(std::move(cardinalities)), probs_(std::move(probabilities)) {
    if (cards_.size() != universe_.size())
      throw Error(ErrorCode::kInvalidArgument, "one cardinality per universe element is required");
    std::size_t states = 1;
    for (auto c : cards_) {
      if (c == 0) throw Error(ErrorCode::kInvalidArgument, "cardinalities must be positive");
      states *= c;
    }
    if (probs_.size() != states) throw Error(ErrorCode::kInvalidArgument, "table size does not match cardinalities");
    Scalar total = 0;
    for (const auto& p : probs_) {
      if (p < 0) throw Error(ErrorCode::kInvalidArgument, "negative probability");
      total += p;
    }
    if (!detail::unit_mass(total)) throw Error(ErrorCode::kInvalidArgument, "probabilities do not sum to one");
  }

  const Universe& universe() const { return universe_; }
  const std::vector<std::size_t>& cardinalities() const { return cards_; }
  const std::vector<Scalar>& probabilities() const { return probs_; }
  std::size_t states() const { return probs_.size(); }

  /// Value of each variable in configuration `index`.
  std::vector<std::size_t> decode(std::size_t index) const {
    std::vector<std::size_t> values(cards_.size());
    for (std::size_t v = 0; v < cards_.size(); ++v) {
      values[v] = index % cards_[v];
      index /= cards_[v];
    }
    return values;
  }

  /// Marginal over `vars`, indexed in mixed radix over those variables
  /// (lowest index fastest).
  std::vector<Scalar> marginal(ElementSet vars) const {
    std::vector<Scalar> out(sub_states(vars), Scalar(0));
    for (std::size_t i = 0; i < probs_.size(); ++i) out[project(decode(i), vars)] += probs_[i];
    return out;
  }

  std::size_t project(const std::vector<std::size_t>& values, ElementSet vars) const {
    std::size_t index = 0;
    std::size_t stride = 1;
    for (auto v : vars) {
      index += values[v] * stride;
      stride *= cards_[v];
    }
    return index;
  }

  std::size_t sub_states(ElementSet vars) const {
    std::size_t n = 1;
    for (auto v : vars) n *= cards_[v];
    return n;
  }

 private:
  Universe universe_;
  std::vector<std::size_t> cards_;
  std::vector<Scalar> probs_;
};

/// P(x | z, y) = P(x | z) for every configuration with P(z) > 0 and
/// P(z, y) > 0. Conditioning elements are removed from x and y first.
template <typename Scalar>
bool ci_holds(const DiscreteJoint<Scalar>& p, ElementSet x, ElementSet z, ElementSet y) {
  if (!p.universe().all().contains(x | y | z))
    throw Error(ErrorCode::kUnknownVariable, "statement mentions variables outside the joint");
  x -= z;
  y -= z;
  if (x.intersects(y)) throw Error(ErrorCode::kInvalidOverlap, "outer sides share variables not in the conditioning set");
  if (x.empty() || y.empty()) return true;

  const ElementSet all = x | y | z;
  const auto pxyz = p.marginal(all);
  const auto pxz = p.marginal(x | z);
  const auto pyz = p.marginal(y | z);
  const auto pz = p.marginal(z);

  std::vector<std::size_t> values(p.universe().size(), 0);
  const auto vars = all.indices();
  for (std::size_t i = 0; i < pxyz.size(); ++i) {
    std::size_t rest = i;
    for (auto v : vars) {
      values[v] = rest % p.cardinalities()[v];
      rest /= p.cardinalities()[v];
    }
    const Scalar& margin_z = pz[p.project(values, z)];
    const Scalar& margin_yz = pyz[p.project(values, y | z)];
    if (!(margin_z > 0) || !(margin_yz > 0)) continue;
    const Scalar given_zy = pxyz[i] / margin_yz;
    const Scalar given_z = pxz[p.project(values, x | z)] / margin_z;
    if (!detail::same_probability(given_zy, given_z)) return false;
  }
  return true;
}

/// Every canonical statement that holds in `p`.
template <typename Scalar>
std::vector<CanonicalStatement> all_ci(const DiscreteJoint<Scalar>& p, std::size_t guard = 6) {
  std::vector<CanonicalStatement> out;
  for (const auto& s : enumerate_canonical(p.universe(), guard))
    if (ci_holds(p, s.x(), s.z(), s.y())) out.push_back(s);
  return out;
}

/// Random binary joint factorizing along `d`. Each stochastic conditional
/// P(v = 1 | parents) is k / denominator with 0 < k < denominator; each
/// deterministic element is a random 0/1 function of its parents. Values
/// come straight from mt19937_64 so tables are reproducible everywhere.
template <typename Scalar>
DiscreteJoint<Scalar> sample_dag_joint(const DiGraph& d, std::uint64_t seed, std::uint64_t denominator = 16) {
  const std::size_t n = d.universe().size();
  if (d.nodes() != d.universe().all())
    throw Error(ErrorCode::kInvalidArgument, "every universe element must be a node of the graph");
  if (n > 20) throw Error(ErrorCode::kUniverseTooLarge, "too many variables for a dense table");
  if (denominator < 2) throw Error(ErrorCode::kInvalidArgument, "denominator must be at least 2");

  std::mt19937_64 rng(seed);
  // numerator[v][parent configuration] of P(v = 1 | parents).
  std::vector<std::vector<std::uint64_t>> numerator(n);
  for (auto v : d.topological_order()) {
    const std::size_t rows = std::size_t{1} << d.parents(v).size();
    numerator[v].resize(rows);
    for (auto& k : numerator[v])
      k = d.deterministic().contains(v) ? (rng() & 1U) * denominator : 1 + rng() % (denominator - 1);
  }

  std::vector<Scalar> probs(std::size_t{1} << n);
  for (std::size_t config = 0; config < probs.size(); ++config) {
    Scalar prob = 1;
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t row = 0;
      std::size_t bit = 0;
      for (auto parent : d.parents(v)) row |= ((config >> parent) & 1U) << bit++;
      const std::uint64_t k = numerator[v][row];
      const std::uint64_t mass = ((config >> v) & 1U) ? k : denominator - k;
      prob *= Scalar(mass);
      prob /= Scalar(denominator);
    }
    probs[config] = prob;
  }
  if constexpr (std::is_floating_point_v<Scalar>) {
    // Products of k/den are not exact in binary; renormalize the rounding.
    Scalar total = 0;
    for (const auto& q : probs) total += q;
    for (auto& q : probs) q /= total;
  }
  return DiscreteJoint<Scalar>(d.universe(), std::vector<std::size_t>(n, 2), std::move(probs));
}

}  // namespace ciproof
