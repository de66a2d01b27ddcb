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
#include <functional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"

namespace ciproof {

/// Default bound on universe size for routines that enumerate all 4^n
/// element assignments.
inline constexpr std::size_t kDefaultEnumerationGuard = 12;

/// A raw independence statement I(x, z, y): "x is independent of y given z".
/// The sets may overlap; see canonicalize().
struct Statement {
  ElementSet x;
  ElementSet z;
  ElementSet y;

  friend bool operator==(const Statement&, const Statement&) = default;
};

/// Marker for statements that hold by convention (an empty side).
struct TriviallyTrue {
  friend bool operator==(TriviallyTrue, TriviallyTrue) { return true; }
};

/// A normalized statement: pairwise disjoint sides, both outer sides
/// non-empty, and `x() <= y()` in set order.
class CanonicalStatement {
 public:
  ElementSet x() const { return x_; }
  ElementSet z() const { return z_; }
  ElementSet y() const { return y_; }
  ElementSet elements() const { return x_ | z_ | y_; }
  Statement raw() const { return {x_, z_, y_}; }

  friend bool operator==(const CanonicalStatement&, const CanonicalStatement&) = default;
  friend std::strong_ordering operator<=>(const CanonicalStatement& a, const CanonicalStatement& b) {
    if (auto c = a.x_ <=> b.x_; c != 0) return c;
    if (auto c = a.z_ <=> b.z_; c != 0) return c;
    return a.y_ <=> b.y_;
  }

 private:
  friend std::variant<CanonicalStatement, TriviallyTrue> canonicalize(const Statement& s);
  CanonicalStatement(ElementSet x, ElementSet z, ElementSet y) : x_(x), z_(z), y_(y) {}

  ElementSet x_;
  ElementSet z_;
  ElementSet y_;
};

using CanonicalResult = std::variant<CanonicalStatement, TriviallyTrue>;

/// Strips the conditioning set out of both sides and orders the sides.
/// Throws InvalidOverlap when the sides share an element outside z.
inline CanonicalResult canonicalize(const Statement& s) {
  const ElementSet x = s.x - s.z;
  const ElementSet y = s.y - s.z;
  if (x.intersects(y))
    throw Error(ErrorCode::kInvalidOverlap, "outer sides share elements not in the conditioning set");
  if (x.empty() || y.empty()) return TriviallyTrue{};
  if (y < x) return CanonicalStatement(y, s.z, x);
  return CanonicalStatement(x, s.z, y);
}

inline bool is_trivial(const CanonicalResult& r) { return std::holds_alternative<TriviallyTrue>(r); }

/// canonicalize() for callers that know the statement is nontrivial.
inline CanonicalStatement canonical(ElementSet x, ElementSet z, ElementSet y) {
  auto r = canonicalize({x, z, y});
  if (is_trivial(r)) throw Error(ErrorCode::kInvalidArgument, "statement is trivially true");
  return std::get<CanonicalStatement>(r);
}

inline std::string format(const Universe& u, const Statement& s) {
  return u.format(s.x) + " | " + u.format(s.z) + " | " + u.format(s.y);
}
inline std::string format(const Universe& u, const CanonicalStatement& s) { return format(u, s.raw()); }

/// Every canonical statement over the first `n` indices, sorted and
/// deduplicated. Each element is assigned to x, z, y or nothing.
inline std::vector<CanonicalStatement> enumerate_canonical(std::size_t n,
                                                           std::size_t guard = kDefaultEnumerationGuard) {
  if (n > guard)
    throw Error(ErrorCode::kUniverseTooLarge,
                std::to_string(n) + " elements exceed the enumeration guard of " + std::to_string(guard));
  std::set<CanonicalStatement> out;
  std::vector<unsigned> slot(n, 0);
  while (true) {
    Statement s;
    for (std::size_t i = 0; i < n; ++i) {
      if (slot[i] == 1) s.x.insert(i);
      if (slot[i] == 2) s.z.insert(i);
      if (slot[i] == 3) s.y.insert(i);
    }
    if (auto r = canonicalize(s); !is_trivial(r)) out.insert(std::get<CanonicalStatement>(r));
    std::size_t i = 0;
    while (i < n && slot[i] == 3) slot[i++] = 0;
    if (i == n) break;
    ++slot[i];
  }
  return {out.begin(), out.end()};
}

inline std::vector<CanonicalStatement> enumerate_canonical(const Universe& u,
                                                           std::size_t guard = kDefaultEnumerationGuard) {
  return enumerate_canonical(u.size(), guard);
}

}  // namespace ciproof

template <>
struct std::hash<ciproof::CanonicalStatement> {
  std::size_t operator()(const ciproof::CanonicalStatement& s) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(s.x().bits());
    h ^= std::hash<std::uint64_t>{}(s.z().bits()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint64_t>{}(s.y().bits()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};
