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
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ciproof/error.hpp"

namespace ciproof {

/// Upper bound on the number of elements in one universe.
inline constexpr std::size_t kMaxElements = 64;

/// A set of elements, stored as a bitmask over universe indices.
///
/// Ordering is lexicographic on the sorted index lists, so `{a} < {a,b} < {b}`.
/// Because universes index their elements in name order, this is also the
/// lexicographic order on element names.
class ElementSet {
 public:
  class iterator {
   public:
    using value_type = std::size_t;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::forward_iterator_tag;

    iterator() = default;
    explicit iterator(std::uint64_t rest) : rest_(rest) {}

    std::size_t operator*() const { return static_cast<std::size_t>(std::countr_zero(rest_)); }
    iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    bool operator==(const iterator&) const = default;

   private:
    std::uint64_t rest_ = 0;
  };

  constexpr ElementSet() = default;
  constexpr explicit ElementSet(std::uint64_t bits) : bits_(bits) {}
  ElementSet(std::initializer_list<std::size_t> indices) {
    for (auto i : indices) insert(i);
  }

  static ElementSet single(std::size_t index) {
    ElementSet s;
    s.insert(index);
    return s;
  }
  /// The first `n` indices.
  static ElementSet first(std::size_t n) {
    return ElementSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t index) const {
    return index < kMaxElements && ((bits_ >> index) & 1U) != 0;
  }
  constexpr bool contains(ElementSet other) const { return (other.bits_ & ~bits_) == 0; }
  constexpr bool intersects(ElementSet other) const { return (bits_ & other.bits_) != 0; }

  void insert(std::size_t index) {
    if (index >= kMaxElements) throw Error(ErrorCode::kInvalidArgument, "element index out of range");
    bits_ |= std::uint64_t{1} << index;
  }
  void erase(std::size_t index) {
    if (index < kMaxElements) bits_ &= ~(std::uint64_t{1} << index);
  }

  iterator begin() const { return iterator(bits_); }
  iterator end() const { return iterator(0); }
  std::vector<std::size_t> indices() const { return {begin(), end()}; }

  friend constexpr ElementSet operator|(ElementSet a, ElementSet b) { return ElementSet(a.bits_ | b.bits_); }
  friend constexpr ElementSet operator&(ElementSet a, ElementSet b) { return ElementSet(a.bits_ & b.bits_); }
  friend constexpr ElementSet operator-(ElementSet a, ElementSet b) { return ElementSet(a.bits_ & ~b.bits_); }
  ElementSet& operator|=(ElementSet o) { bits_ |= o.bits_; return *this; }
  ElementSet& operator&=(ElementSet o) { bits_ &= o.bits_; return *this; }
  ElementSet& operator-=(ElementSet o) { bits_ &= ~o.bits_; return *this; }

  friend constexpr bool operator==(ElementSet a, ElementSet b) { return a.bits_ == b.bits_; }
  friend std::strong_ordering operator<=>(ElementSet a, ElementSet b) {
    std::uint64_t x = a.bits_;
    std::uint64_t y = b.bits_;
    while (x != 0 && y != 0) {
      const int i = std::countr_zero(x);
      const int j = std::countr_zero(y);
      if (i != j) return i < j ? std::strong_ordering::less : std::strong_ordering::greater;
      x &= x - 1;
      y &= y - 1;
    }
    if (x == y) return std::strong_ordering::equal;
    return x == 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// Calls `fn` for every subset of `set`, in increasing bitmask order
/// (the empty set first, `set` itself last).
template <typename Fn>
void for_each_subset(ElementSet set, Fn&& fn) {
  const std::uint64_t full = set.bits();
  std::uint64_t sub = 0;
  while (true) {
    fn(ElementSet(sub));
    if (sub == full) break;
    sub = (sub - full) & full;
  }
}

inline bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '.' || c == '-';
  });
}

/// The ground set of named elements. Elements are indexed in lexicographic
/// name order. Copies share the name table.
class Universe {
 public:
  Universe() : names_(std::make_shared<std::vector<std::string>>()) {}

  explicit Universe(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    if (auto dup = std::adjacent_find(names.begin(), names.end()); dup != names.end())
      throw Error(ErrorCode::kDuplicateElement, "element '" + *dup + "' declared twice");
    if (names.size() > kMaxElements)
      throw Error(ErrorCode::kUniverseTooLarge,
                  "at most " + std::to_string(kMaxElements) + " elements are supported");
    for (const auto& n : names)
      if (!is_identifier(n)) throw Error(ErrorCode::kInvalidArgument, "invalid element name '" + n + "'");
    names_ = std::make_shared<std::vector<std::string>>(std::move(names));
  }
  Universe(std::initializer_list<std::string> names) : Universe(std::vector<std::string>(names)) {}

  std::size_t size() const { return names_->size(); }
  ElementSet all() const { return ElementSet::first(size()); }
  const std::vector<std::string>& names() const { return *names_; }
  const std::string& name(std::size_t index) const { return names_->at(index); }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = std::lower_bound(names_->begin(), names_->end(), name);
    if (it == names_->end() || *it != name) return std::nullopt;
    return static_cast<std::size_t>(it - names_->begin());
  }

  std::size_t index(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw Error(ErrorCode::kUnknownElement, "unknown element '" + std::string(name) + "'");
  }

  /// Builds a set from element names; throws UnknownElement.
  ElementSet set(std::initializer_list<std::string_view> names) const {
    ElementSet s;
    for (auto n : names) s.insert(index(n));
    return s;
  }
  ElementSet set(const std::vector<std::string>& names) const {
    ElementSet s;
    for (const auto& n : names) s.insert(index(n));
    return s;
  }

  /// `{a,b}` with names in index order; `{}` for the empty set.
  std::string format(ElementSet s) const {
    std::string out = "{";
    bool first = true;
    for (auto i : s) {
      if (!first) out += ',';
      out += name(i);
      first = false;
    }
    out += '}';
    return out;
  }

  friend bool operator==(const Universe& a, const Universe& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

}  // namespace ciproof

template <>
struct std::hash<ciproof::ElementSet> {
  std::size_t operator()(ciproof::ElementSet s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
