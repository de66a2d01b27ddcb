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
#include <string>
#include <string_view>
#include <vector>

#include "ciproof/element_set.hpp"
#include "ciproof/error.hpp"

namespace ciproof::text {

enum class TokenKind { kWord, kPunct, kNewline, kEnd };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::string where(const Token& t) { return std::to_string(t.line) + ":" + std::to_string(t.column); }

/// Words are identifier characters; punctuation is one of `{}(),;:|=`.
/// `#` starts a comment running to the end of the line.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  auto is_word = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.' ||
           c == '-';
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      out.push_back({TokenKind::kNewline, "\n", line, col});
      ++line;
      col = 1;
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
    } else if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (is_word(c)) {
      const std::size_t start = i;
      while (i < src.size() && is_word(src[i])) ++i;
      out.push_back({TokenKind::kWord, std::string(src.substr(start, i - start)), line, col});
      col += i - start;
    } else if (std::string_view("{}(),;:|=").find(c) != std::string_view::npos) {
      out.push_back({TokenKind::kPunct, std::string(1, c), line, col});
      ++i;
      ++col;
    } else {
      throw Error(ErrorCode::kSyntaxError,
                  std::to_string(line) + ":" + std::to_string(col) + ": unexpected character '" + c + "'");
    }
  }
  out.push_back({TokenKind::kEnd, "", line, col});
  return out;
}

/// Cursor over a token list with the small set of helpers both grammars use.
class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (t.kind != TokenKind::kEnd) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::kEnd; }

  [[noreturn]] void fail(const Token& t, const std::string& message, ErrorCode code = ErrorCode::kSyntaxError) const {
    throw Error(code, where(t) + ": " + message);
  }

  void skip_newlines() {
    while (peek().kind == TokenKind::kNewline) ++pos_;
  }

  bool accept(std::string_view punct_or_word) {
    if ((peek().kind == TokenKind::kPunct || peek().kind == TokenKind::kWord) && peek().text == punct_or_word) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view text) {
    if (!accept(text)) fail(peek(), "expected '" + std::string(text) + "'" + found());
  }

  const Token& word(const char* what) {
    if (peek().kind != TokenKind::kWord) fail(peek(), std::string("expected ") + what + found());
    return next();
  }

  std::size_t number(const char* what) {
    const Token& t = word(what);
    std::size_t value = 0;
    for (char c : t.text) {
      if (c < '0' || c > '9') fail(t, std::string("expected ") + what + ", found '" + t.text + "'");
      value = value * 10 + static_cast<std::size_t>(c - '0');
    }
    return value;
  }

  void end_of_line() {
    if (peek().kind == TokenKind::kNewline) {
      ++pos_;
      return;
    }
    if (peek().kind != TokenKind::kEnd) fail(peek(), "expected end of line" + found());
  }

  /// `{a,b}` or `{}`; every name must be in `u`.
  ElementSet element_set(const Universe& u) {
    expect("{");
    ElementSet s;
    if (accept("}")) return s;
    while (true) {
      const Token& t = word("element name");
      auto idx = u.find(t.text);
      if (!idx) fail(t, "unknown element '" + t.text + "'", ErrorCode::kUnknownElement);
      s.insert(*idx);
      if (accept("}")) return s;
      expect(",");
    }
  }

  std::string found() const {
    const Token& t = peek();
    if (t.kind == TokenKind::kEnd) return ", found end of input";
    if (t.kind == TokenKind::kNewline) return ", found end of line";
    return ", found '" + t.text + "'";
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace ciproof::text
