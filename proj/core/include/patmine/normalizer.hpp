#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patmine/digest.hpp"

namespace patmine {

enum class TokenKind { Identifier, Keyword, Literal, Operator, Separator };

[[nodiscard]] std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;
  std::uint32_t line = 0;  // 1-based line where the token starts

  friend bool operator==(const Token&, const Token&) = default;
};

// Inclusive range of 1-based source lines.
struct LineSpan {
  std::uint32_t first = 0;
  std::uint32_t last = 0;

  friend bool operator==(const LineSpan&, const LineSpan&) = default;
};

struct NormalizedStatement {
  std::string normalized_text;
  Digest digest;
  LineSpan line_span;

  friend bool operator==(const NormalizedStatement&, const NormalizedStatement&) = default;
};

struct NormalizedFile {
  std::string path;
  std::vector<NormalizedStatement> statements;

  [[nodiscard]] std::vector<Digest> digests() const;

  friend bool operator==(const NormalizedFile&, const NormalizedFile&) = default;
};

using Diagnostics = std::vector<std::string>;

// Java lexer. Comments and whitespace are dropped; string, text block,
// char and numeric literals as well as true/false/null come out as single
// Literal tokens. Unterminated strings and comments are closed at end of
// input and reported through `diagnostics`.
[[nodiscard]] std::vector<Token> tokenize(std::string_view source,
                                          Diagnostics* diagnostics = nullptr);

// Splits after every `;`, `{` and `}`. The boundary token ends its group.
[[nodiscard]] std::vector<std::vector<Token>> segment_statements(std::span<const Token> tokens);

// Drops visibility modifiers, turns literals into `L`, primitive types
// into `T`, keeps identifiers directly followed by `(` (method names), and
// numbers every other identifier `V0`, `V1`, ... by first appearance
// within the statement. Tokens are joined with single spaces.
[[nodiscard]] std::string normalize_statement(std::span<const Token> group);

// Joins the raw token texts. Used when normalization is switched off.
[[nodiscard]] std::string raw_statement(std::span<const Token> group);

struct AbstractionOptions {
  bool normalize = true;
};

// tokenize -> segment -> normalize -> MD5 over the UTF-8 bytes of each
// normalized line.
[[nodiscard]] NormalizedFile abstract_file(std::string_view source, std::string path,
                                           const AbstractionOptions& options = {},
                                           Diagnostics* diagnostics = nullptr);

}  // namespace patmine
