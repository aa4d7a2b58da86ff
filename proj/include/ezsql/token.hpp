#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ezsql {

enum class TokenKind {
  Keyword,
  Identifier,
  Number,
  String,
  Operator,
  Punct,
};

/// Half-open character range [begin, end) into the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string text;  // verbatim lexeme; string tokens keep their quotes
  Span span;
};

/// Splits SQL text into tokens. Keywords are recognized case-insensitively;
/// their verbatim spelling is preserved in `text`. Throws Error with kind
/// UnterminatedString or IllegalCharacter (both positioned) on bad input.
std::vector<Token> tokenize(std::string_view sql);

bool is_keyword_text(std::string_view word);

std::string to_upper(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

}  // namespace ezsql
