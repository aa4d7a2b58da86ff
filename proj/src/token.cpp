#include "ezsql/token.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "ezsql/errors.hpp"

namespace ezsql {

namespace {

// Supported keywords plus reserved words we recognize only to reject them
// with a precise UnsupportedFeature diagnostic.
constexpr std::array<std::string_view, 44> kKeywords = {
    "SELECT", "DISTINCT", "FROM",  "AS",      "JOIN",      "ON",     "WHERE",
    "GROUP",  "BY",       "HAVING", "ORDER",  "LIMIT",     "UNION",  "INTERSECT",
    "EXCEPT", "AND",      "OR",    "NOT",     "IN",        "LIKE",   "BETWEEN",
    "COUNT",  "SUM",      "AVG",   "MIN",     "MAX",       "ASC",    "DESC",
    // reserved, outside the supported subset
    "WITH",   "EXISTS",   "CASE",  "CAST",    "NULL",      "IS",     "LEFT",
    "RIGHT",  "OUTER",    "INNER", "CROSS",   "OVER",      "INSERT", "UPDATE",
    "DELETE", "CREATE",
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) !=
        std::toupper(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

bool is_keyword_text(std::string_view word) {
  return std::any_of(kKeywords.begin(), kKeywords.end(),
                     [&](std::string_view k) { return iequals(k, word); });
}

std::vector<Token> tokenize(std::string_view sql) {
  if (sql.empty()) {
    throw Error(ErrorKind::SyntaxError, "empty input", 0);
  }

  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = sql.size();

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    tokens.push_back(Token{kind, std::string(sql.substr(begin, end - begin)), Span{begin, end}});
  };

  while (i < n) {
    char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t begin = i;
      while (i < n && is_ident_char(sql[i])) ++i;
      std::string_view word = sql.substr(begin, i - begin);
      push(is_keyword_text(word) ? TokenKind::Keyword : TokenKind::Identifier, begin, i);
      continue;
    }
    if (is_digit(c)) {
      std::size_t begin = i;
      while (i < n && is_digit(sql[i])) ++i;
      if (i < n && sql[i] == '.' && i + 1 < n && is_digit(sql[i + 1])) {
        ++i;
        while (i < n && is_digit(sql[i])) ++i;
      }
      push(TokenKind::Number, begin, i);
      continue;
    }
    if (c == '\'' || c == '"') {
      std::size_t begin = i;
      char quote = c;
      ++i;
      while (true) {
        if (i >= n) {
          throw Error(ErrorKind::UnterminatedString,
                      "unterminated string literal starting at offset " + std::to_string(begin),
                      begin);
        }
        if (sql[i] == quote) {
          if (i + 1 < n && sql[i + 1] == quote) {
            i += 2;  // doubled quote escape
            continue;
          }
          ++i;
          break;
        }
        ++i;
      }
      push(TokenKind::String, begin, i);
      continue;
    }
    // two-character operators first
    if (i + 1 < n) {
      std::string_view two = sql.substr(i, 2);
      if (two == "<=" || two == ">=" || two == "!=" || two == "<>") {
        push(TokenKind::Operator, i, i + 2);
        i += 2;
        continue;
      }
    }
    switch (c) {
      case '=':
      case '<':
      case '>':
      case '*':
      case '+':
      case '-':
      case '/':
      case '%':
        push(TokenKind::Operator, i, i + 1);
        ++i;
        continue;
      case '(':
      case ')':
      case ',':
      case '.':
      case ';':
        push(TokenKind::Punct, i, i + 1);
        ++i;
        continue;
      default:
        throw Error(ErrorKind::IllegalCharacter,
                    std::string("illegal character '") + c + "' at offset " + std::to_string(i),
                    i);
    }
  }

  if (tokens.empty()) {
    throw Error(ErrorKind::SyntaxError, "input contains no tokens", 0);
  }
  return tokens;
}

}  // namespace ezsql
