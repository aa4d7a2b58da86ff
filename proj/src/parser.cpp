#include "ezsql/parser.hpp"

#include <charconv>
#include <set>
#include <utility>

#include "ezsql/errors.hpp"

namespace ezsql {

namespace {

const std::set<std::string> kUnsupportedKeywords = {
    "WITH", "EXISTS", "CASE", "CAST", "IS",   "LEFT",   "RIGHT",  "OUTER",
    "INNER", "CROSS",  "OVER", "NULL", "INSERT", "UPDATE", "DELETE", "CREATE",
};

class Parser {
public:
  explicit Parser(std::string_view sql) : tokens_(tokenize(sql)) {}

  QueryAst parse() {
    QueryAst ast = parse_statement();
    if (at_punct(";")) advance();
    if (pos_ < tokens_.size()) {
      fail("unexpected trailing token '" + current().text + "'");
    }
    return ast;
  }

private:
  // --- token cursor -------------------------------------------------------

  const Token& current() const {
    if (pos_ >= tokens_.size()) {
      throw Error(ErrorKind::SyntaxError, "unexpected end of input",
                  tokens_.empty() ? 0 : tokens_.back().span.end);
    }
    return tokens_[pos_];
  }

  bool at_end() const { return pos_ >= tokens_.size(); }

  void advance() { ++pos_; }

  bool at_keyword(std::string_view kw) const {
    return pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Keyword &&
           iequals(tokens_[pos_].text, kw);
  }

  bool at_punct(std::string_view p) const {
    return pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Punct &&
           tokens_[pos_].text == p;
  }

  bool at_operator(std::string_view op) const {
    return pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Operator &&
           tokens_[pos_].text == op;
  }

  bool accept_keyword(std::string_view kw) {
    if (!at_keyword(kw)) return false;
    advance();
    return true;
  }

  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) {
      fail(std::string("expected keyword ") + std::string(kw));
    }
  }

  void expect_punct(std::string_view p) {
    if (!at_punct(p)) fail(std::string("expected '") + std::string(p) + "'");
    advance();
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::size_t offset = pos_ < tokens_.size() ? tokens_[pos_].span.begin
                         : tokens_.empty()     ? 0
                                               : tokens_.back().span.end;
    throw Error(ErrorKind::SyntaxError, message + " at offset " + std::to_string(offset), offset);
  }

  [[noreturn]] void unsupported(const std::string& what) const {
    std::size_t offset = pos_ < tokens_.size() ? tokens_[pos_].span.begin
                         : tokens_.empty()     ? 0
                                               : tokens_.back().span.end;
    throw Error(ErrorKind::UnsupportedFeature,
                what + " is outside the supported SQL subset (offset " + std::to_string(offset) +
                    ")",
                offset);
  }

  void reject_reserved() const {
    if (pos_ < tokens_.size() && tokens_[pos_].kind == TokenKind::Keyword) {
      std::string upper = to_upper(tokens_[pos_].text);
      if (kUnsupportedKeywords.count(upper)) unsupported("keyword " + upper);
    }
  }

  // --- grammar ------------------------------------------------------------

  QueryAst parse_statement() {
    QueryAst ast = parse_select_core();
    if (at_keyword("UNION")) {
      advance();
      ast.set_op = SetOp::Union;
      ast.set_rhs = std::make_unique<QueryAst>(parse_statement());
    } else if (at_keyword("INTERSECT")) {
      advance();
      ast.set_op = SetOp::Intersect;
      ast.set_rhs = std::make_unique<QueryAst>(parse_statement());
    } else if (at_keyword("EXCEPT")) {
      advance();
      ast.set_op = SetOp::Except;
      ast.set_rhs = std::make_unique<QueryAst>(parse_statement());
    }
    return ast;
  }

  QueryAst parse_select_core() {
    reject_reserved();
    expect_keyword("SELECT");
    QueryAst ast;
    if (accept_keyword("DISTINCT")) ast.distinct = true;

    ast.select.push_back(parse_select_item());
    while (at_punct(",")) {
      advance();
      ast.select.push_back(parse_select_item());
    }

    expect_keyword("FROM");
    ast.from.push_back(parse_table_ref());
    while (at_punct(",")) {
      advance();
      ast.from.push_back(parse_table_ref());
    }
    while (at_keyword("JOIN")) {
      advance();
      Join join;
      join.table = parse_table_ref();
      expect_keyword("ON");
      join.on = parse_condition();
      ast.joins.push_back(std::move(join));
    }
    check_alias_uniqueness(ast);

    if (accept_keyword("WHERE")) ast.where = parse_condition();
    if (at_keyword("GROUP")) {
      advance();
      expect_keyword("BY");
      ast.group_by.push_back(parse_column_ref());
      while (at_punct(",")) {
        advance();
        ast.group_by.push_back(parse_column_ref());
      }
    }
    if (accept_keyword("HAVING")) ast.having = parse_condition();
    if (at_keyword("ORDER")) {
      advance();
      expect_keyword("BY");
      ast.order_by.push_back(parse_order_item());
      while (at_punct(",")) {
        advance();
        ast.order_by.push_back(parse_order_item());
      }
    }
    if (accept_keyword("LIMIT")) {
      if (at_end() || current().kind != TokenKind::Number) fail("expected number after LIMIT");
      long long value = 0;
      const std::string& text = current().text;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
        fail("LIMIT expects a non-negative integer");
      }
      ast.limit = value;
      advance();
    }
    return ast;
  }

  void check_alias_uniqueness(const QueryAst& ast) const {
    std::set<std::string> seen;
    auto check = [&](const TableRef& ref) {
      if (ref.alias.empty()) return;
      if (!seen.insert(to_upper(ref.alias)).second) {
        throw Error(ErrorKind::SyntaxError, "duplicate alias " + ref.alias, ref.span.begin);
      }
    };
    for (const auto& t : ast.from) check(t);
    for (const auto& j : ast.joins) check(j.table);
  }

  Expr parse_select_item() {
    reject_reserved();
    if (at_operator("*")) {
      Expr expr;
      expr.star = true;
      expr.span = current().span;
      advance();
      return expr;
    }
    return parse_expr();
  }

  AggFn aggregate_at() const {
    if (pos_ >= tokens_.size() || tokens_[pos_].kind != TokenKind::Keyword) return AggFn::None;
    const std::string& t = tokens_[pos_].text;
    if (iequals(t, "COUNT")) return AggFn::Count;
    if (iequals(t, "SUM")) return AggFn::Sum;
    if (iequals(t, "AVG")) return AggFn::Avg;
    if (iequals(t, "MIN")) return AggFn::Min;
    if (iequals(t, "MAX")) return AggFn::Max;
    return AggFn::None;
  }

  Expr parse_expr() {
    reject_reserved();
    Expr expr;
    AggFn agg = aggregate_at();
    if (agg != AggFn::None) {
      expr.agg = agg;
      expr.span.begin = current().span.begin;
      advance();
      expect_punct("(");
      if (accept_keyword("DISTINCT")) expr.distinct_arg = true;
      if (at_operator("*")) {
        expr.star = true;
        advance();
      } else {
        expr.column = parse_column_ref();
      }
      if (!at_punct(")")) fail("expected ')' after aggregate argument");
      expr.span.end = current().span.end;
      advance();
      return expr;
    }
    expr.column = parse_column_ref();
    expr.span = expr.column.span;
    return expr;
  }

  ColumnRef parse_column_ref() {
    reject_reserved();
    if (at_end() || current().kind != TokenKind::Identifier) {
      fail("expected column name");
    }
    ColumnRef ref;
    ref.span = current().span;
    ref.column = current().text;
    advance();
    if (at_punct(".")) {
      advance();
      if (at_end() || current().kind != TokenKind::Identifier) fail("expected column after '.'");
      ref.table = std::move(ref.column);
      ref.column = current().text;
      ref.span.end = current().span.end;
      advance();
    }
    return ref;
  }

  TableRef parse_table_ref() {
    reject_reserved();
    if (at_punct("(")) unsupported("subquery in FROM");
    if (at_end() || current().kind != TokenKind::Identifier) fail("expected table name");
    TableRef ref;
    ref.span = current().span;
    ref.table = current().text;
    advance();
    if (accept_keyword("AS")) {
      if (at_end() || current().kind != TokenKind::Identifier) fail("expected alias after AS");
      ref.alias = current().text;
      ref.span.end = current().span.end;
      advance();
    }
    return ref;
  }

  OrderItem parse_order_item() {
    OrderItem item;
    item.expr = parse_expr();
    if (accept_keyword("ASC")) {
      item.descending = false;
    } else if (accept_keyword("DESC")) {
      item.descending = true;
    }
    return item;
  }

  // Conditions: OR-groups of AND-groups of primaries; single-child groups
  // collapse to the child so conjunction nodes always hold >= 2 children.
  Condition parse_condition() {
    Condition first = parse_and_chain();
    if (!at_keyword("OR")) return first;
    Condition::Group group;
    group.op = BoolOp::Or;
    group.children.push_back(std::move(first));
    while (accept_keyword("OR")) group.children.push_back(parse_and_chain());
    return Condition(std::move(group));
  }

  Condition parse_and_chain() {
    Condition first = parse_condition_primary();
    if (!at_keyword("AND")) return first;
    Condition::Group group;
    group.op = BoolOp::And;
    group.children.push_back(std::move(first));
    while (accept_keyword("AND")) group.children.push_back(parse_condition_primary());
    return Condition(std::move(group));
  }

  Condition parse_condition_primary() {
    reject_reserved();
    if (at_punct("(")) {
      advance();
      Condition inner = parse_condition();
      expect_punct(")");
      return inner;
    }
    return Condition(parse_comparison());
  }

  Comparison parse_comparison() {
    Comparison cmp;
    cmp.lhs = parse_expr();

    if (at_keyword("NOT")) {
      advance();
      if (!at_keyword("IN")) unsupported("NOT outside NOT IN");
      advance();
      cmp.op = CmpOp::NotIn;
      parse_in_rhs(cmp);
      return cmp;
    }
    if (accept_keyword("IN")) {
      cmp.op = CmpOp::In;
      parse_in_rhs(cmp);
      return cmp;
    }
    if (accept_keyword("LIKE")) {
      cmp.op = CmpOp::Like;
      cmp.rhs_kind = Comparison::RhsKind::Literal;
      cmp.literal = parse_literal();
      return cmp;
    }
    if (accept_keyword("BETWEEN")) {
      cmp.op = CmpOp::Between;
      cmp.rhs_kind = Comparison::RhsKind::Literal;
      cmp.literal = parse_literal();
      expect_keyword("AND");
      cmp.between_high = parse_literal();
      return cmp;
    }

    if (at_end() || current().kind != TokenKind::Operator) fail("expected comparison operator");
    const std::string& op = current().text;
    if (op == "=") cmp.op = CmpOp::Eq;
    else if (op == "!=" || op == "<>") cmp.op = CmpOp::Ne;
    else if (op == "<") cmp.op = CmpOp::Lt;
    else if (op == "<=") cmp.op = CmpOp::Le;
    else if (op == ">") cmp.op = CmpOp::Gt;
    else if (op == ">=") cmp.op = CmpOp::Ge;
    else if (op == "+" || op == "/" || op == "%" || op == "*") unsupported("arithmetic expression");
    else fail("unknown operator '" + op + "'");
    advance();

    if (at_punct("(")) {
      advance();
      if (at_keyword("SELECT")) {
        cmp.rhs_kind = Comparison::RhsKind::Subquery;
        cmp.subquery = std::make_unique<QueryAst>(parse_statement());
        expect_punct(")");
        return cmp;
      }
      unsupported("parenthesized expression on comparison right side");
    }
    if (!at_end() && current().kind == TokenKind::Identifier) {
      cmp.rhs_kind = Comparison::RhsKind::Column;
      cmp.rhs_column = parse_column_ref();
      return cmp;
    }
    cmp.rhs_kind = Comparison::RhsKind::Literal;
    cmp.literal = parse_literal();
    return cmp;
  }

  void parse_in_rhs(Comparison& cmp) {
    expect_punct("(");
    if (at_keyword("SELECT")) {
      cmp.rhs_kind = Comparison::RhsKind::Subquery;
      cmp.subquery = std::make_unique<QueryAst>(parse_statement());
      expect_punct(")");
      return;
    }
    cmp.rhs_kind = Comparison::RhsKind::LiteralList;
    cmp.literal_list.push_back(parse_literal());
    while (at_punct(",")) {
      advance();
      cmp.literal_list.push_back(parse_literal());
    }
    expect_punct(")");
  }

  Value parse_literal() {
    reject_reserved();
    if (at_end()) fail("expected literal value");
    const Token& tok = current();
    if (tok.kind == TokenKind::Number) {
      advance();
      return Value::make_number(std::stod(tok.text), tok.text, tok.span);
    }
    if (tok.kind == TokenKind::Operator && tok.text == "-") {
      Span begin = tok.span;
      advance();
      if (at_end() || current().kind != TokenKind::Number) fail("expected number after '-'");
      const Token& num = current();
      advance();
      return Value::make_number(-std::stod(num.text), "-" + num.text,
                                Span{begin.begin, num.span.end});
    }
    if (tok.kind == TokenKind::String) {
      advance();
      return Value::make_text(unquote(tok.text), tok.span);
    }
    fail("expected literal value, got '" + tok.text + "'");
  }

  static std::string unquote(const std::string& lexeme) {
    // lexeme includes its delimiters; doubled delimiters are escapes
    char quote = lexeme.front();
    std::string out;
    for (std::size_t i = 1; i + 1 < lexeme.size(); ++i) {
      if (lexeme[i] == quote && i + 2 < lexeme.size() && lexeme[i + 1] == quote) {
        out.push_back(quote);
        ++i;
        continue;
      }
      out.push_back(lexeme[i]);
    }
    return out;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

QueryAst parse_query(std::string_view sql) { return Parser(sql).parse(); }

}  // namespace ezsql
