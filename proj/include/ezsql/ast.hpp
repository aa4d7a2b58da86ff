#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ezsql/token.hpp"

namespace ezsql {

enum class AggFn { None, Count, Sum, Avg, Min, Max };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge, Like, In, NotIn, Between };
enum class BoolOp { And, Or };
enum class SetOp { None, Union, Intersect, Except };

enum class ValueKind { Number, Text, Null };

/// Literal value. Numbers keep the original lexeme in `text` so rendering is
/// byte-stable; `number` holds the parsed value for the evaluator.
struct Value {
  ValueKind kind = ValueKind::Null;
  double number = 0.0;
  std::string text;  // numbers: lexeme; text: unquoted content
  Span span;

  static Value make_number(double v, std::string lexeme, Span span = {});
  static Value make_text(std::string content, Span span = {});
  static Value make_null(Span span = {});
};

struct ColumnRef {
  std::string table;  // optional qualifier; empty when unqualified
  std::string column;
  Span span;
};

/// Projection / ordering / comparison-side expression: a column reference,
/// `*`, or an aggregate over one of those.
struct Expr {
  AggFn agg = AggFn::None;
  bool distinct_arg = false;  // COUNT(DISTINCT c)
  bool star = false;          // `*` (bare, or inside COUNT)
  ColumnRef column;
  Span span;
};

struct QueryAst;

struct Comparison {
  enum class RhsKind { Literal, Column, LiteralList, Subquery };

  Expr lhs;
  CmpOp op = CmpOp::Eq;
  RhsKind rhs_kind = RhsKind::Literal;
  Value literal;
  Value between_high;  // BETWEEN upper bound
  ColumnRef rhs_column;
  std::vector<Value> literal_list;  // IN (v, v, ...)
  std::unique_ptr<QueryAst> subquery;

  Comparison() = default;
  Comparison(Comparison&&) noexcept = default;
  Comparison& operator=(Comparison&&) noexcept = default;
  Comparison clone() const;
};

struct Condition {
  struct Group {
    BoolOp op = BoolOp::And;
    std::vector<Condition> children;  // invariant: >= 2
  };

  std::variant<Comparison, Group> node;

  Condition() : node(Comparison{}) {}
  explicit Condition(Comparison cmp) : node(std::move(cmp)) {}
  explicit Condition(Group group) : node(std::move(group)) {}

  bool is_comparison() const { return std::holds_alternative<Comparison>(node); }
  bool is_group() const { return std::holds_alternative<Group>(node); }
  const Comparison& comparison() const { return std::get<Comparison>(node); }
  Comparison& comparison() { return std::get<Comparison>(node); }
  const Group& group() const { return std::get<Group>(node); }
  Group& group() { return std::get<Group>(node); }

  Condition clone() const;
};

struct TableRef {
  std::string table;
  std::string alias;  // empty when the table is unaliased
  Span span;
};

struct Join {
  TableRef table;
  Condition on;
};

struct OrderItem {
  Expr expr;
  bool descending = false;  // ascending by default
};

/// One SELECT statement, plus an optional right-nested set-operation chain.
/// `from` holds one entry until join elimination flattens joined tables into
/// a comma list.
struct QueryAst {
  bool distinct = false;
  std::vector<Expr> select;
  std::vector<TableRef> from;
  std::vector<Join> joins;
  std::optional<Condition> where;
  std::vector<ColumnRef> group_by;
  std::optional<Condition> having;
  std::vector<OrderItem> order_by;
  std::optional<long long> limit;

  SetOp set_op = SetOp::None;
  std::unique_ptr<QueryAst> set_rhs;

  // free-form notes accumulated by passes (alias disambiguation, HAVING
  // passthrough); carried into the lowered document's provenance
  std::vector<std::string> notes;

  QueryAst() = default;
  QueryAst(QueryAst&&) noexcept = default;
  QueryAst& operator=(QueryAst&&) noexcept = default;
  QueryAst clone() const;
};

// Structural equality, ignoring spans and notes. Identifiers compare
// case-insensitively, literal text exactly.
bool equal(const Value& a, const Value& b);
bool equal(const ColumnRef& a, const ColumnRef& b);
bool equal(const Expr& a, const Expr& b);
bool equal(const Comparison& a, const Comparison& b);
bool equal(const Condition& a, const Condition& b);
bool equal(const TableRef& a, const TableRef& b);
bool equal(const QueryAst& a, const QueryAst& b);

const char* to_sql(CmpOp op);
const char* to_sql(SetOp op);
const char* to_sql(AggFn fn);

}  // namespace ezsql
