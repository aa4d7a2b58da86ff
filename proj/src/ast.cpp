#include "ezsql/ast.hpp"

namespace ezsql {

Value Value::make_number(double v, std::string lexeme, Span span) {
  Value out;
  out.kind = ValueKind::Number;
  out.number = v;
  out.text = std::move(lexeme);
  out.span = span;
  return out;
}

Value Value::make_text(std::string content, Span span) {
  Value out;
  out.kind = ValueKind::Text;
  out.text = std::move(content);
  out.span = span;
  return out;
}

Value Value::make_null(Span span) {
  Value out;
  out.span = span;
  return out;
}

Comparison Comparison::clone() const {
  Comparison out;
  out.lhs = lhs;
  out.op = op;
  out.rhs_kind = rhs_kind;
  out.literal = literal;
  out.between_high = between_high;
  out.rhs_column = rhs_column;
  out.literal_list = literal_list;
  if (subquery) out.subquery = std::make_unique<QueryAst>(subquery->clone());
  return out;
}

Condition Condition::clone() const {
  if (is_comparison()) return Condition(comparison().clone());
  Group g;
  g.op = group().op;
  g.children.reserve(group().children.size());
  for (const auto& child : group().children) g.children.push_back(child.clone());
  return Condition(std::move(g));
}

QueryAst QueryAst::clone() const {
  QueryAst out;
  out.distinct = distinct;
  out.select = select;
  out.from = from;
  out.joins.reserve(joins.size());
  for (const auto& j : joins) out.joins.push_back(Join{j.table, j.on.clone()});
  if (where) out.where = where->clone();
  out.group_by = group_by;
  if (having) out.having = having->clone();
  out.order_by = order_by;
  out.limit = limit;
  out.set_op = set_op;
  if (set_rhs) out.set_rhs = std::make_unique<QueryAst>(set_rhs->clone());
  out.notes = notes;
  return out;
}

bool equal(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ValueKind::Number:
      return a.number == b.number;
    case ValueKind::Text:
      return a.text == b.text;
    case ValueKind::Null:
      return true;
  }
  return false;
}

bool equal(const ColumnRef& a, const ColumnRef& b) {
  return iequals(a.table, b.table) && iequals(a.column, b.column);
}

bool equal(const Expr& a, const Expr& b) {
  if (a.agg != b.agg || a.distinct_arg != b.distinct_arg || a.star != b.star) return false;
  if (a.star) return true;
  return equal(a.column, b.column);
}

bool equal(const Comparison& a, const Comparison& b) {
  if (a.op != b.op || a.rhs_kind != b.rhs_kind) return false;
  if (!equal(a.lhs, b.lhs)) return false;
  switch (a.rhs_kind) {
    case Comparison::RhsKind::Literal:
      if (!equal(a.literal, b.literal)) return false;
      if (a.op == CmpOp::Between && !equal(a.between_high, b.between_high)) return false;
      return true;
    case Comparison::RhsKind::Column:
      return equal(a.rhs_column, b.rhs_column);
    case Comparison::RhsKind::LiteralList: {
      if (a.literal_list.size() != b.literal_list.size()) return false;
      for (std::size_t i = 0; i < a.literal_list.size(); ++i) {
        if (!equal(a.literal_list[i], b.literal_list[i])) return false;
      }
      return true;
    }
    case Comparison::RhsKind::Subquery:
      if (!a.subquery || !b.subquery) return a.subquery == b.subquery;
      return equal(*a.subquery, *b.subquery);
  }
  return false;
}

bool equal(const Condition& a, const Condition& b) {
  if (a.is_comparison() != b.is_comparison()) return false;
  if (a.is_comparison()) return equal(a.comparison(), b.comparison());
  const auto& ga = a.group();
  const auto& gb = b.group();
  if (ga.op != gb.op || ga.children.size() != gb.children.size()) return false;
  for (std::size_t i = 0; i < ga.children.size(); ++i) {
    if (!equal(ga.children[i], gb.children[i])) return false;
  }
  return true;
}

bool equal(const TableRef& a, const TableRef& b) {
  return iequals(a.table, b.table) && iequals(a.alias, b.alias);
}

bool equal(const QueryAst& a, const QueryAst& b) {
  if (a.distinct != b.distinct) return false;
  if (a.select.size() != b.select.size()) return false;
  for (std::size_t i = 0; i < a.select.size(); ++i) {
    if (!equal(a.select[i], b.select[i])) return false;
  }
  if (a.from.size() != b.from.size()) return false;
  for (std::size_t i = 0; i < a.from.size(); ++i) {
    if (!equal(a.from[i], b.from[i])) return false;
  }
  if (a.joins.size() != b.joins.size()) return false;
  for (std::size_t i = 0; i < a.joins.size(); ++i) {
    if (!equal(a.joins[i].table, b.joins[i].table)) return false;
    if (!equal(a.joins[i].on, b.joins[i].on)) return false;
  }
  if (a.where.has_value() != b.where.has_value()) return false;
  if (a.where && !equal(*a.where, *b.where)) return false;
  if (a.group_by.size() != b.group_by.size()) return false;
  for (std::size_t i = 0; i < a.group_by.size(); ++i) {
    if (!equal(a.group_by[i], b.group_by[i])) return false;
  }
  if (a.having.has_value() != b.having.has_value()) return false;
  if (a.having && !equal(*a.having, *b.having)) return false;
  if (a.order_by.size() != b.order_by.size()) return false;
  for (std::size_t i = 0; i < a.order_by.size(); ++i) {
    if (a.order_by[i].descending != b.order_by[i].descending) return false;
    if (!equal(a.order_by[i].expr, b.order_by[i].expr)) return false;
  }
  if (a.limit != b.limit) return false;
  if (a.set_op != b.set_op) return false;
  if ((a.set_rhs == nullptr) != (b.set_rhs == nullptr)) return false;
  if (a.set_rhs && !equal(*a.set_rhs, *b.set_rhs)) return false;
  return true;
}

const char* to_sql(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    case CmpOp::Like: return "LIKE";
    case CmpOp::In: return "IN";
    case CmpOp::NotIn: return "NOT IN";
    case CmpOp::Between: return "BETWEEN";
  }
  return "?";
}

const char* to_sql(SetOp op) {
  switch (op) {
    case SetOp::None: return "";
    case SetOp::Union: return "UNION";
    case SetOp::Intersect: return "INTERSECT";
    case SetOp::Except: return "EXCEPT";
  }
  return "";
}

const char* to_sql(AggFn fn) {
  switch (fn) {
    case AggFn::None: return "";
    case AggFn::Count: return "COUNT";
    case AggFn::Sum: return "SUM";
    case AggFn::Avg: return "AVG";
    case AggFn::Min: return "MIN";
    case AggFn::Max: return "MAX";
  }
  return "";
}

}  // namespace ezsql
