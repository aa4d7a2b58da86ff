#include "ezsql/render.hpp"

#include <sstream>

namespace ezsql {

namespace {

std::string render_column(const ColumnRef& ref) {
  if (ref.table.empty()) return ref.column;
  return ref.table + "." + ref.column;
}

std::string render_table(const TableRef& ref) {
  if (ref.alias.empty()) return ref.table;
  return ref.table + " AS " + ref.alias;
}

void render_condition_into(const Condition& condition, std::ostringstream& out, bool nested);

void render_comparison_into(const Comparison& cmp, std::ostringstream& out) {
  out << render_expr(cmp.lhs) << ' ' << to_sql(cmp.op) << ' ';
  switch (cmp.rhs_kind) {
    case Comparison::RhsKind::Literal:
      out << render_value(cmp.literal);
      if (cmp.op == CmpOp::Between) out << " AND " << render_value(cmp.between_high);
      break;
    case Comparison::RhsKind::Column:
      out << render_column(cmp.rhs_column);
      break;
    case Comparison::RhsKind::LiteralList: {
      out << '(';
      for (std::size_t i = 0; i < cmp.literal_list.size(); ++i) {
        if (i) out << ", ";
        out << render_value(cmp.literal_list[i]);
      }
      out << ')';
      break;
    }
    case Comparison::RhsKind::Subquery:
      out << '(' << render_sql(*cmp.subquery) << ')';
      break;
  }
}

void render_condition_into(const Condition& condition, std::ostringstream& out, bool nested) {
  if (condition.is_comparison()) {
    render_comparison_into(condition.comparison(), out);
    return;
  }
  const auto& group = condition.group();
  if (nested) out << '(';
  const char* sep = group.op == BoolOp::And ? " AND " : " OR ";
  for (std::size_t i = 0; i < group.children.size(); ++i) {
    if (i) out << sep;
    render_condition_into(group.children[i], out, true);
  }
  if (nested) out << ')';
}

}  // namespace

std::string render_value(const Value& value) {
  switch (value.kind) {
    case ValueKind::Number:
      return value.text;
    case ValueKind::Text: {
      std::string out = "'";
      for (char c : value.text) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
      }
      out.push_back('\'');
      return out;
    }
    case ValueKind::Null:
      return "NULL";
  }
  return "";
}

std::string render_expr(const Expr& expr) {
  if (expr.agg == AggFn::None) {
    return expr.star ? "*" : render_column(expr.column);
  }
  std::string out = to_sql(expr.agg);
  out += '(';
  if (expr.distinct_arg) out += "DISTINCT ";
  out += expr.star ? "*" : render_column(expr.column);
  out += ')';
  return out;
}

std::string render_condition(const Condition& condition) {
  std::ostringstream out;
  render_condition_into(condition, out, false);
  return out.str();
}

std::string render_sql(const QueryAst& ast) {
  std::ostringstream out;
  out << "SELECT ";
  if (ast.distinct) out << "DISTINCT ";
  for (std::size_t i = 0; i < ast.select.size(); ++i) {
    if (i) out << ", ";
    out << render_expr(ast.select[i]);
  }
  out << " FROM ";
  for (std::size_t i = 0; i < ast.from.size(); ++i) {
    if (i) out << ", ";
    out << render_table(ast.from[i]);
  }
  for (const auto& join : ast.joins) {
    out << " JOIN " << render_table(join.table) << " ON ";
    render_condition_into(join.on, out, false);
  }
  if (ast.where) {
    out << " WHERE ";
    render_condition_into(*ast.where, out, false);
  }
  if (!ast.group_by.empty()) {
    out << " GROUP BY ";
    for (std::size_t i = 0; i < ast.group_by.size(); ++i) {
      if (i) out << ", ";
      out << render_column(ast.group_by[i]);
    }
  }
  if (ast.having) {
    out << " HAVING ";
    render_condition_into(*ast.having, out, false);
  }
  if (!ast.order_by.empty()) {
    out << " ORDER BY ";
    for (std::size_t i = 0; i < ast.order_by.size(); ++i) {
      if (i) out << ", ";
      out << render_expr(ast.order_by[i].expr);
      if (ast.order_by[i].descending) out << " DESC";
    }
  }
  if (ast.limit) out << " LIMIT " << *ast.limit;
  if (ast.set_op != SetOp::None && ast.set_rhs) {
    out << ' ' << to_sql(ast.set_op) << ' ' << render_sql(*ast.set_rhs);
  }
  return out.str();
}

}  // namespace ezsql
