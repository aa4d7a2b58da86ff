#include "ezsql/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ezsql/errors.hpp"

namespace ezsql {

namespace {

// --- value ordering ----------------------------------------------------------

int kind_rank(ValueKind kind) {
  switch (kind) {
    case ValueKind::Null: return 0;
    case ValueKind::Number: return 1;
    case ValueKind::Text: return 2;
  }
  return 0;
}

// total order used for sorting and set semantics (NULLs compare equal here,
// matching SQL set-operator behaviour)
bool value_less(const Value& a, const Value& b) {
  if (a.kind != b.kind) return kind_rank(a.kind) < kind_rank(b.kind);
  switch (a.kind) {
    case ValueKind::Null: return false;
    case ValueKind::Number: return a.number < b.number;
    case ValueKind::Text: return a.text < b.text;
  }
  return false;
}

bool value_eq(const Value& a, const Value& b) {
  return !value_less(a, b) && !value_less(b, a);
}

bool row_less(const Row& a, const Row& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), value_less);
}

bool row_eq(const Row& a, const Row& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!value_eq(a[i], b[i])) return false;
  }
  return true;
}

// WHERE-style comparison: unknown (nullopt) whenever either side is NULL
std::optional<int> compare_values(const Value& a, const Value& b) {
  if (a.kind == ValueKind::Null || b.kind == ValueKind::Null) return std::nullopt;
  if (a.kind != b.kind) {
    throw Error(ErrorKind::TypeMismatch, "cannot compare text with number");
  }
  if (a.kind == ValueKind::Number) {
    if (a.number < b.number) return -1;
    if (a.number > b.number) return 1;
    return 0;
  }
  return a.text.compare(b.text) < 0 ? -1 : (a.text == b.text ? 0 : 1);
}

// SQL LIKE with % and _, ASCII case-insensitive
bool like_match(std::string_view text, std::string_view pattern) {
  if (pattern.empty()) return text.empty();
  char p = pattern.front();
  if (p == '%') {
    for (std::size_t skip = 0; skip <= text.size(); ++skip) {
      if (like_match(text.substr(skip), pattern.substr(1))) return true;
    }
    return false;
  }
  if (text.empty()) return false;
  if (p != '_' &&
      std::tolower(static_cast<unsigned char>(p)) !=
          std::tolower(static_cast<unsigned char>(text.front()))) {
    return false;
  }
  return like_match(text.substr(1), pattern.substr(1));
}

// --- evaluator ---------------------------------------------------------------

struct Binding {
  std::string name;  // alias when present, otherwise the table name
  const TableData* table;
};

using Tuple = std::vector<std::size_t>;  // one row index per binding

class Evaluator {
public:
  explicit Evaluator(const Database& db) : db_(db) {}

  ResultSet execute(const QueryAst& ast) {
    ResultSet result = execute_core(ast);
    const QueryAst* node = &ast;
    while (node->set_op != SetOp::None) {
      ResultSet rhs = execute_core(*node->set_rhs);
      result = apply_set_op(std::move(result), node->set_op, std::move(rhs));
      node = node->set_rhs.get();
    }
    return result;
  }

private:
  const TableData* find_table(std::string_view name) const {
    for (const auto& table : db_) {
      if (iequals(table.name, name)) return &table;
    }
    throw Error(ErrorKind::UnknownTable, "unknown table '" + std::string(name) + "'");
  }

  static ResultSet apply_set_op(ResultSet left, SetOp op, ResultSet right) {
    left = distinct_normalize(std::move(left));
    right = distinct_normalize(std::move(right));
    ResultSet out;
    switch (op) {
      case SetOp::Union:
        out = std::move(left);
        for (auto& row : right) out.push_back(std::move(row));
        return distinct_normalize(std::move(out));
      case SetOp::Intersect:
        for (auto& row : left) {
          if (std::any_of(right.begin(), right.end(),
                          [&](const Row& r) { return row_eq(r, row); })) {
            out.push_back(std::move(row));
          }
        }
        return out;
      case SetOp::Except:
        for (auto& row : left) {
          if (std::none_of(right.begin(), right.end(),
                           [&](const Row& r) { return row_eq(r, row); })) {
            out.push_back(std::move(row));
          }
        }
        return out;
      case SetOp::None:
        break;
    }
    return left;
  }

  ResultSet execute_core(const QueryAst& ast) {
    std::vector<Binding> bindings;
    auto bind = [&](const TableRef& ref) {
      bindings.push_back(
          Binding{ref.alias.empty() ? ref.table : ref.alias, find_table(ref.table)});
    };

    std::vector<Tuple> tuples = {Tuple{}};
    for (const auto& ref : ast.from) {
      bind(ref);
      tuples = cross(std::move(tuples), bindings.back().table->rows.size());
    }
    for (const auto& join : ast.joins) {
      bind(join.table);
      tuples = cross(std::move(tuples), bindings.back().table->rows.size());
      std::vector<Tuple> kept;
      for (auto& tuple : tuples) {
        if (eval_condition(join.on, bindings, tuple)) kept.push_back(std::move(tuple));
      }
      tuples = std::move(kept);
    }
    if (ast.where) {
      std::vector<Tuple> kept;
      for (auto& tuple : tuples) {
        if (eval_condition(*ast.where, bindings, tuple)) kept.push_back(std::move(tuple));
      }
      tuples = std::move(kept);
    }

    bool aggregated = !ast.group_by.empty() || has_aggregate(ast);
    std::vector<std::vector<Tuple>> groups;
    if (!ast.group_by.empty()) {
      std::vector<Row> keys;
      for (auto& tuple : tuples) {
        Row key;
        for (const auto& col : ast.group_by) key.push_back(column_value(col, bindings, tuple));
        bool matched = false;
        for (std::size_t g = 0; g < keys.size(); ++g) {
          if (row_eq(keys[g], key)) {
            groups[g].push_back(std::move(tuple));
            matched = true;
            break;
          }
        }
        if (!matched) {
          keys.push_back(std::move(key));
          groups.push_back({std::move(tuple)});
        }
      }
    } else if (aggregated) {
      groups.push_back(std::move(tuples));  // one group, possibly empty
    } else {
      for (auto& tuple : tuples) groups.push_back({std::move(tuple)});
    }

    if (ast.having) {
      std::vector<std::vector<Tuple>> kept;
      for (auto& group : groups) {
        if (eval_group_condition(*ast.having, bindings, group)) kept.push_back(std::move(group));
      }
      groups = std::move(kept);
    }

    struct OutputRow {
      Row projected;
      Row sort_key;
    };
    std::vector<OutputRow> output;
    for (const auto& group : groups) {
      OutputRow row;
      for (const auto& item : ast.select) {
        if (item.agg == AggFn::None && item.star) {
          project_star(bindings, group, row.projected);
        } else {
          row.projected.push_back(eval_group_expr(item, bindings, group));
        }
      }
      for (const auto& order : ast.order_by) {
        row.sort_key.push_back(eval_group_expr(order.expr, bindings, group));
      }
      output.push_back(std::move(row));
    }

    if (ast.distinct) {
      std::vector<OutputRow> unique;
      for (auto& row : output) {
        bool seen = std::any_of(unique.begin(), unique.end(), [&](const OutputRow& u) {
          return row_eq(u.projected, row.projected);
        });
        if (!seen) unique.push_back(std::move(row));
      }
      output = std::move(unique);
    }

    if (!ast.order_by.empty()) {
      std::stable_sort(output.begin(), output.end(), [&](const OutputRow& a, const OutputRow& b) {
        for (std::size_t i = 0; i < ast.order_by.size(); ++i) {
          const Value& va = a.sort_key[i];
          const Value& vb = b.sort_key[i];
          if (value_eq(va, vb)) continue;
          bool less = value_less(va, vb);
          return ast.order_by[i].descending ? !less : less;
        }
        return false;
      });
    }
    if (ast.limit && output.size() > static_cast<std::size_t>(*ast.limit)) {
      output.resize(static_cast<std::size_t>(*ast.limit));
    }

    ResultSet result;
    result.reserve(output.size());
    for (auto& row : output) result.push_back(std::move(row.projected));
    return result;
  }

  static std::vector<Tuple> cross(std::vector<Tuple> tuples, std::size_t row_count) {
    std::vector<Tuple> out;
    out.reserve(tuples.size() * row_count);
    for (const auto& tuple : tuples) {
      for (std::size_t r = 0; r < row_count; ++r) {
        Tuple extended = tuple;
        extended.push_back(r);
        out.push_back(std::move(extended));
      }
    }
    return out;
  }

  static bool has_aggregate(const QueryAst& ast) {
    auto is_agg = [](const Expr& e) { return e.agg != AggFn::None; };
    if (std::any_of(ast.select.begin(), ast.select.end(), is_agg)) return true;
    return std::any_of(ast.order_by.begin(), ast.order_by.end(),
                       [&](const OrderItem& o) { return is_agg(o.expr); });
  }

  Value column_value(const ColumnRef& ref, const std::vector<Binding>& bindings,
                     const Tuple& tuple) const {
    for (std::size_t b = 0; b < bindings.size(); ++b) {
      if (!ref.table.empty() && !iequals(bindings[b].name, ref.table)) continue;
      const TableData& table = *bindings[b].table;
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (iequals(table.columns[c].first, ref.column)) return table.rows[tuple[b]][c];
      }
      if (!ref.table.empty()) break;
    }
    throw Error(ErrorKind::UnknownColumn,
                "unknown column '" + (ref.table.empty() ? ref.column
                                                        : ref.table + "." + ref.column) +
                    "'");
  }

  Value eval_scalar(const Expr& expr, const std::vector<Binding>& bindings,
                    const Tuple& tuple) const {
    if (expr.agg != AggFn::None) {
      throw Error(ErrorKind::TypeMismatch, "aggregate in row context");
    }
    return column_value(expr.column, bindings, tuple);
  }

  Value eval_group_expr(const Expr& expr, const std::vector<Binding>& bindings,
                        const std::vector<Tuple>& group) const {
    if (expr.agg == AggFn::None) {
      if (group.empty()) return Value::make_null();
      return eval_scalar(expr, bindings, group.front());
    }
    if (expr.agg == AggFn::Count && expr.star) {
      double n = static_cast<double>(group.size());
      return Value::make_number(n, std::to_string(group.size()));
    }

    std::vector<Value> values;
    for (const auto& tuple : group) {
      Value v = column_value(expr.column, bindings, tuple);
      if (v.kind != ValueKind::Null) values.push_back(std::move(v));
    }
    if (expr.agg == AggFn::Count) {
      if (expr.distinct_arg) {
        std::sort(values.begin(), values.end(), value_less);
        values.erase(std::unique(values.begin(), values.end(), value_eq), values.end());
      }
      double n = static_cast<double>(values.size());
      return Value::make_number(n, std::to_string(values.size()));
    }
    if (values.empty()) return Value::make_null();
    if (expr.agg == AggFn::Min || expr.agg == AggFn::Max) {
      const Value* best = &values.front();
      for (const auto& v : values) {
        bool less = value_less(v, *best);
        if (expr.agg == AggFn::Min ? less : value_less(*best, v)) best = &v;
      }
      return *best;
    }
    double sum = 0.0;
    for (const auto& v : values) {
      if (v.kind != ValueKind::Number) {
        throw Error(ErrorKind::TypeMismatch, "SUM/AVG over non-numeric column");
      }
      sum += v.number;
    }
    if (expr.agg == AggFn::Avg) sum /= static_cast<double>(values.size());
    std::ostringstream text;
    text << sum;
    return Value::make_number(sum, text.str());
  }

  void project_star(const std::vector<Binding>& bindings, const std::vector<Tuple>& group,
                    Row& out) const {
    if (group.empty()) return;
    const Tuple& tuple = group.front();
    for (std::size_t b = 0; b < bindings.size(); ++b) {
      for (const auto& value : bindings[b].table->rows[tuple[b]]) out.push_back(value);
    }
  }

  bool eval_condition(const Condition& cond, const std::vector<Binding>& bindings,
                      const Tuple& tuple) const {
    if (cond.is_group()) {
      const auto& group = cond.group();
      if (group.op == BoolOp::And) {
        return std::all_of(group.children.begin(), group.children.end(),
                           [&](const Condition& c) { return eval_condition(c, bindings, tuple); });
      }
      return std::any_of(group.children.begin(), group.children.end(),
                         [&](const Condition& c) { return eval_condition(c, bindings, tuple); });
    }
    const Comparison& cmp = cond.comparison();
    Value lhs = eval_scalar(cmp.lhs, bindings, tuple);
    std::optional<Value> column_rhs;
    if (cmp.rhs_kind == Comparison::RhsKind::Column) {
      column_rhs = column_value(cmp.rhs_column, bindings, tuple);
    }
    return eval_comparison(cmp, std::move(lhs), std::move(column_rhs));
  }

  // HAVING: aggregate expressions see the whole group
  bool eval_group_condition(const Condition& cond, const std::vector<Binding>& bindings,
                            const std::vector<Tuple>& group) const {
    if (cond.is_group()) {
      const auto& g = cond.group();
      if (g.op == BoolOp::And) {
        return std::all_of(g.children.begin(), g.children.end(), [&](const Condition& c) {
          return eval_group_condition(c, bindings, group);
        });
      }
      return std::any_of(g.children.begin(), g.children.end(), [&](const Condition& c) {
        return eval_group_condition(c, bindings, group);
      });
    }
    const Comparison& cmp = cond.comparison();
    Value lhs = eval_group_expr(cmp.lhs, bindings, group);
    std::optional<Value> column_rhs;
    if (cmp.rhs_kind == Comparison::RhsKind::Column) {
      column_rhs = group.empty() ? Value::make_null()
                                 : column_value(cmp.rhs_column, bindings, group.front());
    }
    return eval_comparison(cmp, std::move(lhs), std::move(column_rhs));
  }

  bool eval_comparison(const Comparison& cmp, Value lhs, std::optional<Value> column_rhs) const {
    switch (cmp.op) {
      case CmpOp::In:
      case CmpOp::NotIn: {
        if (lhs.kind == ValueKind::Null) return false;
        std::vector<Value> members;
        bool has_null = false;
        if (cmp.rhs_kind == Comparison::RhsKind::Subquery) {
          for (const auto& row : Evaluator(db_).execute(*cmp.subquery)) {
            if (row.empty()) continue;
            if (row.front().kind == ValueKind::Null) has_null = true;
            else members.push_back(row.front());
          }
        } else {
          for (const auto& v : cmp.literal_list) {
            if (v.kind == ValueKind::Null) has_null = true;
            else members.push_back(v);
          }
        }
        bool found = std::any_of(members.begin(), members.end(), [&](const Value& v) {
          auto c = compare_values(lhs, v);
          return c && *c == 0;
        });
        if (cmp.op == CmpOp::In) return found;
        return !found && !has_null;  // NOT IN over a NULL-bearing set is unknown
      }
      case CmpOp::Like: {
        if (lhs.kind != ValueKind::Text || cmp.literal.kind != ValueKind::Text) return false;
        return like_match(lhs.text, cmp.literal.text);
      }
      case CmpOp::Between: {
        auto lo = compare_values(lhs, cmp.literal);
        auto hi = compare_values(lhs, cmp.between_high);
        return lo && hi && *lo >= 0 && *hi <= 0;
      }
      default: {
        Value rhs = column_rhs ? std::move(*column_rhs) : comparison_rhs(cmp);
        auto c = compare_values(lhs, rhs);
        if (!c) return false;
        switch (cmp.op) {
          case CmpOp::Eq: return *c == 0;
          case CmpOp::Ne: return *c != 0;
          case CmpOp::Lt: return *c < 0;
          case CmpOp::Le: return *c <= 0;
          case CmpOp::Gt: return *c > 0;
          case CmpOp::Ge: return *c >= 0;
          default: return false;
        }
      }
    }
  }

  Value comparison_rhs(const Comparison& cmp) const {
    switch (cmp.rhs_kind) {
      case Comparison::RhsKind::Literal:
        return cmp.literal;
      case Comparison::RhsKind::Subquery: {
        ResultSet rows = Evaluator(db_).execute(*cmp.subquery);
        if (rows.empty() || rows.front().empty()) return Value::make_null();
        return rows.front().front();  // scalar subquery: first row, first column
      }
      case Comparison::RhsKind::Column:
      case Comparison::RhsKind::LiteralList:
        break;
    }
    throw Error(ErrorKind::TypeMismatch, "comparison right side is not scalar in this context");
  }

  // column rhs needs the tuple; handled before eval_comparison is reached
  friend ResultSet (::ezsql::execute_query)(const QueryAst&, const Database&);

  const Database& db_;
};

}  // namespace

ResultSet execute_query(const QueryAst& ast, const Database& db) {
  return Evaluator(db).execute(ast);
}

ResultSet distinct_normalize(ResultSet rows) {
  std::sort(rows.begin(), rows.end(), row_less);
  rows.erase(std::unique(rows.begin(), rows.end(), row_eq), rows.end());
  return rows;
}

bool result_sets_equal(ResultSet a, ResultSet b) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end(), row_less);
  std::sort(b.begin(), b.end(), row_less);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!row_eq(a[i], b[i])) return false;
  }
  return true;
}

}  // namespace ezsql
