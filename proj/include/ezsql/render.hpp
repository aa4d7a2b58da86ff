#pragma once

#include <string>

#include "ezsql/ast.hpp"

namespace ezsql {

/// Canonical rendering: uppercase keywords, single spaces, single-quoted
/// string literals. parse_query(render_sql(a)) is structurally equal to a.
std::string render_sql(const QueryAst& ast);

std::string render_expr(const Expr& expr);
std::string render_condition(const Condition& condition);
std::string render_value(const Value& value);

}  // namespace ezsql
