#pragma once

#include <string_view>

#include "ezsql/ast.hpp"

namespace ezsql {

/// Parses one SQL statement covering the Spider/WikiSQL surface:
/// SELECT [DISTINCT] projections, FROM with JOIN ... ON chains (or a comma
/// table list), WHERE / GROUP BY / HAVING / ORDER BY / LIMIT, set operators
/// between full SELECTs, and subqueries on the right side of comparisons.
/// Constructs outside the subset raise UnsupportedFeature; malformed input
/// raises SyntaxError. Both carry the offending character offset.
QueryAst parse_query(std::string_view sql);

}  // namespace ezsql
