#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ezsql/ast.hpp"
#include "ezsql/schema.hpp"

namespace ezsql {

/// Result of splitting a set-operation chain. Flag values: 0 none, 1 UNION,
/// 2 INTERSECT, 3 EXCEPT.
struct SplitResult {
  std::vector<QueryAst> subqueries;
  int nested_query_flag = 0;
};

/// Ordered (alias, original table name) pairs, in source order.
struct AliasMap {
  std::vector<std::pair<std::string, std::string>> entries;

  bool empty() const { return entries.empty(); }
  const std::string* original_for(std::string_view alias) const;
};

enum class ClauseLabel { Projection, Condition, Grouping, Ordering, Limit };

struct ClauseSpan {
  ClauseLabel label;
  std::size_t begin = 0;  // token index range [begin, end)
  std::size_t end = 0;
};

struct EzToken {
  std::string text;
  std::optional<Span> source;  // character span in the original SQL
};

/// The lowered representation: a word sequence with clause annotations,
/// provenance spans, and free-form notes from the passes.
struct EzSqlDoc {
  std::vector<EzToken> tokens;
  std::vector<ClauseSpan> clause_spans;
  std::vector<std::string> notes;

  std::string text() const;  // tokens joined with single spaces
};

struct PassConfig {
  bool enable_superlative_naturalization = false;
  std::map<std::string, std::string> keyword_phrasings;

  static PassConfig defaults();
  const std::string& phrase(const std::string& key) const;
  /// Applies overrides on top of the defaults, rejecting empty phrases and
  /// phrases that contain substitution-trigger keywords.
  void apply_overrides(const std::map<std::string, std::string>& overrides);
};

// --- individual passes ------------------------------------------------------

/// Splits the top-level set-operation chain into independent subqueries and
/// reports which operator was found. Throws MixedSetOperators when a chain
/// mixes operator kinds at the same level.
SplitResult detect_set_operators(const QueryAst& ast);

/// Recombines UNION/INTERSECT subqueries into one query whose WHERE is the
/// OR/AND conjunction of the subqueries' conditions, preserving subquery
/// order. Requires the subqueries to agree on everything except WHERE and to
/// be plain selects (no grouping, ordering, limit, or aggregates); otherwise
/// throws UnmergeableSubqueries and the caller falls back to disjoint
/// rendering.
QueryAst merge_subqueries(SplitResult split);

AliasMap extract_aliases(const QueryAst& ast);

/// Replaces every alias qualifier with the original table name. When several
/// aliases collapse onto one table, a disambiguation note is recorded on the
/// query.
QueryAst replace_aliases(QueryAst ast, const AliasMap& aliases);

/// Removes AS bindings; requires replace_aliases to have run first.
QueryAst strip_as_keywords(QueryAst ast);

/// Rewrites `A EXCEPT B` into A with `key NOT IN (B projecting key)` added to
/// its WHERE clause. Requires a plain shared single-column projection;
/// otherwise throws UnliftableExcept.
QueryAst lower_except(QueryAst ast);

struct JoinElimination {
  QueryAst ast;
  std::vector<Condition> dropped_key_joins;  // pure key equalities removed
};

/// Deletes ON conditions that are pure key equalities, moves semantic ON
/// conditions into WHERE, and flattens the joined tables into the FROM list.
JoinElimination eliminate_joins_detailed(QueryAst ast, const DbSchema& schema);
QueryAst eliminate_joins(QueryAst ast, const DbSchema& schema);

/// Emits the lowered document for a fully simplified query (no set ops, no
/// aliases, no JOIN syntax). Nested subqueries are lowered recursively and
/// inlined in parentheses.
EzSqlDoc naturalize(const QueryAst& ast, const DbSchema& schema, const PassConfig& config);

/// Full pipeline on an already-parsed query.
EzSqlDoc transpile_ast(const QueryAst& ast, const DbSchema& schema, const PassConfig& config);

/// Full pipeline from SQL text. Errors from any stage are rethrown tagged
/// with the failing pass name.
EzSqlDoc transpile(std::string_view sql, const std::string& db_id, const Catalog& catalog,
                   const PassConfig& config);

// --- reporting helpers -------------------------------------------------------

struct LengthStats {
  std::size_t sql_tokens = 0;
  std::size_t ezsql_tokens = 0;
  double reduction_ratio = 0.0;  // 1 - ezsql/sql; negative when output grew
};

LengthStats length_stats(std::span<const Token> sql_tokens, std::span<const EzToken> ezsql_tokens);

/// Case-insensitive scan for set-operator/join keywords and alias
/// identifiers. Quoted literals are exempt. Returns the offending words.
std::vector<std::string> forbidden_tokens_in(const EzSqlDoc& doc, const AliasMap& aliases);

/// Words that would re-trigger a phrase substitution if naturalize ran over
/// the document text again; empty means the doc is idempotent.
std::vector<std::string> retrigger_tokens_in(const EzSqlDoc& doc);

}  // namespace ezsql
