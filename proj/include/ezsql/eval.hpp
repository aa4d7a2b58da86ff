#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ezsql/ast.hpp"
#include "ezsql/passes.hpp"
#include "ezsql/schema.hpp"

namespace ezsql {

/// In-memory relation used by the brute-force oracle.
struct TableData {
  std::string name;
  std::vector<std::pair<std::string, ValueType>> columns;
  std::vector<std::vector<Value>> rows;
};

using Database = std::vector<TableData>;
using Row = std::vector<Value>;
using ResultSet = std::vector<Row>;  // order-insensitive multiset

/// Brute-force reference evaluation of one query: nested-loop joins,
/// SQL-style NULL comparisons (never match), UNION deduplicating,
/// INTERSECT/EXCEPT set-semantic. Exists only to certify rewrites.
ResultSet execute_query(const QueryAst& ast, const Database& db);

ResultSet distinct_normalize(ResultSet rows);
bool result_sets_equal(ResultSet a, ResultSet b);

/// Loads a fixture database file: {"db_id", "tables":[{name, columns, rows}]}.
/// Column types are inferred from the first non-null value of each column.
Database load_database(std::istream& source);
Database load_database_file(const std::string& path);

/// Small randomized database for a schema: up to `max_rows` rows per table,
/// at most five distinct values per column, no NULLs.
Database random_database(const DbSchema& schema, std::uint64_t seed, std::size_t max_rows = 20);

// --- BLEU-4 ------------------------------------------------------------------

/// Accumulates corpus-level modified n-gram statistics (n = 1..4).
/// Zero-match orders are add-one smoothed; the brevity penalty uses the
/// shortest reference length.
class BleuAccumulator {
public:
  void add(const std::vector<std::string>& candidate,
           const std::vector<std::vector<std::string>>& references);
  double score() const;
  static const char* metadata();  // smoothing / brevity-penalty description

private:
  std::uint64_t matches_[4] = {0, 0, 0, 0};
  std::uint64_t totals_[4] = {0, 0, 0, 0};
  std::uint64_t candidate_length_ = 0;
  std::uint64_t reference_length_ = 0;
};

/// Sentence-level BLEU-4 in [0, 1]. Throws EmptyInput when the candidate or
/// any reference is empty.
double bleu4(const std::vector<std::string>& candidate,
             const std::vector<std::vector<std::string>>& references);

// --- corpus report -------------------------------------------------------------

struct CorpusRecord {
  std::string db_id;
  std::string sql;
};

struct EvalReport {
  std::size_t records_total = 0;
  double parse_rate = 0.0;
  double forbidden_token_rate = 0.0;
  double mean_reduction = 0.0;
  double median_reduction = 0.0;
  std::size_t idempotence_failures = 0;
  std::size_t equivalence_pass = 0;
  std::size_t equivalence_fail = 0;
  std::size_t equivalence_skipped = 0;
  std::vector<std::string> errors;
  std::string metadata;

  std::string to_json() const;  // stable field order, for golden comparisons
};

/// Transpiles every record, accumulating rates, length statistics, and
/// oracle equivalence results for records whose database has fixture data.
/// Per-record failures are captured in the report instead of aborting.
EvalReport corpus_report(const std::vector<CorpusRecord>& records, const Catalog& catalog,
                         const PassConfig& config,
                         const std::map<std::string, Database>& fixtures, std::uint64_t seed);

// --- oracle equivalence helpers ------------------------------------------------

/// Checks the structural passes of one query on one database, comparing
/// DISTINCT-normalized result multisets. Returns true when no applicable
/// pass disagrees; `checked` reports whether any pass applied.
bool passes_preserve_semantics(const QueryAst& ast, const DbSchema& schema, const Database& db,
                               bool* checked);

}  // namespace ezsql
