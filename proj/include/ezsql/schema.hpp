#pragma once

#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ezsql {

enum class ValueType { Text, Number, Time, Boolean, Other };

ValueType value_type_from_string(std::string_view s);
const char* to_string(ValueType type);

struct ColumnInfo {
  std::string name;
  std::string natural_name;
  ValueType value_type = ValueType::Text;
};

struct TableInfo {
  std::string name;
  std::string natural_name;
  std::vector<ColumnInfo> columns;

  const ColumnInfo* find_column(std::string_view column) const;  // case-insensitive
};

struct KeyRef {
  std::string table;
  std::string column;
};

struct DbSchema {
  std::string db_id;
  std::vector<TableInfo> tables;
  std::vector<KeyRef> primary_keys;
  std::vector<std::pair<KeyRef, KeyRef>> foreign_keys;

  const TableInfo* find_table(std::string_view table) const;  // case-insensitive
  bool is_foreign_key_pair(std::string_view table_a, std::string_view column_a,
                           std::string_view table_b, std::string_view column_b) const;
};

using Catalog = std::map<std::string, DbSchema>;

/// Loads a catalog from the JSON schema format. Validates name uniqueness,
/// non-empty natural names, and that every key refers to an existing
/// table/column. Throws MalformedCatalog, DuplicateDbId, or
/// DanglingKeyReference.
Catalog load_catalog(std::istream& source);
Catalog load_catalog_file(const std::string& path);

/// Finds the unique in-scope table owning `column_token`. The token may be
/// qualified (`AIRPORTS.City`), in which case only the named table is
/// consulted. Throws UnknownColumn or AmbiguousColumn.
std::pair<std::string, const ColumnInfo*> resolve_column(
    const DbSchema& schema, std::span<const std::string> tables_in_scope,
    std::string_view column_token);

std::string natural_name(const DbSchema& schema, std::string_view table);
std::string natural_name(const DbSchema& schema, std::string_view table, std::string_view column);

}  // namespace ezsql
