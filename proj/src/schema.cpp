#include "ezsql/schema.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "ezsql/errors.hpp"
#include "ezsql/token.hpp"

namespace ezsql {

using nlohmann::json;

ValueType value_type_from_string(std::string_view s) {
  if (iequals(s, "text")) return ValueType::Text;
  if (iequals(s, "number")) return ValueType::Number;
  if (iequals(s, "time")) return ValueType::Time;
  if (iequals(s, "boolean")) return ValueType::Boolean;
  if (iequals(s, "other")) return ValueType::Other;
  throw Error(ErrorKind::MalformedCatalog, "unknown column type '" + std::string(s) + "'");
}

const char* to_string(ValueType type) {
  switch (type) {
    case ValueType::Text: return "text";
    case ValueType::Number: return "number";
    case ValueType::Time: return "time";
    case ValueType::Boolean: return "boolean";
    case ValueType::Other: return "other";
  }
  return "other";
}

const ColumnInfo* TableInfo::find_column(std::string_view column) const {
  for (const auto& c : columns) {
    if (iequals(c.name, column)) return &c;
  }
  return nullptr;
}

const TableInfo* DbSchema::find_table(std::string_view table) const {
  for (const auto& t : tables) {
    if (iequals(t.name, table)) return &t;
  }
  return nullptr;
}

bool DbSchema::is_foreign_key_pair(std::string_view table_a, std::string_view column_a,
                                   std::string_view table_b, std::string_view column_b) const {
  for (const auto& [from, to] : foreign_keys) {
    bool forward = iequals(from.table, table_a) && iequals(from.column, column_a) &&
                   iequals(to.table, table_b) && iequals(to.column, column_b);
    bool backward = iequals(from.table, table_b) && iequals(from.column, column_b) &&
                    iequals(to.table, table_a) && iequals(to.column, column_a);
    if (forward || backward) return true;
  }
  return false;
}

namespace {

KeyRef parse_key_ref(const json& j, const std::string& db_id) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
    throw Error(ErrorKind::MalformedCatalog,
                "key reference in db '" + db_id + "' must be a [table, column] pair");
  }
  return KeyRef{j[0].get<std::string>(), j[1].get<std::string>()};
}

void validate_key(const DbSchema& schema, const KeyRef& key, const char* what) {
  const TableInfo* table = schema.find_table(key.table);
  if (table == nullptr || table->find_column(key.column) == nullptr) {
    throw Error(ErrorKind::DanglingKeyReference, std::string(what) + " (" + key.table + ", " +
                                                     key.column + ") in db '" + schema.db_id +
                                                     "' names a missing table or column");
  }
}

DbSchema parse_schema(const json& db) {
  DbSchema schema;
  if (!db.contains("db_id") || !db["db_id"].is_string()) {
    throw Error(ErrorKind::MalformedCatalog, "database entry without string db_id");
  }
  schema.db_id = db["db_id"].get<std::string>();

  std::set<std::string> table_names;
  for (const auto& jt : db.value("tables", json::array())) {
    TableInfo table;
    table.name = jt.at("name").get<std::string>();
    table.natural_name = jt.at("natural_name").get<std::string>();
    if (table.natural_name.empty()) {
      throw Error(ErrorKind::MalformedCatalog,
                  "table " + table.name + " in db '" + schema.db_id + "' has empty natural name");
    }
    if (!table_names.insert(to_upper(table.name)).second) {
      throw Error(ErrorKind::MalformedCatalog,
                  "duplicate table name " + table.name + " in db '" + schema.db_id + "'");
    }
    std::set<std::string> column_names;
    for (const auto& jc : jt.value("columns", json::array())) {
      ColumnInfo column;
      column.name = jc.at("name").get<std::string>();
      column.natural_name = jc.at("natural_name").get<std::string>();
      column.value_type = value_type_from_string(jc.value("type", "text"));
      if (column.natural_name.empty()) {
        throw Error(ErrorKind::MalformedCatalog, "column " + table.name + "." + column.name +
                                                     " in db '" + schema.db_id +
                                                     "' has empty natural name");
      }
      if (!column_names.insert(to_upper(column.name)).second) {
        throw Error(ErrorKind::MalformedCatalog, "duplicate column name " + column.name +
                                                     " in table " + table.name + " of db '" +
                                                     schema.db_id + "'");
      }
      table.columns.push_back(std::move(column));
    }
    schema.tables.push_back(std::move(table));
  }

  for (const auto& jk : db.value("primary_keys", json::array())) {
    KeyRef key = parse_key_ref(jk, schema.db_id);
    validate_key(schema, key, "primary key");
    schema.primary_keys.push_back(std::move(key));
  }
  for (const auto& jfk : db.value("foreign_keys", json::array())) {
    if (!jfk.is_array() || jfk.size() != 2) {
      throw Error(ErrorKind::MalformedCatalog,
                  "foreign key in db '" + schema.db_id + "' must be a pair of key references");
    }
    KeyRef from = parse_key_ref(jfk[0], schema.db_id);
    KeyRef to = parse_key_ref(jfk[1], schema.db_id);
    validate_key(schema, from, "foreign key");
    validate_key(schema, to, "foreign key");
    schema.foreign_keys.emplace_back(std::move(from), std::move(to));
  }
  return schema;
}

}  // namespace

Catalog load_catalog(std::istream& source) {
  json root;
  try {
    root = json::parse(source);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::MalformedCatalog, std::string("catalog parse failure: ") + e.what());
  }
  if (!root.is_object() || !root.contains("databases") || !root["databases"].is_array()) {
    throw Error(ErrorKind::MalformedCatalog, "catalog root must contain a 'databases' array");
  }
  Catalog catalog;
  try {
    for (const auto& db : root["databases"]) {
      DbSchema schema = parse_schema(db);
      std::string id = schema.db_id;
      if (!catalog.emplace(id, std::move(schema)).second) {
        throw Error(ErrorKind::DuplicateDbId, "duplicate db_id '" + id + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedCatalog, std::string("catalog structure error: ") + e.what());
  }
  return catalog;
}

Catalog load_catalog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open schema file " + path);
  return load_catalog(in);
}

std::pair<std::string, const ColumnInfo*> resolve_column(
    const DbSchema& schema, std::span<const std::string> tables_in_scope,
    std::string_view column_token) {
  std::string_view table_part;
  std::string_view column_part = column_token;
  if (auto dot = column_token.find('.'); dot != std::string_view::npos) {
    table_part = column_token.substr(0, dot);
    column_part = column_token.substr(dot + 1);
  }

  if (!table_part.empty()) {
    const TableInfo* table = schema.find_table(table_part);
    if (table == nullptr) {
      throw Error(ErrorKind::UnknownColumn,
                  "unknown table '" + std::string(table_part) + "' in qualified reference");
    }
    const ColumnInfo* column = table->find_column(column_part);
    if (column == nullptr) {
      throw Error(ErrorKind::UnknownColumn, "table " + table->name + " has no column '" +
                                                std::string(column_part) + "'");
    }
    return {table->name, column};
  }

  std::vector<std::pair<std::string, const ColumnInfo*>> hits;
  for (const auto& name : tables_in_scope) {
    const TableInfo* table = schema.find_table(name);
    if (table == nullptr) continue;
    if (const ColumnInfo* column = table->find_column(column_part)) {
      hits.emplace_back(table->name, column);
    }
  }
  if (hits.empty()) {
    throw Error(ErrorKind::UnknownColumn,
                "column '" + std::string(column_part) + "' not found in any in-scope table");
  }
  if (hits.size() > 1) {
    std::string candidates;
    for (const auto& [table, column] : hits) {
      if (!candidates.empty()) candidates += ", ";
      candidates += table + "." + column->name;
    }
    throw Error(ErrorKind::AmbiguousColumn,
                "column '" + std::string(column_part) + "' is ambiguous: " + candidates);
  }
  return hits.front();
}

std::string natural_name(const DbSchema& schema, std::string_view table) {
  const TableInfo* info = schema.find_table(table);
  if (info == nullptr) {
    throw Error(ErrorKind::UnknownReference, "unknown table '" + std::string(table) + "'");
  }
  return info->natural_name;
}

std::string natural_name(const DbSchema& schema, std::string_view table, std::string_view column) {
  const TableInfo* info = schema.find_table(table);
  if (info == nullptr) {
    throw Error(ErrorKind::UnknownReference, "unknown table '" + std::string(table) + "'");
  }
  const ColumnInfo* col = info->find_column(column);
  if (col == nullptr) {
    throw Error(ErrorKind::UnknownReference, "unknown column '" + std::string(table) + "." +
                                                 std::string(column) + "'");
  }
  return col->natural_name;
}

}  // namespace ezsql
