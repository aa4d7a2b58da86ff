#include "ezsql/passes.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ezsql/errors.hpp"
#include "ezsql/parser.hpp"
#include "ezsql/render.hpp"

namespace ezsql {

namespace {

constexpr std::string_view kForbiddenWords[] = {"union", "intersect", "except",
                                                "as",    "join",      "on"};

// keywords whose reappearance would re-trigger a phrase substitution
constexpr std::string_view kTriggerWords[] = {"union", "intersect", "except", "as",
                                              "join",  "on",        "from",   "distinct"};

int flag_for(SetOp op) {
  switch (op) {
    case SetOp::None: return 0;
    case SetOp::Union: return 1;
    case SetOp::Intersect: return 2;
    case SetOp::Except: return 3;
  }
  return 0;
}

QueryAst core_of(const QueryAst& ast) {
  QueryAst core = ast.clone();
  core.set_op = SetOp::None;
  core.set_rhs.reset();
  return core;
}

// Appends `extra` to `where` with AND semantics, splicing nested AND groups
// so merged conditions stay flat.
void conjoin(std::optional<Condition>& where, Condition extra) {
  if (!where) {
    where = std::move(extra);
    return;
  }
  Condition::Group group;
  group.op = BoolOp::And;
  auto splice = [&](Condition cond) {
    if (cond.is_group() && cond.group().op == BoolOp::And) {
      for (auto& child : cond.group().children) group.children.push_back(std::move(child));
    } else {
      group.children.push_back(std::move(cond));
    }
  };
  splice(std::move(*where));
  splice(std::move(extra));
  where = Condition(std::move(group));
}

bool projections_aggregate_free(const QueryAst& ast) {
  return std::all_of(ast.select.begin(), ast.select.end(),
                     [](const Expr& e) { return e.agg == AggFn::None; });
}

bool same_shape_outside_where(const QueryAst& a, const QueryAst& b) {
  QueryAst left = a.clone();
  QueryAst right = b.clone();
  left.where.reset();
  right.where.reset();
  return equal(left, right);
}

void for_each_column_ref(QueryAst& ast, const std::function<void(ColumnRef&)>& fn);

void for_each_column_ref(Condition& cond, const std::function<void(ColumnRef&)>& fn) {
  if (cond.is_comparison()) {
    Comparison& cmp = cond.comparison();
    if (!cmp.lhs.star) fn(cmp.lhs.column);
    if (cmp.rhs_kind == Comparison::RhsKind::Column) fn(cmp.rhs_column);
    // subqueries keep their own scope; their aliases are handled when the
    // subquery is lowered recursively
    return;
  }
  for (auto& child : cond.group().children) for_each_column_ref(child, fn);
}

void for_each_column_ref(QueryAst& ast, const std::function<void(ColumnRef&)>& fn) {
  for (auto& item : ast.select) {
    if (!item.star) fn(item.column);
  }
  for (auto& join : ast.joins) for_each_column_ref(join.on, fn);
  if (ast.where) for_each_column_ref(*ast.where, fn);
  for (auto& col : ast.group_by) fn(col);
  if (ast.having) for_each_column_ref(*ast.having, fn);
  for (auto& item : ast.order_by) {
    if (!item.expr.star) fn(item.expr.column);
  }
}

}  // namespace

// --- AliasMap ----------------------------------------------------------------

const std::string* AliasMap::original_for(std::string_view alias) const {
  for (const auto& [a, original] : entries) {
    if (iequals(a, alias)) return &original;
  }
  return nullptr;
}

// --- PassConfig ----------------------------------------------------------------

PassConfig PassConfig::defaults() {
  PassConfig config;
  config.keyword_phrasings = {
      {"from", "of the"},
      {"all", "all"},
      {"count", "count of"},
      {"count_distinct", "number of different"},
      {"distinct", "different"},
      {"sum", "sum of"},
      {"avg", "average of"},
      {"min", "minimum of"},
      {"max", "maximum of"},
      {"fewest", "with the fewest"},
      {"most", "with the most"},
      {"union_connective", "or also"},
      {"intersect_connective", "and also"},
  };
  return config;
}

const std::string& PassConfig::phrase(const std::string& key) const {
  auto it = keyword_phrasings.find(key);
  if (it == keyword_phrasings.end()) {
    throw Error(ErrorKind::InvalidConfig, "missing phrase table entry '" + key + "'");
  }
  return it->second;
}

void PassConfig::apply_overrides(const std::map<std::string, std::string>& overrides) {
  for (const auto& [key, phrase] : overrides) {
    if (phrase.empty()) {
      throw Error(ErrorKind::InvalidConfig, "phrase table entry '" + key + "' is empty");
    }
    std::string word;
    std::string lowered = to_lower(phrase) + " ";
    for (char c : lowered) {
      if (c == ' ') {
        for (std::string_view trigger : kTriggerWords) {
          if (word == trigger) {
            throw Error(ErrorKind::InvalidConfig, "phrase table entry '" + key +
                                                      "' contains trigger keyword '" + word + "'");
          }
        }
        word.clear();
      } else {
        word.push_back(c);
      }
    }
    keyword_phrasings[key] = phrase;
  }
}

// --- EzSqlDoc ----------------------------------------------------------------

std::string EzSqlDoc::text() const {
  std::string out;
  for (const auto& token : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += token.text;
  }
  return out;
}

// --- detect_set_operators ----------------------------------------------------

SplitResult detect_set_operators(const QueryAst& ast) {
  SplitResult result;
  const QueryAst* node = &ast;
  while (true) {
    result.subqueries.push_back(core_of(*node));
    if (node->set_op == SetOp::None) break;
    int flag = flag_for(node->set_op);
    if (result.nested_query_flag != 0 && result.nested_query_flag != flag) {
      throw Error(ErrorKind::MixedSetOperators,
                  std::string("set-operator chain mixes ") +
                      to_sql(static_cast<SetOp>(result.nested_query_flag)) + " and " +
                      to_sql(node->set_op));
    }
    result.nested_query_flag = flag;
    node = node->set_rhs.get();
  }
  return result;
}

// --- merge_subqueries --------------------------------------------------------

QueryAst merge_subqueries(SplitResult split) {
  if (split.nested_query_flag == 0) {
    if (split.subqueries.size() != 1) {
      throw Error(ErrorKind::PreconditionViolated, "flag 0 requires exactly one subquery");
    }
    return std::move(split.subqueries.front());
  }
  if (split.nested_query_flag != 1 && split.nested_query_flag != 2) {
    throw Error(ErrorKind::PreconditionViolated,
                "merge_subqueries handles flags 0-2; EXCEPT is lowered separately");
  }
  if (split.subqueries.size() < 2) {
    throw Error(ErrorKind::PreconditionViolated, "set-operator flag requires >= 2 subqueries");
  }

  const QueryAst& first = split.subqueries.front();
  for (const QueryAst& sub : split.subqueries) {
    if (!sub.group_by.empty() || sub.having || !sub.order_by.empty() || sub.limit) {
      throw Error(ErrorKind::UnmergeableSubqueries,
                  "subqueries with grouping, ordering, or limits cannot be condition-merged");
    }
    if (!projections_aggregate_free(sub)) {
      throw Error(ErrorKind::UnmergeableSubqueries,
                  "aggregate projections cannot be condition-merged");
    }
    if (!sub.where) {
      throw Error(ErrorKind::UnmergeableSubqueries,
                  "every subquery needs a WHERE clause to contribute a condition");
    }
    if (&sub != &first && !same_shape_outside_where(first, sub)) {
      throw Error(ErrorKind::UnmergeableSubqueries,
                  "subqueries differ outside their WHERE clauses");
    }
  }

  BoolOp op = split.nested_query_flag == 1 ? BoolOp::Or : BoolOp::And;
  Condition::Group group;
  group.op = op;
  for (QueryAst& sub : split.subqueries) {
    Condition cond = std::move(*sub.where);
    if (cond.is_group() && cond.group().op == op) {
      for (auto& child : cond.group().children) group.children.push_back(std::move(child));
    } else {
      group.children.push_back(std::move(cond));
    }
  }

  QueryAst merged = std::move(split.subqueries.front());
  merged.where = Condition(std::move(group));
  return merged;
}

// --- alias passes ------------------------------------------------------------

AliasMap extract_aliases(const QueryAst& ast) {
  AliasMap map;
  for (const auto& ref : ast.from) {
    if (!ref.alias.empty()) map.entries.emplace_back(ref.alias, ref.table);
  }
  for (const auto& join : ast.joins) {
    if (!join.table.alias.empty()) map.entries.emplace_back(join.table.alias, join.table.table);
  }
  return map;
}

QueryAst replace_aliases(QueryAst ast, const AliasMap& aliases) {
  std::set<std::string> table_names;
  for (const auto& ref : ast.from) table_names.insert(to_upper(ref.table));
  for (const auto& join : ast.joins) table_names.insert(to_upper(join.table.table));

  for_each_column_ref(ast, [&](ColumnRef& ref) {
    if (ref.table.empty()) return;
    if (const std::string* original = aliases.original_for(ref.table)) {
      ref.table = *original;
      return;
    }
    if (!table_names.count(to_upper(ref.table))) {
      throw Error(ErrorKind::UnknownAlias,
                  "qualifier '" + ref.table + "' is neither an alias nor a table in scope");
    }
  });

  // note self-join shapes where several aliases collapse onto one table
  std::map<std::string, std::vector<std::string>> by_table;
  for (const auto& [alias, original] : aliases.entries) {
    by_table[to_upper(original)].push_back(alias);
  }
  for (const auto& [table, names] : by_table) {
    if (names.size() < 2) continue;
    std::string note = "alias collapse:";
    for (const auto& name : names) note += " " + name;
    note += " -> " + *aliases.original_for(names.front());
    ast.notes.push_back(std::move(note));
  }
  return ast;
}

QueryAst strip_as_keywords(QueryAst ast) {
  for (auto& ref : ast.from) ref.alias.clear();
  for (auto& join : ast.joins) join.table.alias.clear();
  return ast;
}

// --- lower_except ------------------------------------------------------------

namespace {

// The lowering key must be a plain column projected identically on both
// sides; anything else (star, aggregates, multiple items) has no NOT IN
// equivalent in the subset.
const ColumnRef* liftable_key(const QueryAst& ast) {
  if (ast.select.size() != 1) return nullptr;
  const Expr& item = ast.select.front();
  if (item.agg != AggFn::None || item.star) return nullptr;
  return &item.column;
}

}  // namespace

QueryAst lower_except(QueryAst ast) {
  if (ast.set_op != SetOp::Except) {
    throw Error(ErrorKind::PreconditionViolated, "lower_except requires a top-level EXCEPT");
  }
  SplitResult split = detect_set_operators(ast);

  const ColumnRef* key = liftable_key(split.subqueries.front());
  if (key == nullptr) {
    throw Error(ErrorKind::UnliftableExcept,
                "EXCEPT is liftable only for a single plain-column projection");
  }
  for (std::size_t i = 1; i < split.subqueries.size(); ++i) {
    const ColumnRef* other = liftable_key(split.subqueries[i]);
    if (other == nullptr || !iequals(other->column, key->column)) {
      throw Error(ErrorKind::UnliftableExcept,
                  "EXCEPT sides do not share a single projected column");
    }
  }

  QueryAst result = std::move(split.subqueries.front());
  for (std::size_t i = 1; i < split.subqueries.size(); ++i) {
    Comparison not_in;
    not_in.lhs.column = *key;
    not_in.op = CmpOp::NotIn;
    not_in.rhs_kind = Comparison::RhsKind::Subquery;
    not_in.subquery = std::make_unique<QueryAst>(std::move(split.subqueries[i]));
    conjoin(result.where, Condition(std::move(not_in)));
  }
  return result;
}

// --- eliminate_joins ---------------------------------------------------------

namespace {

bool is_key_equality(const Condition& cond, const DbSchema& schema) {
  if (!cond.is_comparison()) return false;
  const Comparison& cmp = cond.comparison();
  if (cmp.op != CmpOp::Eq || cmp.rhs_kind != Comparison::RhsKind::Column) return false;
  if (cmp.lhs.agg != AggFn::None || cmp.lhs.star) return false;
  const ColumnRef& left = cmp.lhs.column;
  const ColumnRef& right = cmp.rhs_column;
  if (left.table.empty() || right.table.empty()) return false;
  if (iequals(left.table, right.table)) return false;
  if (schema.is_foreign_key_pair(left.table, left.column, right.table, right.column)) return true;
  // no FK metadata: an equality bridging two different tables still reads as
  // a key join, so it is dropped rather than narrated
  return true;
}

}  // namespace

JoinElimination eliminate_joins_detailed(QueryAst ast, const DbSchema& schema) {
  JoinElimination result;
  std::vector<Condition> relocated;

  for (auto& join : ast.joins) {
    ast.from.push_back(join.table);
    Condition on = std::move(join.on);

    std::vector<Condition> conjuncts;
    if (on.is_group() && on.group().op == BoolOp::And) {
      for (auto& child : on.group().children) conjuncts.push_back(std::move(child));
    } else {
      conjuncts.push_back(std::move(on));
    }

    std::vector<Condition> kept;
    for (auto& conjunct : conjuncts) {
      if (is_key_equality(conjunct, schema)) {
        result.dropped_key_joins.push_back(std::move(conjunct));
      } else {
        kept.push_back(std::move(conjunct));
      }
    }
    if (kept.size() == 1) {
      relocated.push_back(std::move(kept.front()));
    } else if (kept.size() > 1) {
      Condition::Group group;
      group.op = BoolOp::And;
      group.children = std::move(kept);
      relocated.emplace_back(std::move(group));
    }
  }
  ast.joins.clear();

  for (auto& cond : relocated) conjoin(ast.where, std::move(cond));
  result.ast = std::move(ast);
  return result;
}

QueryAst eliminate_joins(QueryAst ast, const DbSchema& schema) {
  return eliminate_joins_detailed(std::move(ast), schema).ast;
}

// --- naturalize ----------------------------------------------------------------

namespace {

class DocEmitter {
public:
  DocEmitter(const QueryAst& ast, const DbSchema& schema, const PassConfig& config)
      : ast_(ast), schema_(schema), config_(config) {
    for (const auto& ref : ast.from) scope_.push_back(ref.table);
  }

  EzSqlDoc emit() {
    doc_.notes = ast_.notes;

    std::size_t begin = doc_.tokens.size();
    emit_select_and_from();
    label(ClauseLabel::Projection, begin);

    if (ast_.where) {
      begin = doc_.tokens.size();
      word("where");
      condition(*ast_.where);
      label(ClauseLabel::Condition, begin);
    }
    if (!ast_.group_by.empty()) {
      begin = doc_.tokens.size();
      word("group");
      word("by");
      for (std::size_t i = 0; i < ast_.group_by.size(); ++i) {
        if (i) word(",");
        column(ast_.group_by[i]);
      }
      label(ClauseLabel::Grouping, begin);
    }
    if (ast_.having) {
      begin = doc_.tokens.size();
      word("having");
      condition(*ast_.having);
      label(ClauseLabel::Condition, begin);
      doc_.notes.push_back("having clause passed through without rephrasing");
    }
    emit_ordering_and_limit();
    return std::move(doc_);
  }

private:
  void word(std::string text, std::optional<Span> source = std::nullopt) {
    doc_.tokens.push_back(EzToken{std::move(text), source});
  }

  void phrase(const std::string& key, std::optional<Span> source = std::nullopt) {
    const std::string& text = config_.phrase(key);
    std::string current;
    for (char c : text + " ") {
      if (c == ' ') {
        if (!current.empty()) word(current, source);
        current.clear();
      } else {
        current.push_back(c);
      }
    }
  }

  void label(ClauseLabel l, std::size_t begin) {
    if (doc_.tokens.size() > begin) {
      doc_.clause_spans.push_back(ClauseSpan{l, begin, doc_.tokens.size()});
    }
  }

  // natural name lookup; qualifies with the table's natural name when the
  // bare column name appears in more than one in-scope table
  void column(const ColumnRef& ref) {
    std::vector<const TableInfo*> owners;
    for (const auto& name : scope_) {
      const TableInfo* table = schema_.find_table(name);
      if (table == nullptr) {
        throw Error(ErrorKind::UnknownReference, "table '" + name + "' not in schema");
      }
      if (table->find_column(ref.column) != nullptr &&
          std::find(owners.begin(), owners.end(), table) == owners.end()) {
        owners.push_back(table);
      }
    }

    const TableInfo* owner = nullptr;
    if (!ref.table.empty()) {
      owner = schema_.find_table(ref.table);
      if (owner == nullptr || owner->find_column(ref.column) == nullptr) {
        throw Error(ErrorKind::UnknownReference,
                    "unknown column reference " + ref.table + "." + ref.column);
      }
    } else if (owners.size() == 1) {
      owner = owners.front();
    } else if (owners.empty()) {
      throw Error(ErrorKind::UnknownReference, "unknown column reference " + ref.column);
    } else {
      owner = owners.front();
    }

    std::size_t distinct_owners = owners.size();
    if (distinct_owners > 1) emit_words(owner->natural_name, ref.span);
    emit_words(owner->find_column(ref.column)->natural_name, ref.span);
  }

  void emit_words(const std::string& text, std::optional<Span> source) {
    std::string current;
    for (char c : text + " ") {
      if (c == ' ') {
        if (!current.empty()) word(current, source);
        current.clear();
      } else {
        current.push_back(c);
      }
    }
  }

  void expr(const Expr& e) {
    switch (e.agg) {
      case AggFn::None:
        if (e.star) {
          phrase("all", e.span);
        } else {
          column(e.column);
        }
        return;
      case AggFn::Count:
        if (e.star) {
          phrase("count", e.span);
        } else if (e.distinct_arg) {
          phrase("count_distinct", e.span);
          column(e.column);
        } else {
          phrase("count", e.span);
          column(e.column);
        }
        return;
      case AggFn::Sum: phrase("sum", e.span); column(e.column); return;
      case AggFn::Avg: phrase("avg", e.span); column(e.column); return;
      case AggFn::Min: phrase("min", e.span); column(e.column); return;
      case AggFn::Max: phrase("max", e.span); column(e.column); return;
    }
  }

  void literal(const Value& v) { word(render_value(v), v.span); }

  void comparison(const Comparison& cmp) {
    expr(cmp.lhs);
    switch (cmp.op) {
      case CmpOp::Like: word("like"); break;
      case CmpOp::In: word("in"); break;
      case CmpOp::NotIn: word("not"); word("in"); break;
      case CmpOp::Between: word("between"); break;
      default: word(to_sql(cmp.op)); break;
    }
    switch (cmp.rhs_kind) {
      case Comparison::RhsKind::Literal:
        literal(cmp.literal);
        if (cmp.op == CmpOp::Between) {
          word("and");
          literal(cmp.between_high);
        }
        break;
      case Comparison::RhsKind::Column:
        column(cmp.rhs_column);
        break;
      case Comparison::RhsKind::LiteralList: {
        word("(");
        for (std::size_t i = 0; i < cmp.literal_list.size(); ++i) {
          if (i) word(",");
          literal(cmp.literal_list[i]);
        }
        word(")");
        break;
      }
      case Comparison::RhsKind::Subquery: {
        // flatten: lower the nested query through the full pipeline and
        // inline its words in parentheses
        EzSqlDoc inner = transpile_ast(*cmp.subquery, schema_, config_);
        word("(");
        for (auto& token : inner.tokens) doc_.tokens.push_back(std::move(token));
        word(")");
        for (auto& note : inner.notes) doc_.notes.push_back(std::move(note));
        break;
      }
    }
  }

  void condition(const Condition& cond, bool nested = false) {
    if (cond.is_comparison()) {
      comparison(cond.comparison());
      return;
    }
    const auto& group = cond.group();
    if (nested) word("(");
    for (std::size_t i = 0; i < group.children.size(); ++i) {
      if (i) word(group.op == BoolOp::And ? "and" : "or");
      condition(group.children[i], true);
    }
    if (nested) word(")");
  }

  void emit_select_and_from() {
    if (ast_.distinct) phrase("distinct");
    for (std::size_t i = 0; i < ast_.select.size(); ++i) {
      if (i) word(",");
      expr(ast_.select[i]);
    }
    phrase("from");
    std::vector<const TableRef*> unique;
    for (const auto& ref : ast_.from) {
      bool seen = std::any_of(unique.begin(), unique.end(), [&](const TableRef* t) {
        return iequals(t->table, ref.table);
      });
      if (!seen) unique.push_back(&ref);
    }
    for (std::size_t i = 0; i < unique.size(); ++i) {
      if (i) word("and");
      const TableInfo* table = schema_.find_table(unique[i]->table);
      if (table == nullptr) {
        throw Error(ErrorKind::UnknownReference, "table '" + unique[i]->table + "' not in schema");
      }
      emit_words(table->natural_name, unique[i]->span);
    }
  }

  void emit_ordering_and_limit() {
    bool superlative = config_.enable_superlative_naturalization && ast_.order_by.size() == 1 &&
                       ast_.limit && *ast_.limit == 1;
    if (superlative) {
      std::size_t begin = doc_.tokens.size();
      phrase(ast_.order_by.front().descending ? "most" : "fewest");
      expr(ast_.order_by.front().expr);
      label(ClauseLabel::Ordering, begin);
      return;
    }
    if (!ast_.order_by.empty()) {
      std::size_t begin = doc_.tokens.size();
      word("order");
      word("by");
      for (std::size_t i = 0; i < ast_.order_by.size(); ++i) {
        if (i) word(",");
        expr(ast_.order_by[i].expr);
        if (ast_.order_by[i].descending) word("desc");
      }
      label(ClauseLabel::Ordering, begin);
    }
    if (ast_.limit) {
      std::size_t begin = doc_.tokens.size();
      word("limit");
      word(std::to_string(*ast_.limit));
      label(ClauseLabel::Limit, begin);
    }
  }

  const QueryAst& ast_;
  const DbSchema& schema_;
  const PassConfig& config_;
  std::vector<std::string> scope_;
  EzSqlDoc doc_;
};

}  // namespace

EzSqlDoc naturalize(const QueryAst& ast, const DbSchema& schema, const PassConfig& config) {
  if (ast.set_op != SetOp::None) {
    throw Error(ErrorKind::PreconditionViolated, "naturalize requires set operators removed");
  }
  if (!ast.joins.empty()) {
    throw Error(ErrorKind::PreconditionViolated, "naturalize requires JOIN syntax removed");
  }
  for (const auto& ref : ast.from) {
    if (!ref.alias.empty()) {
      throw Error(ErrorKind::PreconditionViolated, "naturalize requires aliases removed");
    }
  }
  return DocEmitter(ast, schema, config).emit();
}

// --- pipeline ----------------------------------------------------------------

namespace {

template <typename Fn>
auto run_pass(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (Error& e) {
    e.set_pass(name);
    throw;
  }
}

EzSqlDoc lower_single(QueryAst query, const DbSchema& schema, const PassConfig& config) {
  AliasMap aliases = run_pass("extract_aliases", [&] { return extract_aliases(query); });
  query = run_pass("replace_aliases",
                   [&] { return replace_aliases(std::move(query), aliases); });
  query = run_pass("strip_as_keywords", [&] { return strip_as_keywords(std::move(query)); });
  query = run_pass("eliminate_joins", [&] { return eliminate_joins(std::move(query), schema); });
  return run_pass("naturalize", [&] { return naturalize(query, schema, config); });
}

void append_doc(EzSqlDoc& target, EzSqlDoc piece) {
  std::size_t offset = target.tokens.size();
  for (auto& token : piece.tokens) target.tokens.push_back(std::move(token));
  for (auto& span : piece.clause_spans) {
    target.clause_spans.push_back(ClauseSpan{span.label, span.begin + offset, span.end + offset});
  }
  for (auto& note : piece.notes) target.notes.push_back(std::move(note));
}

}  // namespace

EzSqlDoc transpile_ast(const QueryAst& ast, const DbSchema& schema, const PassConfig& config) {
  SplitResult split = run_pass("detect_set_operators", [&] { return detect_set_operators(ast); });

  if (split.nested_query_flag == 3) {
    QueryAst lowered = run_pass("lower_except", [&] { return lower_except(ast.clone()); });
    return lower_single(std::move(lowered), schema, config);
  }

  if (split.nested_query_flag == 0) {
    return lower_single(std::move(split.subqueries.front()), schema, config);
  }

  // UNION / INTERSECT: condition-merge when possible, otherwise lower each
  // side independently and concatenate with a connective phrase
  bool mergeable = true;
  QueryAst merged;
  try {
    SplitResult copy;
    copy.nested_query_flag = split.nested_query_flag;
    for (const auto& sub : split.subqueries) copy.subqueries.push_back(sub.clone());
    merged = merge_subqueries(std::move(copy));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnmergeableSubqueries) {
      Error tagged = e;
      tagged.set_pass("merge_subqueries");
      throw tagged;
    }
    mergeable = false;
  }
  if (mergeable) {
    return lower_single(std::move(merged), schema, config);
  }

  EzSqlDoc doc;
  const std::string connective_key =
      split.nested_query_flag == 1 ? "union_connective" : "intersect_connective";
  for (std::size_t i = 0; i < split.subqueries.size(); ++i) {
    if (i) {
      std::string current;
      for (char c : config.phrase(connective_key) + " ") {
        if (c == ' ') {
          if (!current.empty()) doc.tokens.push_back(EzToken{current, std::nullopt});
          current.clear();
        } else {
          current.push_back(c);
        }
      }
    }
    append_doc(doc, transpile_ast(split.subqueries[i], schema, config));
  }
  return doc;
}

EzSqlDoc transpile(std::string_view sql, const std::string& db_id, const Catalog& catalog,
                   const PassConfig& config) {
  auto it = catalog.find(db_id);
  if (it == catalog.end()) {
    Error e(ErrorKind::UnknownReference, "db_id '" + db_id + "' not found in catalog");
    e.set_pass("catalog");
    throw e;
  }
  QueryAst ast = run_pass("parse", [&] { return parse_query(sql); });
  return transpile_ast(ast, it->second, config);
}

// --- reporting helpers -------------------------------------------------------

LengthStats length_stats(std::span<const Token> sql_tokens,
                         std::span<const EzToken> ezsql_tokens) {
  if (sql_tokens.empty() || ezsql_tokens.empty()) {
    throw Error(ErrorKind::PreconditionViolated, "length_stats requires non-empty sequences");
  }
  LengthStats stats;
  stats.sql_tokens = sql_tokens.size();
  stats.ezsql_tokens = ezsql_tokens.size();
  stats.reduction_ratio =
      1.0 - static_cast<double>(stats.ezsql_tokens) / static_cast<double>(stats.sql_tokens);
  return stats;
}

std::vector<std::string> forbidden_tokens_in(const EzSqlDoc& doc, const AliasMap& aliases) {
  std::vector<std::string> offending;
  for (const auto& token : doc.tokens) {
    if (token.text.empty()) continue;
    if (token.text.front() == '\'' || token.text.front() == '"') continue;  // literal
    std::string lowered = to_lower(token.text);
    for (std::string_view word : kForbiddenWords) {
      if (lowered == word) offending.push_back(token.text);
    }
    for (const auto& [alias, original] : aliases.entries) {
      if (iequals(token.text, alias)) offending.push_back(token.text);
    }
  }
  return offending;
}

std::vector<std::string> retrigger_tokens_in(const EzSqlDoc& doc) {
  std::vector<std::string> offending;
  for (const auto& token : doc.tokens) {
    if (token.text.empty()) continue;
    if (token.text.front() == '\'' || token.text.front() == '"') continue;
    std::string lowered = to_lower(token.text);
    for (std::string_view word : kTriggerWords) {
      if (lowered == word) offending.push_back(token.text);
    }
    if (lowered.find("count(") != std::string::npos) offending.push_back(token.text);
  }
  return offending;
}

}  // namespace ezsql
