#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <type_traits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "discern/corpus.hpp"
#include "discern/tables.hpp"

namespace discern {

enum class ValueKind { Rows, Relation, Str, Num, Date, StrSet, NumSet, DateSet };

inline const char* kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::Rows: return "Rows";
    case ValueKind::Relation: return "Relation";
    case ValueKind::Str: return "Str";
    case ValueKind::Num: return "Num";
    case ValueKind::Date: return "Date";
    case ValueKind::StrSet: return "StrSet";
    case ValueKind::NumSet: return "NumSet";
    case ValueKind::DateSet: return "DateSet";
  }
  return "?";
}

struct FunctionSpec {
  std::string name;
  std::vector<ValueKind> arg_kinds;
  ValueKind ret_kind;
};

inline const std::vector<FunctionSpec>& function_inventory() {
  using K = ValueKind;
  static const std::vector<FunctionSpec> inventory = {
      {"count", {K::Rows}, K::Num},
      {"filter_number_greater", {K::Rows, K::Relation, K::Num}, K::Rows},
      {"filter_number_lesser", {K::Rows, K::Relation, K::Num}, K::Rows},
      {"filter_number_equals", {K::Rows, K::Relation, K::Num}, K::Rows},
      {"filter_date_greater", {K::Rows, K::Relation, K::Date}, K::Rows},
      {"filter_date_lesser", {K::Rows, K::Relation, K::Date}, K::Rows},
      {"filter_date_equals", {K::Rows, K::Relation, K::Date}, K::Rows},
      {"filter_string_contains", {K::Rows, K::Relation, K::Str}, K::Rows},
      {"argmax_number", {K::Rows, K::Relation}, K::Rows},
      {"argmin_number", {K::Rows, K::Relation}, K::Rows},
      {"select_string", {K::Rows, K::Relation}, K::StrSet},
      {"select_number", {K::Rows, K::Relation}, K::NumSet},
      {"select_date", {K::Rows, K::Relation}, K::DateSet},
      {"sum", {K::NumSet}, K::Num},
      {"diff", {K::Num, K::Num}, K::Num},
      {"plus", {K::Num, K::Num}, K::Num},
      {"max", {K::NumSet}, K::Num},
      {"min", {K::NumSet}, K::Num},
      {"first_by_date", {K::Rows, K::Relation}, K::Rows},
      {"last_by_date", {K::Rows, K::Relation}, K::Rows},
  };
  return inventory;
}

inline const FunctionSpec* find_function(std::string_view name) {
  for (const auto& f : function_inventory())
    if (f.name == name) return &f;
  return nullptr;
}

struct LogicalForm;
using LFPtr = std::shared_ptr<const LogicalForm>;

/// Immutable expression tree. Leaves are constants; internal nodes apply an
/// inventory function. Depth counts application nesting, leaves are 0.
struct LogicalForm {
  enum class Tag { Apply, AllRows, RelationLeaf, StrLeaf, NumLeaf, DateLeaf };

  Tag tag = Tag::AllRows;
  const FunctionSpec* fn = nullptr;
  std::vector<LFPtr> children;
  std::string atom;  // relation name or string payload
  Decimal number;
  Date date;
  ValueKind kind = ValueKind::Rows;
  int depth = 0;
};

inline LFPtr lf_all_rows() {
  auto n = std::make_shared<LogicalForm>();
  n->tag = LogicalForm::Tag::AllRows;
  n->kind = ValueKind::Rows;
  return n;
}

inline LFPtr lf_relation(std::string name) {
  auto n = std::make_shared<LogicalForm>();
  n->tag = LogicalForm::Tag::RelationLeaf;
  n->kind = ValueKind::Relation;
  n->atom = std::move(name);
  return n;
}

inline LFPtr lf_str(std::string s) {
  auto n = std::make_shared<LogicalForm>();
  n->tag = LogicalForm::Tag::StrLeaf;
  n->kind = ValueKind::Str;
  n->atom = std::move(s);
  return n;
}

inline LFPtr lf_num(Decimal v) {
  auto n = std::make_shared<LogicalForm>();
  n->tag = LogicalForm::Tag::NumLeaf;
  n->kind = ValueKind::Num;
  n->number = std::move(v);
  return n;
}

inline LFPtr lf_date(Date d) {
  auto n = std::make_shared<LogicalForm>();
  n->tag = LogicalForm::Tag::DateLeaf;
  n->kind = ValueKind::Date;
  n->date = d;
  return n;
}

inline LFPtr lf_apply(const FunctionSpec* fn, std::vector<LFPtr> children) {
  if (!fn) throw TypeError("null function in application");
  if (children.size() != fn->arg_kinds.size())
    throw TypeError(fn->name + " expects " + std::to_string(fn->arg_kinds.size()) +
                    " arguments, got " + std::to_string(children.size()));
  int depth = 0;
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (!children[i]) throw TypeError("null argument to " + fn->name);
    if (children[i]->kind != fn->arg_kinds[i])
      throw TypeError(fn->name + " argument " + std::to_string(i + 1) + " must be " +
                      kind_name(fn->arg_kinds[i]) + ", got " +
                      kind_name(children[i]->kind));
    depth = std::max(depth, children[i]->depth);
  }
  auto n = std::make_shared<LogicalForm>();
  n->tag = LogicalForm::Tag::Apply;
  n->fn = fn;
  n->children = std::move(children);
  n->kind = fn->ret_kind;
  n->depth = depth + 1;
  return n;
}

// ---------------------------------------------------------------------------
// Canonical s-expression form

namespace detail {
inline void print_lf_into(const LogicalForm& lf, std::string& out) {
  switch (lf.tag) {
    case LogicalForm::Tag::AllRows:
      out += "all_rows";
      return;
    case LogicalForm::Tag::RelationLeaf:
      out += lf.atom;
      return;
    case LogicalForm::Tag::StrLeaf:
      out.push_back('"');
      for (char c : lf.atom) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      out.push_back('"');
      return;
    case LogicalForm::Tag::NumLeaf:
      out += lf.number.str();
      return;
    case LogicalForm::Tag::DateLeaf: {
      // (date YEAR [MONTH [DAY]]); absent leading fields print as "_",
      // absent trailing fields are omitted.
      out += "(date";
      const LogicalForm& d = lf;
      bool need_day = d.date.day.has_value();
      bool need_month = d.date.month.has_value() || need_day;
      out.push_back(' ');
      out += d.date.year ? std::to_string(*d.date.year) : "_";
      if (need_month) {
        out.push_back(' ');
        out += d.date.month ? std::to_string(*d.date.month) : "_";
      }
      if (need_day) {
        out.push_back(' ');
        out += std::to_string(*d.date.day);
      }
      out.push_back(')');
      return;
    }
    case LogicalForm::Tag::Apply: {
      out.push_back('(');
      out += lf.fn->name;
      for (const auto& child : lf.children) {
        out.push_back(' ');
        print_lf_into(*child, out);
      }
      out.push_back(')');
      return;
    }
  }
}
}  // namespace detail

/// Relation names print bare; names that collide with literal syntax
/// (numbers, "all_rows") do not round-trip and are rejected nowhere: the
/// fixed pattern-table columns never collide.
inline std::string print_lf(const LogicalForm& lf) {
  std::string out;
  detail::print_lf_into(lf, out);
  return out;
}

inline std::string print_lf(const LFPtr& lf) { return print_lf(*lf); }

namespace detail {

struct SexprLexer {
  std::string_view text;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }

  bool done() {
    skip_space();
    return pos >= text.size();
  }

  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }

  // Token kinds: "(", ")", quoted string (returns unescaped payload with
  // leading marker '\"'), bare atom.
  std::string next() {
    skip_space();
    if (pos >= text.size()) throw ParseError("logical form: unexpected end of input");
    char c = text[pos];
    if (c == '(' || c == ')') {
      ++pos;
      return std::string(1, c);
    }
    if (c == '"') {
      std::string out = "\"";
      ++pos;
      while (pos < text.size() && text[pos] != '"') {
        if (text[pos] == '\\') {
          ++pos;
          if (pos >= text.size()) break;
        }
        out.push_back(text[pos]);
        ++pos;
      }
      if (pos >= text.size()) throw ParseError("logical form: unterminated string");
      ++pos;
      return out;
    }
    std::size_t b = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != '"')
      ++pos;
    return std::string(text.substr(b, pos - b));
  }
};

inline LFPtr parse_lf_expr(SexprLexer& lex) {
  std::string tok = lex.next();
  if (tok == ")") throw ParseError("logical form: unexpected ')'");
  if (tok == "(") {
    std::string head = lex.next();
    if (head == "(" || head == ")" || (!head.empty() && head[0] == '"'))
      throw ParseError("logical form: expected a function name after '('");
    if (head == "date") {
      std::optional<int> fields[3];  // year, month, day
      std::size_t n = 0;
      while (lex.peek() != ')') {
        std::string atom = lex.next();
        if (atom == "(" || (!atom.empty() && atom[0] == '"'))
          throw ParseError("logical form: malformed date literal");
        if (n >= 3) throw ParseError("logical form: date literal takes at most 3 fields");
        if (atom != "_") {
          if (!all_digits(atom))
            throw ParseError("logical form: date field must be an integer or '_'");
          fields[n] = std::stoi(atom);
        }
        ++n;
      }
      lex.next();  // ')'
      if (n == 0) throw ParseError("logical form: empty date literal");
      Date d{fields[2], fields[1], fields[0]};
      if (!d.valid()) throw ParseError("logical form: invalid date literal");
      return lf_date(d);
    }
    const FunctionSpec* fn = find_function(head);
    if (!fn) throw ParseError("logical form: unknown function \"" + head + "\"");
    std::vector<LFPtr> children;
    while (lex.peek() != ')') children.push_back(parse_lf_expr(lex));
    lex.next();  // ')'
    return lf_apply(fn, std::move(children));
  }
  if (!tok.empty() && tok[0] == '"') return lf_str(tok.substr(1));
  if (tok == "all_rows") return lf_all_rows();
  if (auto num = Decimal::parse(tok)) return lf_num(*num);
  return lf_relation(tok);
}

}  // namespace detail

/// Parses the canonical s-expression form; throws ParseError on syntax
/// problems and TypeError on ill-typed applications.
inline LFPtr parse_lf(std::string_view text) {
  detail::SexprLexer lex{text};
  LFPtr lf = detail::parse_lf_expr(lex);
  if (!lex.done()) throw ParseError("logical form: trailing input after expression");
  return lf;
}

// ---------------------------------------------------------------------------
// Execution

struct Value {
  ValueKind kind = ValueKind::Rows;
  std::vector<std::size_t> rows;  // indices into the table's row list
  std::string relation;
  std::string str;
  Decimal num;
  Date date;
  std::vector<std::string> str_set;  // order-preserving, deduplicated
  std::vector<Decimal> num_set;
  std::vector<Date> date_set;
};

namespace detail {

inline const Cell* row_cell(const PredArgTable& table, std::size_t row,
                            const std::string& relation) {
  return table.rows[row].cell(relation);
}

template <typename Pred>
inline Value filter_rows(const PredArgTable& table, const Value& in,
                         const std::string& relation, Pred keep) {
  Value out;
  out.kind = ValueKind::Rows;
  for (std::size_t idx : in.rows) {
    const Cell* c = row_cell(table, idx, relation);
    if (c && keep(*c)) out.rows.push_back(idx);
  }
  return out;
}

template <typename Key>
inline Value extremum_rows(const PredArgTable& table, const Value& in,
                           const std::string& relation, Key key, bool want_max) {
  using KeyType = std::decay_t<decltype(*key(std::declval<const Cell&>()))>;
  std::vector<std::pair<std::size_t, KeyType>> typed;
  for (std::size_t idx : in.rows) {
    const Cell* c = row_cell(table, idx, relation);
    if (!c) continue;
    if (auto k = key(*c)) typed.emplace_back(idx, *k);
  }
  Value out;
  out.kind = ValueKind::Rows;
  if (typed.empty()) return out;
  KeyType best = typed.front().second;
  for (const auto& [idx, k] : typed)
    if (want_max ? best < k : k < best) best = k;
  for (const auto& [idx, k] : typed)
    if (k == best) out.rows.push_back(idx);
  return out;
}

}  // namespace detail

/// Applies one inventory function to already-evaluated arguments.
inline Value evaluate_call(const FunctionSpec& fn, const std::vector<Value>& args,
                           const PredArgTable& table) {
  const std::string& name = fn.name;
  Value out;

  if (name == "count") {
    out.kind = ValueKind::Num;
    out.num = Decimal(static_cast<long long>(args[0].rows.size()));
    return out;
  }
  if (name == "filter_number_greater" || name == "filter_number_lesser" ||
      name == "filter_number_equals") {
    const Decimal& lit = args[2].num;
    return detail::filter_rows(table, args[0], args[1].relation, [&](const Cell& c) {
      if (!c.number) return false;
      if (name == "filter_number_greater") return *c.number > lit;
      if (name == "filter_number_lesser") return *c.number < lit;
      return *c.number == lit;
    });
  }
  if (name == "filter_date_greater" || name == "filter_date_lesser" ||
      name == "filter_date_equals") {
    const Date& lit = args[2].date;
    return detail::filter_rows(table, args[0], args[1].relation, [&](const Cell& c) {
      if (!c.date) return false;
      if (name == "filter_date_greater") return date_less(lit, *c.date);
      if (name == "filter_date_lesser") return date_less(*c.date, lit);
      return *c.date == lit;
    });
  }
  if (name == "filter_string_contains") {
    std::string needle = detail::to_lower(args[2].str);
    return detail::filter_rows(table, args[0], args[1].relation, [&](const Cell& c) {
      return detail::to_lower(c.text).find(needle) != std::string::npos;
    });
  }
  if (name == "argmax_number" || name == "argmin_number") {
    return detail::extremum_rows(
        table, args[0], args[1].relation,
        [](const Cell& c) { return c.number; }, name == "argmax_number");
  }
  if (name == "first_by_date" || name == "last_by_date") {
    return detail::extremum_rows(
        table, args[0], args[1].relation,
        [](const Cell& c) -> std::optional<std::tuple<int, int, int>> {
          if (!c.date) return std::nullopt;
          return date_sort_key(*c.date);
        },
        name == "last_by_date");
  }
  if (name == "select_string" || name == "select_number" || name == "select_date") {
    const std::string& relation = args[1].relation;
    if (name == "select_string") {
      out.kind = ValueKind::StrSet;
      for (std::size_t idx : args[0].rows) {
        const Cell* c = detail::row_cell(table, idx, relation);
        if (!c) continue;
        if (std::find(out.str_set.begin(), out.str_set.end(), c->text) ==
            out.str_set.end())
          out.str_set.push_back(c->text);
      }
    } else if (name == "select_number") {
      out.kind = ValueKind::NumSet;
      for (std::size_t idx : args[0].rows) {
        const Cell* c = detail::row_cell(table, idx, relation);
        if (!c || !c->number) continue;
        if (std::find(out.num_set.begin(), out.num_set.end(), *c->number) ==
            out.num_set.end())
          out.num_set.push_back(*c->number);
      }
    } else {
      out.kind = ValueKind::DateSet;
      for (std::size_t idx : args[0].rows) {
        const Cell* c = detail::row_cell(table, idx, relation);
        if (!c || !c->date) continue;
        if (std::find(out.date_set.begin(), out.date_set.end(), *c->date) ==
            out.date_set.end())
          out.date_set.push_back(*c->date);
      }
    }
    return out;
  }
  if (name == "sum") {
    out.kind = ValueKind::Num;
    for (const auto& v : args[0].num_set) out.num = out.num + v;
    return out;
  }
  if (name == "max" || name == "min") {
    if (args[0].num_set.empty())
      throw ExecutionError(name + " of an empty number set");
    out.kind = ValueKind::Num;
    out.num = args[0].num_set.front();
    for (const auto& v : args[0].num_set)
      if (name == "max" ? out.num < v : v < out.num) out.num = v;
    return out;
  }
  if (name == "diff" || name == "plus") {
    out.kind = ValueKind::Num;
    out.num = name == "diff" ? args[0].num - args[1].num : args[0].num + args[1].num;
    return out;
  }
  throw ExecutionError("no evaluator for function \"" + name + "\"");
}

/// Deterministic bottom-up evaluation against one table.
inline Value execute(const LogicalForm& lf, const PredArgTable& table) {
  Value out;
  switch (lf.tag) {
    case LogicalForm::Tag::AllRows:
      out.kind = ValueKind::Rows;
      for (std::size_t i = 0; i < table.rows.size(); ++i) out.rows.push_back(i);
      return out;
    case LogicalForm::Tag::RelationLeaf:
      if (!table.has_relation(lf.atom))
        throw ExecutionError("relation \"" + lf.atom + "\" is not a column of table \"" +
                             table.passage_id + "\"");
      out.kind = ValueKind::Relation;
      out.relation = lf.atom;
      return out;
    case LogicalForm::Tag::StrLeaf:
      out.kind = ValueKind::Str;
      out.str = lf.atom;
      return out;
    case LogicalForm::Tag::NumLeaf:
      out.kind = ValueKind::Num;
      out.num = lf.number;
      return out;
    case LogicalForm::Tag::DateLeaf:
      out.kind = ValueKind::Date;
      out.date = lf.date;
      return out;
    case LogicalForm::Tag::Apply: {
      std::vector<Value> args;
      args.reserve(lf.children.size());
      for (const auto& child : lf.children) args.push_back(execute(*child, table));
      return evaluate_call(*lf.fn, args, table);
    }
  }
  throw ExecutionError("unreachable logical form tag");
}

inline Value execute(const LFPtr& lf, const PredArgTable& table) {
  return execute(*lf, table);
}

/// Converts a denotation to an Answer; empty sets (and bare relations) have
/// no answer and yield nothing, which never matches any gold.
inline std::optional<Answer> to_answer(const Value& v, const PredArgTable& table) {
  switch (v.kind) {
    case ValueKind::Num:
      return Answer::of_number(v.num);
    case ValueKind::Str:
      return Answer::of_spans({v.str});
    case ValueKind::Date:
      return Answer::of_date(v.date);
    case ValueKind::Relation:
      return std::nullopt;
    case ValueKind::StrSet:
      if (v.str_set.empty()) return std::nullopt;
      return Answer::of_spans(v.str_set);
    case ValueKind::NumSet: {
      if (v.num_set.empty()) return std::nullopt;
      if (v.num_set.size() == 1) return Answer::of_number(v.num_set.front());
      std::vector<std::string> spans;
      for (const auto& n : v.num_set) spans.push_back(n.str());
      return Answer::of_spans(std::move(spans));
    }
    case ValueKind::DateSet: {
      if (v.date_set.empty()) return std::nullopt;
      if (v.date_set.size() == 1) return Answer::of_date(v.date_set.front());
      std::vector<std::string> spans;
      for (const auto& d : v.date_set) spans.push_back(render_date(d));
      return Answer::of_spans(std::move(spans));
    }
    case ValueKind::Rows: {
      if (v.rows.empty()) return std::nullopt;
      // Display column: first column holding a plain string in these rows,
      // else the first column with any cell at all.
      const std::string* display = nullptr;
      const std::string* fallback = nullptr;
      for (const auto& rel : table.relations) {
        for (std::size_t idx : v.rows) {
          const Cell* c = detail::row_cell(table, idx, rel);
          if (!c) continue;
          if (!fallback) fallback = &rel;
          if (!c->number && !c->date) {
            display = &rel;
            break;
          }
        }
        if (display) break;
      }
      if (!display) display = fallback;
      if (!display) return std::nullopt;
      std::vector<std::string> spans;
      for (std::size_t idx : v.rows) {
        const Cell* c = detail::row_cell(table, idx, *display);
        if (!c) continue;
        if (std::find(spans.begin(), spans.end(), c->text) == spans.end())
          spans.push_back(c->text);
      }
      if (spans.empty()) return std::nullopt;
      return Answer::of_spans(std::move(spans));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Grammar induction

struct EmbeddingTable {
  std::map<std::string, std::vector<double>> vectors;
  std::size_t dim = 0;
};

/// Text format, one entry per line: word v1 v2 ... vn.
inline EmbeddingTable parse_embeddings(const std::string& bytes,
                                       const std::string& what = "embedding file") {
  EmbeddingTable table;
  std::size_t line_no = 0, pos = 0;
  while (pos < bytes.size()) {
    std::size_t eol = bytes.find('\n', pos);
    if (eol == std::string::npos) eol = bytes.size();
    std::string_view line(bytes.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::size_t sp = line.find(' ');
    if (sp == std::string_view::npos || sp == 0)
      throw ParseError(what + ": line " + std::to_string(line_no) +
                       ": expected \"word v1 v2 ...\"");
    std::string word(line.substr(0, sp));
    std::vector<double> vec;
    std::size_t i = sp;
    while (i < line.size()) {
      while (i < line.size() && line[i] == ' ') ++i;
      if (i >= line.size()) break;
      std::size_t b = i;
      while (i < line.size() && line[i] != ' ') ++i;
      std::string field(line.substr(b, i - b));
      char* end = nullptr;
      double v = std::strtod(field.c_str(), &end);
      if (end != field.c_str() + field.size())
        throw ParseError(what + ": line " + std::to_string(line_no) +
                         ": bad number \"" + field + "\"");
      vec.push_back(v);
    }
    if (vec.empty())
      throw ParseError(what + ": line " + std::to_string(line_no) + ": no vector");
    if (table.dim == 0) table.dim = vec.size();
    if (vec.size() != table.dim)
      throw ValidationError(what + ": line " + std::to_string(line_no) +
                            ": dimension " + std::to_string(vec.size()) +
                            " != " + std::to_string(table.dim));
    table.vectors[word] = std::move(vec);
  }
  return table;
}

inline EmbeddingTable load_embeddings(const std::string& path) {
  return parse_embeddings(detail::read_file(path), path);
}

/// 1 − cosine similarity; nothing for out-of-vocabulary words and zero
/// vectors, which never participate in the neighbor rule.
inline std::optional<double> cosine_distance(const EmbeddingTable& table,
                                             const std::string& a,
                                             const std::string& b) {
  auto ia = table.vectors.find(a);
  auto ib = table.vectors.find(b);
  if (ia == table.vectors.end() || ib == table.vectors.end()) return std::nullopt;
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < table.dim; ++i) {
    dot += ia->second[i] * ib->second[i];
    na += ia->second[i] * ia->second[i];
    nb += ib->second[i] * ib->second[i];
  }
  if (na == 0 || nb == 0) return std::nullopt;
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

struct ContextRuleConfig {
  const EmbeddingTable* embeddings = nullptr;
  double cosine_distance_threshold = 0.3;
};

struct Grammar {
  std::vector<FunctionSpec> functions;
  std::vector<std::string> relation_terminals;  // column order
  std::vector<std::string> str_terminals;       // question order, then neighbors
  std::vector<Decimal> num_terminals;           // question numbers, then passage
  std::vector<Date> date_terminals;             // table cells, row-major
  std::vector<std::string> warnings;
};

/// One production per inventory function plus context-specific terminals:
/// strings shared by question and passage (and passage tokens within the
/// embedding-distance threshold of a question token), numbers from question
/// and passage, dates from table cells, relations from column headers.
inline Grammar induce_grammar(const QuestionAnswer& qa, const Passage& passage,
                              const PredArgTable& table,
                              const ContextRuleConfig& cfg = {},
                              const NumberOptions& opts = {}) {
  if (cfg.cosine_distance_threshold < 0 || cfg.cosine_distance_threshold > 2)
    throw ValidationError("cosine distance threshold must lie in [0, 2]");
  if (table.rows.empty())
    throw ValidationError("cannot induce a grammar over an empty table");

  Grammar g;
  g.functions = function_inventory();
  g.relation_terminals = table.relations;

  std::vector<std::string> question_words, passage_words;
  std::set<std::string> question_set, passage_set;
  for (const auto& t : qa.question_tokens) {
    std::string low = detail::to_lower(t.text);
    if (question_set.insert(low).second) question_words.push_back(std::move(low));
  }
  for (const auto& t : passage.tokens) {
    std::string low = detail::to_lower(t.text);
    if (passage_set.insert(low).second) passage_words.push_back(std::move(low));
  }

  std::set<std::string> str_seen;
  for (const auto& w : question_words)
    if (passage_set.count(w) && str_seen.insert(w).second) g.str_terminals.push_back(w);

  if (cfg.embeddings) {
    for (const auto& w : passage_words) {
      if (str_seen.count(w)) continue;
      for (const auto& q : question_words) {
        auto dist = cosine_distance(*cfg.embeddings, w, q);
        if (dist && *dist <= cfg.cosine_distance_threshold) {
          str_seen.insert(w);
          g.str_terminals.push_back(w);
          break;
        }
      }
    }
  } else {
    g.warnings.push_back("no embedding table; neighbor rule skipped");
  }

  auto add_num = [&g](const Decimal& v) {
    if (std::find(g.num_terminals.begin(), g.num_terminals.end(), v) ==
        g.num_terminals.end())
      g.num_terminals.push_back(v);
  };
  for (const auto& t : qa.question_tokens)
    if (auto v = parse_number(t.text, opts)) add_num(*v);
  for (const auto& mention : passage.numbers) add_num(mention.value);

  for (const auto& row : table.rows)
    for (const auto& rel : table.relations) {
      const Cell* c = row.cell(rel);
      if (!c || !c->date) continue;
      if (std::find(g.date_terminals.begin(), g.date_terminals.end(), *c->date) ==
          g.date_terminals.end())
        g.date_terminals.push_back(*c->date);
    }

  return g;
}

}  // namespace discern
