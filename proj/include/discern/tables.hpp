#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "discern/corpus.hpp"
#include "discern/date.hpp"
#include "discern/decimal.hpp"
#include "discern/tokenize.hpp"

namespace discern {

/// One table cell. The text is authoritative; typed interpretations are
/// recomputed from it on construction, never stored independently.
struct Cell {
  std::string text;
  std::optional<Decimal> number;
  std::optional<Date> date;

  bool operator==(const Cell&) const = default;
};

/// Typed view of a cell: the whole text if it parses, otherwise the first
/// numeric token inside it. Dates only parse from the whole text.
inline Cell make_cell(std::string text, const NumberOptions& opts = {}) {
  Cell cell;
  cell.number = parse_number(text, opts);
  if (!cell.number) {
    for (const auto& tok : tokenize(text, {opts}))
      if (auto v = parse_number(tok.text, opts)) {
        cell.number = v;
        break;
      }
  }
  cell.date = parse_date(text);
  cell.text = std::move(text);
  return cell;
}

struct PredArgStructure {
  std::map<std::string, Cell> cells;

  const Cell* cell(std::string_view relation) const {
    auto it = cells.find(std::string(relation));
    return it == cells.end() ? nullptr : &it->second;
  }

  bool operator==(const PredArgStructure&) const = default;
};

struct PredArgTable {
  std::string passage_id;
  std::string provenance;  // syn-dep | open-ie | srl | pattern | imported
  std::vector<std::string> relations;
  std::vector<PredArgStructure> rows;

  bool has_relation(std::string_view name) const {
    return std::find(relations.begin(), relations.end(), name) != relations.end();
  }

  bool operator==(const PredArgTable&) const = default;
};

struct TableSet {
  std::vector<PredArgTable> tables;  // file order; zero-row tables dropped
  std::vector<std::string> warnings;

  const PredArgTable* find(std::string_view passage_id) const {
    for (const auto& t : tables)
      if (t.passage_id == passage_id) return &t;
    return nullptr;
  }
};

namespace detail {

inline const std::set<std::string>& allowed_provenance() {
  static const std::set<std::string> kinds = {"syn-dep", "open-ie", "srl",
                                             "pattern", "imported"};
  return kinds;
}

inline bool starts_uppercase(std::string_view tok) {
  if (tok.empty()) return false;
  unsigned char c0 = static_cast<unsigned char>(tok[0]);
  if (c0 >= 'A' && c0 <= 'Z') return true;
  if (tok.size() < 2) return false;
  unsigned char c1 = static_cast<unsigned char>(tok[1]);
  // Latin-1 and the Balkan Latin Extended-A capitals seen in passages.
  if (c0 == 0xC3 && c1 >= 0x80 && c1 <= 0x9E && c1 != 0x97) return true;
  if (c0 == 0xC4 && (c1 == 0x86 || c1 == 0x8C || c1 == 0x90)) return true;
  if (c0 == 0xC5 && (c1 == 0xA0 || c1 == 0xBD)) return true;
  return false;
}

/// Boundary = sentence-final punctuation run, whitespace, then a capital.
inline std::vector<std::pair<std::size_t, std::size_t>> split_sentences(
    const std::string& text) {
  std::vector<std::size_t> starts = {0};
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < text.size() &&
           (text[j] == '.' || text[j] == '!' || text[j] == '?' ||
            text[j] == '"' || text[j] == '\''))
      ++j;
    std::size_t k = j;
    while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k > j && k < text.size() && starts_uppercase(std::string_view(text).substr(k))) {
      starts.push_back(k);
      i = k - 1;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t s = 0; s < starts.size(); ++s)
    ranges.emplace_back(starts[s],
                        s + 1 < starts.size() ? starts[s + 1] : text.size());
  return ranges;
}

inline bool verb_like(std::string_view tok) {
  static const std::set<std::string, std::less<>> lexicon = {
      "is",    "are",   "was",    "were",  "be",    "been",  "am",    "has",
      "have",  "had",   "came",   "come",  "comes", "went",  "go",    "goes",
      "got",   "get",   "gets",   "made",  "make",  "makes", "took",  "take",
      "takes", "gave",  "give",   "gives", "sold",  "sell",  "sells", "won",
      "win",   "wins",  "lost",   "lose",  "hit",   "hits",  "held",  "hold",
      "holds", "saw",   "see",    "sees",  "ties",  "tie",   "tied",  "ran",
      "run",   "runs",  "threw",  "throw", "set",   "sets",  "put",   "puts",
      "began", "begin", "become", "became", "grew", "fell",  "falls", "rose",
      "told",  "said",  "says",   "say",   "brought", "kept", "stood", "found",
      "met",   "paid",  "sent",   "built", "spent", "wrote", "drove", "wore",
      "felt",  "cost",  "costs",  "cut",   "cuts",  "beat",  "beats", "did",
      "do",    "does"};
  static const std::set<std::string, std::less<>> not_verbs = {
      "hundred",  "indeed",  "during", "spring",  "string",   "king",
      "thing",    "morning", "evening", "something", "nothing", "anything",
      "everything"};
  std::string low = to_lower(tok);
  if (low != std::string(tok)) return false;  // capitalized tokens act as entities
  if (not_verbs.count(low)) return false;
  if (lexicon.count(low)) return true;
  if (low.size() >= 4 && low.ends_with("ed")) return true;
  if (low.size() >= 6 && low.ends_with("ing")) return true;
  return false;
}

inline std::optional<int> small_int(std::string_view tok, int lo, int hi) {
  if (!all_digits(tok) || tok.size() > 4) return std::nullopt;
  int v = std::stoi(std::string(tok));
  if (v < lo || v > hi) return std::nullopt;
  return v;
}

struct SentenceDate {
  std::size_t first_token;  // position within the sentence token list
  Date value;
};

}  // namespace detail

/// Deterministic shallow extraction: one row per in-sentence number (or one
/// per verb-plus-entity sentence without numbers), columns fixed to
/// {pred, arg0, arg1, num, date}. Exists to make small fixtures
/// self-contained; it is not a serious information extractor.
inline PredArgTable pattern_extract(const Passage& passage,
                                    const NumberOptions& opts = {}) {
  PredArgTable table;
  table.passage_id = passage.id;
  table.provenance = "pattern";
  table.relations = {"pred", "arg0", "arg1", "num", "date"};

  auto ranges = detail::split_sentences(passage.text);
  for (const auto& [s_begin, s_end] : ranges) {
    // Token indices of this sentence, in order.
    std::vector<std::size_t> toks;
    for (std::size_t t = 0; t < passage.tokens.size(); ++t)
      if (passage.tokens[t].begin >= s_begin && passage.tokens[t].begin < s_end)
        toks.push_back(t);
    if (toks.empty()) continue;

    auto text_at = [&](std::size_t pos) -> const std::string& {
      return passage.tokens[toks[pos]].text;
    };

    // Dates first; their component tokens are off-limits to everything else.
    std::vector<detail::SentenceDate> dates;
    std::vector<bool> date_part(toks.size(), false);
    for (std::size_t p = 0; p < toks.size(); ++p) {
      auto month = month_from_name(text_at(p));
      if (!month) continue;
      Date d;
      d.month = month;
      std::size_t first = p, last = p;
      if (p > 0 && !date_part[p - 1])
        if (auto day = detail::small_int(text_at(p - 1), 1, 31)) {
          d.day = day;
          first = p - 1;
        }
      if (p + 1 < toks.size()) {
        if (auto year = detail::small_int(text_at(p + 1), 1000, 2100)) {
          d.year = year;
          last = p + 1;
        } else if (!d.day) {
          if (auto day = detail::small_int(text_at(p + 1), 1, 31)) {
            d.day = day;
            last = p + 1;
            if (p + 2 < toks.size())
              if (auto year = detail::small_int(text_at(p + 2), 1000, 2100)) {
                d.year = year;
                last = p + 2;
              }
          }
        }
      }
      for (std::size_t q = first; q <= last; ++q) date_part[q] = true;
      dates.push_back({first, d});
    }

    // Entities: maximal runs of capitalized tokens outside dates. A run of
    // one token at the very start of the sentence is just capitalization.
    struct Entity {
      std::size_t first_token;
      std::string text;
    };
    std::vector<Entity> entities;
    for (std::size_t p = 0; p < toks.size();) {
      if (date_part[p] || !detail::starts_uppercase(text_at(p))) {
        ++p;
        continue;
      }
      std::size_t run_end = p;
      while (run_end + 1 < toks.size() && !date_part[run_end + 1] &&
             detail::starts_uppercase(text_at(run_end + 1)))
        ++run_end;
      if (!(p == 0 && run_end == p)) {
        std::string joined;
        for (std::size_t q = p; q <= run_end; ++q) {
          std::string word = text_at(q);
          if (word.size() > 2 && word.ends_with("'s"))
            word.resize(word.size() - 2);
          if (!joined.empty()) joined.push_back(' ');
          joined += word;
        }
        entities.push_back({p, std::move(joined)});
      }
      p = run_end + 1;
    }

    std::vector<std::size_t> verbs;  // sentence positions
    for (std::size_t p = 0; p < toks.size(); ++p)
      if (!date_part[p] && detail::verb_like(text_at(p))) verbs.push_back(p);
    if (verbs.empty()) continue;

    // Number anchors: passage mentions inside the sentence, minus date parts.
    struct Anchor {
      std::size_t pos;  // sentence position
      const NumberMention* mention;
    };
    std::vector<Anchor> anchors;
    for (const auto& mention : passage.numbers) {
      for (std::size_t p = 0; p < toks.size(); ++p)
        if (toks[p] == mention.token_index && !date_part[p])
          anchors.push_back({p, &mention});
    }

    auto nearest_date = [&](std::size_t pos) -> const Date* {
      const detail::SentenceDate* best = nullptr;
      std::size_t best_dist = 0;
      for (const auto& d : dates) {
        std::size_t dist = d.first_token > pos ? d.first_token - pos : pos - d.first_token;
        if (!best || dist < best_dist) {
          best = &d;
          best_dist = dist;
        }
      }
      return best ? &best->value : nullptr;
    };

    auto push_row = [&](std::vector<std::pair<const char*, std::string>> fields) {
      PredArgStructure row;
      for (auto& [name, value] : fields)
        if (!value.empty()) row.cells[name] = make_cell(std::move(value), opts);
      if (!row.cells.empty()) table.rows.push_back(std::move(row));
    };

    if (!anchors.empty()) {
      for (const auto& anchor : anchors) {
        std::string pred;
        for (std::size_t v : verbs)
          if (v < anchor.pos) pred = text_at(v);
        if (pred.empty()) pred = text_at(verbs.front());

        std::string arg0, arg1;
        for (const auto& e : entities) {
          if (e.first_token < anchor.pos) arg0 = e.text;
          if (e.first_token > anchor.pos && arg1.empty()) arg1 = e.text;
        }
        const Date* d = nearest_date(anchor.pos);
        push_row({{"pred", pred},
                  {"arg0", arg0},
                  {"arg1", arg1},
                  {"num", anchor.mention->surface},
                  {"date", d ? render_date(*d) : ""}});
      }
    } else if (!entities.empty()) {
      push_row({{"pred", text_at(verbs.front())},
                {"arg0", entities[0].text},
                {"arg1", entities.size() > 1 ? entities[1].text : ""},
                {"num", ""},
                {"date", dates.empty() ? "" : render_date(dates.front().value)}});
    }
  }
  return table;
}

inline std::vector<PredArgTable> extract_all(const Dataset& ds) {
  std::vector<PredArgTable> tables;
  for (const auto& entry : ds.entries)
    tables.push_back(pattern_extract(entry.passage, ds.options.numbers));
  return tables;
}

inline std::string serialize_tables(const std::vector<PredArgTable>& tables) {
  json root;
  root["tables"] = json::array();
  for (const auto& t : tables) {
    json jt;
    jt["passage_id"] = t.passage_id;
    jt["provenance"] = t.provenance;
    jt["columns"] = t.relations;
    jt["rows"] = json::array();
    for (const auto& row : t.rows) {
      json jr = json::object();
      for (const auto& rel : t.relations)
        if (const Cell* c = row.cell(rel)) jr[rel] = c->text;
      jt["rows"].push_back(std::move(jr));
    }
    root["tables"].push_back(std::move(jt));
  }
  return root.dump(2) + "\n";
}

inline TableSet parse_tables(const std::string& bytes, const NumberOptions& opts = {},
                             const std::string& what = "table file") {
  TableSet out;
  json root = detail::parse_json(bytes, what);
  try {
    if (!root.is_object() || !root.contains("tables") || !root["tables"].is_array())
      throw ParseError(what + ": expected top-level object with a \"tables\" array");
    std::set<std::string> seen_ids;
    for (const auto& jt : root["tables"]) {
      if (!jt.is_object()) throw ParseError(what + ": table entries must be objects");
      PredArgTable table;
      table.passage_id = jt.at("passage_id").get<std::string>();
      if (table.passage_id.empty())
        throw ValidationError(what + ": empty passage_id");
      if (!seen_ids.insert(table.passage_id).second)
        throw ValidationError(what + ": duplicate passage_id \"" + table.passage_id + "\"");
      table.provenance = jt.at("provenance").get<std::string>();
      if (!detail::allowed_provenance().count(table.provenance))
        throw ValidationError(what + ": unknown provenance \"" + table.provenance +
                              "\" for passage \"" + table.passage_id + "\"");
      for (const auto& c : jt.at("columns"))
        table.relations.push_back(c.get<std::string>());
      if (table.relations.empty())
        throw ValidationError(what + ": table for passage \"" + table.passage_id +
                              "\" has no columns");
      for (const auto& jr : jt.at("rows")) {
        if (!jr.is_object()) throw ParseError(what + ": rows must be objects");
        PredArgStructure row;
        for (const auto& [key, value] : jr.items()) {
          if (!table.has_relation(key))
            throw ValidationError(what + ": row cell \"" + key +
                                  "\" is not a declared column of passage \"" +
                                  table.passage_id + "\"");
          row.cells[key] = make_cell(value.get<std::string>(), opts);
        }
        // A cell-less row carries no information but would still count.
        if (row.cells.empty()) {
          out.warnings.push_back("empty row in table for passage \"" +
                                 table.passage_id + "\"; skipped");
          continue;
        }
        table.rows.push_back(std::move(row));
      }
      if (table.rows.empty()) {
        out.warnings.push_back("table for passage \"" + table.passage_id +
                               "\" has no rows; skipped");
        continue;
      }
      out.tables.push_back(std::move(table));
    }
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
  return out;
}

inline TableSet load_tables(const std::string& path, const NumberOptions& opts = {}) {
  return parse_tables(detail::read_file(path), opts, path);
}

}  // namespace discern
