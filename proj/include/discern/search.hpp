#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "discern/corpus.hpp"
#include "discern/lflang.hpp"
#include "discern/metrics.hpp"
#include "discern/tables.hpp"

namespace discern {

struct SearchConfig {
  int max_depth = 4;
  std::size_t max_forms = 10000;
  int count_min = 0;
  int count_max = 9;
  int max_addsub_terms = 2;
  // Enumeration budget: total candidate trees constructed before giving up.
  // Depth-4 grammars over real passages blow past any useful wall-clock
  // limit without this; enumeration is depth-ascending, so shallow matches
  // are always found first.
  std::size_t max_candidates = 1000000;
};

/// Gold matching for search results: numbers by exact value, dates by field
/// equality, anything else through the metric normalization (so cross-type
/// matches like number gold vs. rendered span still count).
inline bool answer_matches(const Answer& gold, const Answer& pred,
                           const NumberOptions& opts = {}) {
  if (gold.kind == Answer::Kind::Number && pred.kind == Answer::Kind::Number)
    return gold.number == pred.number;
  if (gold.kind == Answer::Kind::Date && pred.kind == Answer::Kind::Date)
    return gold.date == pred.date;
  return detail::span_texts(normalize_answer(gold, opts)) ==
         detail::span_texts(normalize_answer(pred, opts));
}

struct FoundForm {
  LFPtr form;
  Answer denotation;
  int depth = 0;
  std::string text;  // canonical s-expression
};

struct LFSearchResult {
  std::vector<FoundForm> forms;  // ordered by (depth, canonical text)
  bool truncated = false;
};

/// Exhaustive depth-bounded enumeration over the induced grammar, keeping
/// every tree whose denotation matches gold. Dynamic programming over
/// (kind, exact depth); parents take at least one child of depth d-1.
inline LFSearchResult search_logical_forms(const Grammar& grammar,
                                           const PredArgTable& table,
                                           const Answer& gold,
                                           const SearchConfig& cfg = {},
                                           const NumberOptions& opts = {}) {
  LFSearchResult result;
  constexpr std::size_t n_kinds = 8;
  auto kind_index = [](ValueKind k) { return static_cast<std::size_t>(k); };

  struct Candidate {
    LFPtr form;
    Value value;
  };
  // memo[kind][depth] = all non-erroring candidates of that kind and depth.
  std::vector<std::vector<std::vector<Candidate>>> memo(
      n_kinds, std::vector<std::vector<Candidate>>(cfg.max_depth + 1));

  std::size_t constructed = 0;
  std::set<std::string> seen_texts;
  bool stop = false;

  // args: memoized child values for applications, null for leaves.
  auto consider = [&](LFPtr form, int depth, const std::vector<Value>* args) {
    if (stop) return;
    if (++constructed > cfg.max_candidates) {
      result.truncated = true;
      stop = true;
      return;
    }
    Value value;
    try {
      value = args ? evaluate_call(*form->fn, *args, table) : execute(*form, table);
    } catch (const ExecutionError&) {
      return;
    }
    if (auto answer = to_answer(value, table)) {
      if (answer_matches(gold, *answer, opts)) {
        std::string text = print_lf(form);
        if (seen_texts.insert(text).second) {
          result.forms.push_back({form, std::move(*answer), depth, std::move(text)});
          if (result.forms.size() >= cfg.max_forms) {
            result.truncated = true;
            stop = true;
          }
        }
      }
    }
    memo[kind_index(form->kind)][depth].push_back({std::move(form), std::move(value)});
  };

  consider(lf_all_rows(), 0, nullptr);
  for (const auto& rel : grammar.relation_terminals)
    if (!stop) consider(lf_relation(rel), 0, nullptr);
  for (const auto& s : grammar.str_terminals)
    if (!stop) consider(lf_str(s), 0, nullptr);
  for (const auto& n : grammar.num_terminals)
    if (!stop) consider(lf_num(n), 0, nullptr);
  for (const auto& d : grammar.date_terminals)
    if (!stop) consider(lf_date(d), 0, nullptr);

  for (int depth = 1; depth <= cfg.max_depth && !stop; ++depth) {
    for (const auto& fn : grammar.functions) {
      if (stop) break;
      // Resolve to the static inventory entry so forms outlive the grammar.
      const FunctionSpec* spec = find_function(fn.name);
      if (!spec) continue;
      const std::size_t arity = spec->arg_kinds.size();
      std::vector<LFPtr> children(arity);
      std::vector<const Candidate*> picked(arity);

      // Depth-first odometer over child candidates of depth < current;
      // combos lacking a depth-1 child are skipped at the leaf.
      auto enumerate = [&](auto&& self, std::size_t pos, int max_child_depth) -> void {
        if (stop) return;
        if (pos == arity) {
          if (max_child_depth != depth - 1) return;
          std::vector<Value> args;
          args.reserve(arity);
          for (std::size_t i = 0; i < arity; ++i) {
            children[i] = picked[i]->form;
            args.push_back(picked[i]->value);
          }
          consider(lf_apply(spec, children), depth, &args);
          return;
        }
        const auto& lists = memo[kind_index(spec->arg_kinds[pos])];
        for (int d = 0; d < depth && !stop; ++d) {
          for (const auto& cand : lists[d]) {
            picked[pos] = &cand;
            self(self, pos + 1, std::max(max_child_depth, d));
            if (stop) return;
          }
        }
      };
      enumerate(enumerate, 0, -1);
    }
  }

  std::sort(result.forms.begin(), result.forms.end(),
            [](const FoundForm& a, const FoundForm& b) {
              if (a.depth != b.depth) return a.depth < b.depth;
              return a.text < b.text;
            });
  return result;
}

// ---------------------------------------------------------------------------
// Execution-target search

struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  bool operator==(const TokenSpan&) const = default;
};

struct SignTerm {
  std::size_t index = 0;  // into Passage.numbers
  char sign = '+';        // '+' or '-'

  bool operator==(const SignTerm&) const = default;
};

/// Numbers not listed are implicitly zeroed.
struct SignAssignment {
  std::vector<SignTerm> terms;

  bool operator==(const SignAssignment&) const = default;
};

struct ExecutionTargetSet {
  std::vector<TokenSpan> passage_spans;
  std::vector<TokenSpan> question_spans;
  std::vector<int> counts;
  std::vector<SignAssignment> sign_assignments;
};

inline std::size_t marginal_target_count(const ExecutionTargetSet& ts) {
  return ts.passage_spans.size() + ts.question_spans.size() + ts.counts.size() +
         ts.sign_assignments.size();
}

/// The full candidate list the sign search scores: singles with either sign,
/// then ordered sign pairs over i<j; exactly 2n + 4*C(n,2) entries.
inline std::vector<SignAssignment> enumerate_sign_candidates(std::size_t n,
                                                             int max_terms = 2) {
  std::vector<SignAssignment> out;
  if (max_terms >= 1)
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back({{{i, '+'}}});
      out.push_back({{{i, '-'}}});
    }
  if (max_terms >= 2)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (char si : {'+', '-'})
          for (char sj : {'+', '-'}) out.push_back({{{i, si}, {j, sj}}});
  return out;
}

inline Decimal signed_sum(const SignAssignment& sa,
                          const std::vector<NumberMention>& numbers) {
  Decimal total;
  for (const auto& term : sa.terms) {
    const Decimal& v = numbers[term.index].value;
    total = term.sign == '+' ? total + v : total - v;
  }
  return total;
}

namespace detail {

/// All tight token ranges whose concatenated normalized tokens equal the
/// normalized gold span; both endpoint tokens must contribute.
inline std::vector<TokenSpan> find_token_spans(const std::vector<Token>& tokens,
                                               const std::string& gold_span) {
  std::vector<TokenSpan> out;
  std::vector<std::string> want = normalize_text(gold_span);
  if (want.empty()) return out;

  std::vector<std::vector<std::string>> norm(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i)
    norm[i] = normalize_text(tokens[i].text);

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (norm[i].empty()) continue;
    std::size_t k = 0;
    for (std::size_t j = i; j < tokens.size() && k < want.size(); ++j) {
      bool mismatch = false;
      for (const auto& w : norm[j]) {
        if (k >= want.size() || w != want[k]) {
          mismatch = true;
          break;
        }
        ++k;
      }
      if (mismatch) break;
      if (k == want.size()) {
        if (!norm[j].empty()) out.push_back({i, j + 1});
        break;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Weak-supervision execution targets: all ways of producing the gold answer as
/// a passage/question token span, a count in range, or a signed sum of at
/// most two passage numbers. Spans are searched for single-span golds only;
/// counts and signs for number golds; date golds yield nothing.
inline ExecutionTargetSet search_execution_targets(const Passage& passage,
                                                   const QuestionAnswer& qa,
                                                   const Answer& gold,
                                                   const SearchConfig& cfg = {}) {
  ExecutionTargetSet ts;
  if (gold.kind == Answer::Kind::Spans && gold.spans.size() == 1) {
    ts.passage_spans = detail::find_token_spans(passage.tokens, gold.spans.front());
    ts.question_spans = detail::find_token_spans(qa.question_tokens, gold.spans.front());
  }
  if (gold.kind == Answer::Kind::Number) {
    if (auto v = gold.number.as_int())
      if (*v >= cfg.count_min && *v <= cfg.count_max)
        ts.counts.push_back(static_cast<int>(*v));
    for (auto& cand :
         enumerate_sign_candidates(passage.numbers.size(), cfg.max_addsub_terms))
      if (signed_sum(cand, passage.numbers) == gold.number)
        ts.sign_assignments.push_back(std::move(cand));
  }
  return ts;
}

inline json targets_to_json(const ExecutionTargetSet& ts) {
  json j;
  j["passage_spans"] = json::array();
  for (const auto& s : ts.passage_spans)
    j["passage_spans"].push_back({s.begin, s.end});
  j["question_spans"] = json::array();
  for (const auto& s : ts.question_spans)
    j["question_spans"].push_back({s.begin, s.end});
  j["counts"] = ts.counts;
  j["sign_assignments"] = json::array();
  for (const auto& sa : ts.sign_assignments) {
    json terms = json::array();
    for (const auto& t : sa.terms)
      terms.push_back({std::to_string(t.index), std::string(1, t.sign)});
    j["sign_assignments"].push_back(std::move(terms));
  }
  return j;
}

}  // namespace discern
