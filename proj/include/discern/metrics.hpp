#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "discern/corpus.hpp"
#include "discern/decimal.hpp"
#include "discern/tokenize.hpp"

namespace discern {

/// One normalized answer span: lowercased, punctuation- and article-free
/// tokens in order, plus the set of values its numeric tokens denote.
struct NormalizedSpan {
  std::vector<std::string> tokens;
  std::set<Decimal> numbers;

  std::string text() const {
    std::string out;
    for (const auto& t : tokens) {
      if (!out.empty()) out.push_back(' ');
      out += t;
    }
    return out;
  }

  bool operator==(const NormalizedSpan&) const = default;
};

struct AnswerBag {
  std::vector<NormalizedSpan> spans;
  std::set<Decimal> numbers;  // union over spans
};

struct ScorePair {
  int em = 0;     // 0 or 1
  double f1 = 0;  // in [0,1]
};

/// Normalization pipeline: lowercase, strip punctuation (keeping hyphens for
/// splitting and decimal points between digits), drop articles, then split
/// on whitespace and hyphens.
inline std::vector<std::string> normalize_text(std::string_view raw) {
  std::string low = detail::to_lower(raw);

  std::string kept;
  kept.reserve(low.size());
  for (std::size_t i = 0; i < low.size(); ++i) {
    char c = low[i];
    if (!detail::ascii_punct(c) || c == '-') {
      kept.push_back(c);
      continue;
    }
    if (c == '.' && i > 0 && detail::ascii_digit(low[i - 1]) &&
        i + 1 < low.size() && detail::ascii_digit(low[i + 1]))
      kept.push_back(c);
  }

  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && cur != "a" && cur != "an" && cur != "the")
      tokens.push_back(cur);
    cur.clear();
  };
  for (char c : kept) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '-') {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return tokens;
}

inline NormalizedSpan normalize_span(std::string_view raw,
                                     const NumberOptions& opts = {}) {
  NormalizedSpan span;
  span.tokens = normalize_text(raw);
  for (const auto& t : span.tokens)
    if (auto v = parse_number(t, opts)) span.numbers.insert(*v);
  return span;
}

inline AnswerBag normalize_answer(const Answer& ans, const NumberOptions& opts = {}) {
  AnswerBag bag;
  switch (ans.kind) {
    case Answer::Kind::Spans:
      for (const auto& s : ans.spans) bag.spans.push_back(normalize_span(s, opts));
      break;
    case Answer::Kind::Number:
      bag.spans.push_back(normalize_span(ans.number.str(), opts));
      break;
    case Answer::Kind::Date:
      bag.spans.push_back(normalize_span(render_date(ans.date), opts));
      break;
  }
  for (const auto& s : bag.spans)
    bag.numbers.insert(s.numbers.begin(), s.numbers.end());
  return bag;
}

/// Bag-of-words F1 between two spans, forced to 0 when their numeric token
/// sets disagree, regardless of any word overlap.
inline double pair_f1(const NormalizedSpan& gold, const NormalizedSpan& pred) {
  if (gold.numbers != pred.numbers) return 0.0;
  if (gold.tokens.empty() && pred.tokens.empty()) return 1.0;

  std::map<std::string, int> gold_counts;
  for (const auto& t : gold.tokens) ++gold_counts[t];
  std::size_t overlap = 0;
  for (const auto& t : pred.tokens) {
    auto it = gold_counts.find(t);
    if (it != gold_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  double precision = static_cast<double>(overlap) / pred.tokens.size();
  double recall = static_cast<double>(overlap) / gold.tokens.size();
  return 2 * precision * recall / (precision + recall);
}

/// Greedy one-to-one alignment over span pairs; unmatched spans score 0;
/// the average is taken over max(|gold|, |pred|). Score ties break on the
/// normalized span texts (gold first), never on position, so the alignment
/// is a function of the two span multisets and reordering cannot change it.
inline double multi_span_f1(const AnswerBag& gold, const AnswerBag& pred) {
  const std::size_t g_n = gold.spans.size(), p_n = pred.spans.size();
  if (g_n == 0 || p_n == 0) return 0.0;

  std::vector<std::vector<double>> score(g_n, std::vector<double>(p_n));
  for (std::size_t g = 0; g < g_n; ++g)
    for (std::size_t p = 0; p < p_n; ++p)
      score[g][p] = pair_f1(gold.spans[g], pred.spans[p]);

  std::vector<std::string> g_text(g_n), p_text(p_n);
  for (std::size_t g = 0; g < g_n; ++g) g_text[g] = gold.spans[g].text();
  for (std::size_t p = 0; p < p_n; ++p) p_text[p] = pred.spans[p].text();

  std::vector<bool> g_used(g_n, false), p_used(p_n, false);
  double total = 0.0;
  for (std::size_t round = 0; round < std::min(g_n, p_n); ++round) {
    double best = -1.0;
    std::size_t best_g = 0, best_p = 0;
    bool have = false;
    for (std::size_t g = 0; g < g_n; ++g) {
      if (g_used[g]) continue;
      for (std::size_t p = 0; p < p_n; ++p) {
        if (p_used[p]) continue;
        bool wins;
        if (!have || score[g][p] != best) {
          wins = !have || score[g][p] > best;
        } else if (int c = g_text[g].compare(g_text[best_g]); c != 0) {
          wins = c < 0;
        } else {
          wins = p_text[p].compare(p_text[best_p]) < 0;
        }
        if (wins) {
          best = score[g][p];
          best_g = g;
          best_p = p;
          have = true;
        }
      }
    }
    g_used[best_g] = true;
    p_used[best_p] = true;
    total += best;
  }
  return total / static_cast<double>(std::max(g_n, p_n));
}

namespace detail {
inline std::multiset<std::string> span_texts(const AnswerBag& bag) {
  std::multiset<std::string> out;
  for (const auto& s : bag.spans) out.insert(s.text());
  return out;
}
}  // namespace detail

/// Both metrics take a max over the gold answers, independently.
inline ScorePair score_question(const std::vector<Answer>& golds, const Answer& pred,
                                const NumberOptions& opts = {}) {
  AnswerBag pred_bag = normalize_answer(pred, opts);
  auto pred_texts = detail::span_texts(pred_bag);
  ScorePair best;
  for (const auto& gold : golds) {
    AnswerBag gold_bag = normalize_answer(gold, opts);
    if (detail::span_texts(gold_bag) == pred_texts) best.em = 1;
    best.f1 = std::max(best.f1, multi_span_f1(gold_bag, pred_bag));
  }
  return best;
}

enum class AnswerType { Date, Number, SingleSpan, MultiSpan };

inline AnswerType answer_type(const Answer& a) {
  switch (a.kind) {
    case Answer::Kind::Date:
      return AnswerType::Date;
    case Answer::Kind::Number:
      return AnswerType::Number;
    case Answer::Kind::Spans:
      return a.spans.size() == 1 ? AnswerType::SingleSpan : AnswerType::MultiSpan;
  }
  return AnswerType::SingleSpan;
}

struct TypeBreakdown {
  std::size_t count = 0;
  double em = 0.0;  // percentage
  double f1 = 0.0;  // percentage
};

struct EvalReport {
  std::size_t question_count = 0;
  std::size_t predicted_count = 0;
  double em = 0.0;  // percentage
  double f1 = 0.0;  // percentage
  std::map<AnswerType, TypeBreakdown> by_type;
};

inline const char* answer_type_name(AnswerType t) {
  switch (t) {
    case AnswerType::Date:
      return "date";
    case AnswerType::Number:
      return "number";
    case AnswerType::SingleSpan:
      return "single span";
    case AnswerType::MultiSpan:
      return ">1 spans";
  }
  return "?";
}

/// Macro-averaged EM/F1 over every question in the dataset; questions
/// without a prediction count as 0. Scoring is pure per question, so jobs>1
/// just partitions the work; the report does not depend on the schedule.
inline EvalReport evaluate(const Dataset& ds, const PredictionMap& preds,
                           int jobs = 1) {
  struct Item {
    const QuestionAnswer* qa;
    const Answer* pred;
  };
  std::vector<Item> items;
  for (const auto& entry : ds.entries)
    for (const auto& qa : entry.questions) {
      auto it = preds.find(qa.question_id);
      items.push_back({&qa, it == preds.end() ? nullptr : &it->second});
    }

  std::vector<std::string> unknown;
  for (const auto& [qid, _] : preds)
    if (!ds.find_question(qid).second) unknown.push_back(qid);
  if (!unknown.empty()) {
    std::string msg = "predictions for unknown question ids:";
    for (const auto& id : unknown) msg += " \"" + id + "\"";
    throw ValidationError(msg);
  }

  std::vector<ScorePair> scores(items.size());
  auto score_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      if (items[i].pred)
        scores[i] =
            score_question(items[i].qa->gold_answers, *items[i].pred, ds.options.numbers);
  };
  if (jobs <= 1 || items.size() < 2) {
    score_range(0, items.size());
  } else {
    std::size_t n_threads = std::min<std::size_t>(jobs, items.size());
    std::vector<std::thread> pool;
    std::size_t chunk = (items.size() + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t)
      pool.emplace_back(score_range, t * chunk,
                        std::min(items.size(), (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }

  EvalReport report;
  report.question_count = items.size();
  std::map<AnswerType, std::pair<double, double>> type_sums;
  double em_sum = 0, f1_sum = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].pred) ++report.predicted_count;
    em_sum += scores[i].em;
    f1_sum += scores[i].f1;
    AnswerType t = answer_type(items[i].qa->gold_answers.front());
    ++report.by_type[t].count;
    type_sums[t].first += scores[i].em;
    type_sums[t].second += scores[i].f1;
  }
  if (!items.empty()) {
    report.em = 100.0 * em_sum / items.size();
    report.f1 = 100.0 * f1_sum / items.size();
  }
  for (auto& [t, breakdown] : report.by_type) {
    breakdown.em = 100.0 * type_sums[t].first / breakdown.count;
    breakdown.f1 = 100.0 * type_sums[t].second / breakdown.count;
  }
  return report;
}

}  // namespace discern
