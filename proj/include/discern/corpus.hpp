#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "discern/date.hpp"
#include "discern/decimal.hpp"
#include "discern/errors.hpp"
#include "discern/tokenize.hpp"

namespace discern {

using json = nlohmann::ordered_json;

/// A numeric token of a passage, in passage order.
struct NumberMention {
  std::size_t token_index = 0;
  Decimal value;
  std::string surface;

  bool operator==(const NumberMention&) const = default;
};

struct Passage {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  std::vector<NumberMention> numbers;

  bool operator==(const Passage&) const = default;
};

/// Gold or predicted answer: exactly one of span set, number, or date.
struct Answer {
  enum class Kind { Spans, Number, Date };

  Kind kind = Kind::Spans;
  std::vector<std::string> spans;  // non-empty when kind == Spans
  Decimal number;
  std::string number_surface;  // original rendering, re-parses to number
  Date date;

  static Answer of_spans(std::vector<std::string> s) {
    Answer a;
    a.kind = Kind::Spans;
    a.spans = std::move(s);
    return a;
  }
  static Answer of_number(Decimal v, std::string surface = "") {
    Answer a;
    a.kind = Kind::Number;
    a.number = std::move(v);
    a.number_surface = surface.empty() ? a.number.str() : std::move(surface);
    return a;
  }
  static Answer of_date(Date d) {
    Answer a;
    a.kind = Kind::Date;
    a.date = d;
    return a;
  }

  bool operator==(const Answer&) const = default;
};

struct QuestionAnswer {
  std::string question_id;
  std::string question_text;
  std::vector<Token> question_tokens;
  std::vector<Answer> gold_answers;  // first = original annotation

  bool operator==(const QuestionAnswer&) const = default;
};

struct PassageEntry {
  Passage passage;
  std::vector<QuestionAnswer> questions;

  bool operator==(const PassageEntry&) const = default;
};

struct Dataset {
  std::vector<PassageEntry> entries;
  TokenizeOptions options;

  /// Locates a question by id; nullptr pair when absent.
  std::pair<const Passage*, const QuestionAnswer*> find_question(
      std::string_view question_id) const {
    for (const auto& entry : entries)
      for (const auto& qa : entry.questions)
        if (qa.question_id == question_id) return {&entry.passage, &qa};
    return {nullptr, nullptr};
  }

  std::size_t question_count() const {
    std::size_t n = 0;
    for (const auto& entry : entries) n += entry.questions.size();
    return n;
  }
};

using PredictionMap = std::map<std::string, Answer>;

struct PredictionFile {
  PredictionMap predictions;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ParseError("write failed: " + path);
}

inline json parse_json(std::string_view bytes, const std::string& what) {
  json j = json::parse(bytes, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON in " + what);
  return j;
}

inline Answer answer_from_json(const json& j, const std::string& where) {
  if (!j.is_object())
    throw ParseError(where + ": answer must be an object");
  int variants = static_cast<int>(j.contains("spans")) +
                 static_cast<int>(j.contains("number")) +
                 static_cast<int>(j.contains("date"));
  if (variants == 0)
    throw ValidationError(where + ": answer has no variant (spans/number/date)");
  if (variants > 1)
    throw ValidationError(where + ": answer has multiple variants");

  if (j.contains("spans")) {
    const json& spans = j.at("spans");
    if (!spans.is_array() || spans.empty())
      throw ValidationError(where + ": spans must be a non-empty array");
    std::vector<std::string> out;
    for (const json& s : spans) {
      if (!s.is_string())
        throw ParseError(where + ": span entries must be strings");
      out.push_back(s.get<std::string>());
    }
    return Answer::of_spans(std::move(out));
  }

  if (j.contains("number")) {
    const json& num = j.at("number");
    std::string surface;
    if (num.is_string())
      surface = num.get<std::string>();
    else if (num.is_number_integer())
      surface = std::to_string(num.get<long long>());
    else
      throw ParseError(where + ": number must be a string (or integer)");
    auto value = parse_number(surface);
    if (!value)
      throw ParseError(where + ": unparseable number \"" + surface + "\"");
    return Answer::of_number(*value, surface);
  }

  const json& d = j.at("date");
  if (!d.is_object()) throw ParseError(where + ": date must be an object");
  Date date;
  if (d.contains("day")) date.day = d.at("day").get<int>();
  if (d.contains("month")) date.month = d.at("month").get<int>();
  if (d.contains("year")) date.year = d.at("year").get<int>();
  if (!date.valid())
    throw ValidationError(where + ": date needs at least one in-range field");
  return Answer::of_date(date);
}

inline json answer_to_json(const Answer& a) {
  json j = json::object();
  switch (a.kind) {
    case Answer::Kind::Spans:
      j["spans"] = a.spans;
      break;
    case Answer::Kind::Number:
      j["number"] = a.number_surface.empty() ? a.number.str() : a.number_surface;
      break;
    case Answer::Kind::Date: {
      json d = json::object();
      if (a.date.day) d["day"] = *a.date.day;
      if (a.date.month) d["month"] = *a.date.month;
      if (a.date.year) d["year"] = *a.date.year;
      j["date"] = std::move(d);
      break;
    }
  }
  return j;
}

inline std::vector<NumberMention> extract_numbers(const std::vector<Token>& tokens,
                                                  const NumberOptions& opts) {
  std::vector<NumberMention> out;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (auto v = parse_number(tokens[i].text, opts))
      out.push_back({i, *v, tokens[i].text});
  return out;
}

}  // namespace detail

inline Passage make_passage(std::string id, std::string text,
                            const TokenizeOptions& opts = {}) {
  Passage p;
  p.id = std::move(id);
  p.text = std::move(text);
  p.tokens = tokenize(p.text, opts);
  p.numbers = detail::extract_numbers(p.tokens, opts.numbers);
  return p;
}

namespace detail {
Dataset parse_dataset_impl(const json& root, const TokenizeOptions& opts,
                           const std::string& what);
}

inline Dataset parse_dataset(std::string_view bytes, const TokenizeOptions& opts = {},
                             const std::string& what = "dataset") {
  json root = detail::parse_json(bytes, what);
  try {
    return detail::parse_dataset_impl(root, opts, what);
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

inline Dataset detail::parse_dataset_impl(const json& root, const TokenizeOptions& opts,
                                          const std::string& what) {
  if (!root.is_object() || !root.contains("passages") || !root.at("passages").is_array())
    throw ParseError(what + ": expected top-level object with a \"passages\" array");

  Dataset ds;
  ds.options = opts;
  std::map<std::string, bool> seen_qids;
  for (const json& pj : root.at("passages")) {
    if (!pj.is_object() || !pj.contains("id") || !pj.contains("text"))
      throw ParseError(what + ": passage records need \"id\" and \"text\"");
    PassageEntry entry;
    entry.passage = make_passage(pj.at("id").get<std::string>(),
                                 pj.at("text").get<std::string>(), opts);
    if (pj.contains("qa_pairs")) {
      for (const json& qj : pj.at("qa_pairs")) {
        const std::string where =
            what + ", passage \"" + entry.passage.id + "\"";
        if (!qj.is_object() || !qj.contains("question_id") || !qj.contains("question"))
          throw ParseError(where + ": qa_pairs need \"question_id\" and \"question\"");
        QuestionAnswer qa;
        qa.question_id = qj.at("question_id").get<std::string>();
        qa.question_text = qj.at("question").get<std::string>();
        qa.question_tokens = tokenize(qa.question_text, opts);
        if (!qj.contains("answers") || !qj.at("answers").is_array() ||
            qj.at("answers").empty())
          throw ValidationError(where + ", question \"" + qa.question_id +
                                "\": answers must be a non-empty array");
        for (const json& aj : qj.at("answers"))
          qa.gold_answers.push_back(detail::answer_from_json(
              aj, where + ", question \"" + qa.question_id + "\""));
        if (seen_qids.count(qa.question_id))
          throw ValidationError(what + ": duplicate question_id \"" +
                                qa.question_id + "\"");
        seen_qids[qa.question_id] = true;
        entry.questions.push_back(std::move(qa));
      }
    }
    ds.entries.push_back(std::move(entry));
  }
  return ds;
}

inline Dataset load_dataset(const std::string& path, const TokenizeOptions& opts = {}) {
  return parse_dataset(detail::read_file(path), opts, path);
}

/// Canonical dataset bytes; parse_dataset(serialize_dataset(ds)) reproduces ds
/// and re-serializing reproduces the exact bytes.
inline std::string serialize_dataset(const Dataset& ds) {
  json root = json::object();
  root["passages"] = json::array();
  for (const auto& entry : ds.entries) {
    json pj = json::object();
    pj["id"] = entry.passage.id;
    pj["text"] = entry.passage.text;
    pj["qa_pairs"] = json::array();
    for (const auto& qa : entry.questions) {
      json qj = json::object();
      qj["question_id"] = qa.question_id;
      qj["question"] = qa.question_text;
      qj["answers"] = json::array();
      for (const auto& a : qa.gold_answers)
        qj["answers"].push_back(detail::answer_to_json(a));
      pj["qa_pairs"].push_back(std::move(qj));
    }
    root["passages"].push_back(std::move(pj));
  }
  return root.dump(2) + "\n";
}

inline PredictionFile parse_predictions(std::string_view bytes,
                                        const std::string& what = "predictions") {
  // Duplicate keys are silently collapsed by the JSON parser, so watch the
  // key events ourselves.
  std::vector<std::string> top_keys;
  json::parser_callback_t cb = [&](int cb_depth, json::parse_event_t event,
                                   json& parsed) {
    if (event == json::parse_event_t::key && cb_depth == 1)
      top_keys.push_back(parsed.get<std::string>());
    return true;
  };
  json root;
  try {
    root = json::parse(bytes, cb);
  } catch (const json::exception&) {
    throw ParseError("invalid JSON in " + what);
  }
  if (!root.is_object())
    throw ParseError(what + ": expected a top-level object keyed by question_id");

  PredictionFile out;
  std::map<std::string, int> key_count;
  for (const auto& k : top_keys) ++key_count[k];
  for (const auto& [k, n] : key_count)
    if (n > 1)
      throw ValidationError(what + ": duplicate question_id \"" + k + "\"");

  try {
    for (const auto& [qid, aj] : root.items()) {
      if (!aj.is_object())
        throw ParseError(what + ", question \"" + qid + "\": answer must be an object");
      for (const auto& [field, _] : aj.items())
        if (field != "spans" && field != "number" && field != "date")
          out.warnings.push_back(what + ", question \"" + qid +
                                 "\": ignoring unknown field \"" + field + "\"");
      json known = json::object();
      for (const auto& [field, value] : aj.items())
        if (field == "spans" || field == "number" || field == "date")
          known[field] = value;
      out.predictions.emplace(
          qid, detail::answer_from_json(known, what + ", question \"" + qid + "\""));
    }
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
  return out;
}

inline PredictionFile load_predictions(const std::string& path) {
  return parse_predictions(detail::read_file(path), path);
}

inline std::string serialize_predictions(const PredictionMap& preds) {
  json root = json::object();
  for (const auto& [qid, answer] : preds)
    root[qid] = detail::answer_to_json(answer);
  return root.dump(2) + "\n";
}

}  // namespace discern
