#pragma once

#include <string>
#include <vector>

#include "discern/corpus.hpp"
#include "discern/tables.hpp"

namespace discern {

/// Thirteen desk-scale questions: nine reasoning categories over news and
/// history snippets plus four failure-mode cases (subtraction with
/// coreference, count with filtering, domain knowledge, addition across a
/// compound). Passage ids equal question ids; one question per passage.
inline Dataset fixture_dataset(const TokenizeOptions& opts = {}) {
  struct Row {
    const char* id;
    const char* text;
    const char* question;
    Answer answer;
  };
  const std::vector<Row> rows = {
      {"t1-sub",
       "That year, his Untitled (1981), a painting of a haloed, black-headed man "
       "with a bright red skeletal body, depicted amid the artists signature "
       "scrawls, was sold by Robert Lehrman for $16.3 million, well above its "
       "$12 million high estimate.",
       "How many more dollars was the Untitled (1981) painting sold for than the "
       "12 million dollar estimation?",
       Answer::of_number(Decimal(4300000), "4300000")},
      {"t1-comp",
       "In 1517, the seventeen-year-old King sailed to Castile. In May 1518, "
       "Charles traveled to Barcelona in Aragon.",
       "Where did Charles travel to first, Castile or Barcelona?",
       Answer::of_spans({"Castile"})},
      {"t1-sel",
       "In 1970, to commemorate the 100th anniversary of the founding of Baldwin "
       "City, Baker University professor and playwright Don Mueller and Phyllis "
       "E. Braun, Business Manager, produced a musical play entitled The Ballad "
       "Of Black Jack to tell the story of the events that led up to the battle.",
       "Who was the University professor that helped produce The Ballad Of Black "
       "Jack, Ivan Boyd or Don Mueller?",
       Answer::of_spans({"Don Mueller"})},
      {"t1-add",
       "Before the UNPROFOR fully deployed, the HV clashed with an armed force "
       "of the RSK in the village of Nos Kalik, located in a pink zone near "
       "\xC5\xA0ibenik, and captured the village at 4:45 p.m. on 2 March 1992. "
       "The JNA formed a battlegroup to counterattack the next day.",
       "What date did the JNA form a battlegroup to counterattack after the "
       "village of Nos Kalik was captured?",
       Answer::of_date(Date{3, 3, 1992})},
      {"t1-count",
       "Denver would retake the lead with kicker Matt Prater nailing a 43-yard "
       "field goal, yet Carolina answered as kicker John Kasay ties the game "
       "with a 39-yard field goal. Carolina closed out the half with Kasay "
       "nailing a 44-yard field goal. In the fourth quarter, Carolina sealed "
       "the win with Kasay's 42-yard field goal.",
       "Which kicker kicked the most field goals?",
       Answer::of_spans({"John Kasay"})},
      {"t1-coref",
       "James Douglas was the second son of Sir George Douglas of Pittendreich, "
       "and Elizabeth Douglas, daughter David Douglas of Pittendreich. Before "
       "1543 he married Elizabeth, daughter of James Douglas, 3rd Earl of "
       "Morton. In 1553 James Douglas succeeded to the title and estates of his "
       "father-in-law.",
       "How many years after he married Elizabeth did James Douglas succeed to "
       "the title and estates of his father-in-law?",
       Answer::of_number(Decimal(10), "10")},
      {"t1-arith",
       "Although the movement initially gathered some 60,000 adherents, the "
       "subsequent establishment of the Bulgarian Exarchate reduced their "
       "number by some 75%.",
       "How many adherents were left after the establishment of the Bulgarian "
       "Exarchate?",
       Answer::of_number(Decimal(15000), "15000")},
      {"t1-set",
       "According to some sources 363 civilians were killed in Kavadarci, 230 "
       "in Negotino and 40 in Vatasha.",
       "What were the 3 villages that people were killed in?",
       Answer::of_spans({"Kavadarci", "Negotino", "Vatasha"})},
      {"t1-other",
       "This Annual Financial Report is our principal financial statement of "
       "accountability. The AFR gives a comprehensive view of the Department's "
       "financial activities.",
       "What does AFR stand for?",
       Answer::of_spans({"Annual Financial Report"})},
      {"t4-sub",
       "Twenty-five of his 150 men were sick, and his advance stalled.",
       "How many of Bartolom\xC3\xA9 de Am\xC3\xA9squeta's 150 men were not "
       "sick?",
       Answer::of_number(Decimal(125), "125")},
      {"t4-count",
       "Macedonians were the largest ethnic group in Skopje, with 338,358 "
       "inhabitants. Then came Serbs (14,298 inhabitants), Turks (8,595), "
       "Bosniaks (7,585) and Vlachs (2,557).",
       "How many ethnicities had less than 10000 people?",
       Answer::of_number(Decimal(3), "3")},
      {"t4-domain",
       "Smith was sidelined by a torn pectoral muscle suffered during practice.",
       "How many quarters did Smith play?",
       Answer::of_number(Decimal(0), "0")},
      {"t4-add",
       "The Ottoman wars in Europe continued intermittently, culminating in the "
       "Battle of Vienna of 1683, which marked the start of the 15-year-long "
       "Great Turkish War.",
       "What year did the Great Turkish War end?",
       Answer::of_number(Decimal(1698), "1698")},
  };

  Dataset ds;
  ds.options = opts;
  for (const auto& row : rows) {
    PassageEntry entry;
    entry.passage = make_passage(row.id, row.text, opts);
    QuestionAnswer qa;
    qa.question_id = row.id;
    qa.question_text = row.question;
    qa.question_tokens = tokenize(qa.question_text, opts);
    qa.gold_answers.push_back(row.answer);
    entry.questions.push_back(std::move(qa));
    ds.entries.push_back(std::move(entry));
  }
  return ds;
}

/// Writes fixtures.json and fixtures_tables.json into dir (no trailing
/// separator needed). Output is deterministic byte for byte.
inline void write_fixtures(const std::string& dir) {
  Dataset ds = fixture_dataset();
  detail::write_file(dir + "/fixtures.json", serialize_dataset(ds));
  detail::write_file(dir + "/fixtures_tables.json", serialize_tables(extract_all(ds)));
}

}  // namespace discern
