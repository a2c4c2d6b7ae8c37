#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <string>
#include <vector>

#include "discern/lflang.hpp"

using namespace discern;

namespace {

PredArgStructure row(std::vector<std::pair<std::string, std::string>> cells) {
  PredArgStructure r;
  for (auto& [rel, text] : cells) r.cells[rel] = make_cell(text);
  return r;
}

// Four game rows with a deliberate tie on score 44 and one missing date.
PredArgTable game_table() {
  PredArgTable t;
  t.passage_id = "games";
  t.provenance = "imported";
  t.relations = {"player", "score", "when"};
  t.rows.push_back(row({{"player", "Prater"}, {"score", "43"}, {"when", "2 March 1992"}}));
  t.rows.push_back(row({{"player", "Kasay"}, {"score", "39"}, {"when", "March 1992"}}));
  t.rows.push_back(row({{"player", "Kasay"}, {"score", "44"}, {"when", "1991"}}));
  t.rows.push_back(row({{"player", "Elam"}, {"score", "44"}}));
  return t;
}

PredArgTable census_table() {
  PredArgTable t;
  t.passage_id = "census";
  t.provenance = "imported";
  t.relations = {"group", "population"};
  for (auto [g, n] : std::initializer_list<std::pair<const char*, const char*>>{
           {"Macedonians", "338,358"},
           {"Albanians", "14,298"},
           {"Turks", "8,595"},
           {"Serbs", "7,585"},
           {"Roma", "2,557"}})
    t.rows.push_back(row({{"group", g}, {"population", n}}));
  return t;
}

Value run(const std::string& text, const PredArgTable& t) {
  return execute(parse_lf(text), t);
}

}  // namespace

TEST_CASE("function inventory is the fixed twenty", "[lflang]") {
  const auto& inv = function_inventory();
  REQUIRE(inv.size() == 20);
  std::set<std::string> names;
  for (const auto& f : inv) {
    CHECK(names.insert(f.name).second);
    CHECK(find_function(f.name) == &f);
    CHECK_FALSE(f.arg_kinds.empty());
  }
  CHECK(find_function("count")->ret_kind == ValueKind::Num);
  CHECK(find_function("filter_number_greater")->arg_kinds ==
        std::vector<ValueKind>{ValueKind::Rows, ValueKind::Relation, ValueKind::Num});
  CHECK(find_function("filter_date_equals")->arg_kinds ==
        std::vector<ValueKind>{ValueKind::Rows, ValueKind::Relation, ValueKind::Date});
  CHECK(find_function("select_date")->ret_kind == ValueKind::DateSet);
  CHECK(find_function("sum")->arg_kinds == std::vector<ValueKind>{ValueKind::NumSet});
  CHECK(find_function("first_by_date")->ret_kind == ValueKind::Rows);
  CHECK(find_function("no_such_fn") == nullptr);
}

TEST_CASE("applications are type-checked at construction", "[lflang]") {
  CHECK_THROWS_AS(lf_apply(find_function("count"), {}), TypeError);
  CHECK_THROWS_AS(lf_apply(find_function("count"), {lf_num(Decimal(1))}), TypeError);
  CHECK_THROWS_AS(lf_apply(find_function("diff"), {lf_num(Decimal(1))}), TypeError);
  CHECK_THROWS_AS(
      lf_apply(find_function("filter_number_greater"),
               {lf_all_rows(), lf_num(Decimal(1)), lf_num(Decimal(1))}),
      TypeError);
  CHECK_THROWS_AS(lf_apply(nullptr, {}), TypeError);

  auto ok = lf_apply(find_function("count"), {lf_all_rows()});
  CHECK(ok->kind == ValueKind::Num);
  CHECK(ok->depth == 1);
  auto nested = lf_apply(
      find_function("count"),
      {lf_apply(find_function("argmax_number"), {lf_all_rows(), lf_relation("score")})});
  CHECK(nested->depth == 2);
  CHECK(lf_all_rows()->depth == 0);
}

TEST_CASE("canonical s-expressions round-trip", "[lflang]") {
  for (const char* text : {
           "all_rows",
           "(count all_rows)",
           "(count (filter_number_lesser all_rows num 10000))",
           "(diff 16300000 12000000)",
           "(plus (diff 150 25) 0.5)",
           "(select_string (argmax_number all_rows score) player)",
           "(filter_string_contains all_rows player \"Kasay\")",
           "(filter_date_equals all_rows when (date 1992 3 2))",
           "(filter_date_greater all_rows when (date 1518 5))",
           "(filter_date_lesser all_rows when (date 1543))",
           "(first_by_date all_rows when)",
           "(last_by_date (filter_number_greater all_rows score 40) when)",
           "(sum (select_number all_rows score))",
           "(max (select_number all_rows score))",
           "(min (select_number all_rows score))",
           "(plus -3 -0.25)",
       }) {
    LFPtr lf = parse_lf(text);
    CHECK(print_lf(lf) == text);
    CHECK(print_lf(parse_lf(print_lf(lf))) == text);
  }
}

TEST_CASE("date literals use year month day with underscores", "[lflang]") {
  CHECK(parse_lf("(filter_date_equals all_rows when (date 1992 3 2))")
            ->children[2]
            ->date == Date{2, 3, 1992});
  CHECK(parse_lf("(filter_date_equals all_rows when (date _ 5))")->children[2]->date ==
        Date{std::nullopt, 5, std::nullopt});
  CHECK(parse_lf("(filter_date_equals all_rows when (date _ _ 3))")->children[2]->date ==
        Date{3, std::nullopt, std::nullopt});
  CHECK(parse_lf("(filter_date_equals all_rows when (date 1543))")->children[2]->date ==
        Date{std::nullopt, std::nullopt, 1543});

  // Partial dates print their own canonical shape.
  for (const char* text : {"(date 1992 3 2)", "(date _ 5)", "(date _ _ 3)", "(date 1543)",
                           "(date 1992 _ 7)"}) {
    std::string wrapped = std::string("(filter_date_equals all_rows when ") + text + ")";
    CHECK(print_lf(parse_lf(wrapped)) == wrapped);
  }

  CHECK_THROWS_AS(parse_lf("(filter_date_equals all_rows when (date))"), ParseError);
  CHECK_THROWS_AS(parse_lf("(filter_date_equals all_rows when (date _ _ _))"), ParseError);
  CHECK_THROWS_AS(parse_lf("(filter_date_equals all_rows when (date 1 2 3 4))"), ParseError);
  CHECK_THROWS_AS(parse_lf("(filter_date_equals all_rows when (date soon))"), ParseError);
  CHECK_THROWS_AS(parse_lf("(filter_date_equals all_rows when (date 1992 0))"), ParseError);
}

TEST_CASE("string literals escape quotes and backslashes", "[lflang]") {
  std::string text = R"((filter_string_contains all_rows player "say \"hi\" \\ back"))";
  LFPtr lf = parse_lf(text);
  CHECK(lf->children[2]->atom == R"(say "hi" \ back)");
  CHECK(print_lf(lf) == text);
}

TEST_CASE("parser rejects malformed input", "[lflang]") {
  CHECK_THROWS_AS(parse_lf(""), ParseError);
  CHECK_THROWS_AS(parse_lf("("), ParseError);
  CHECK_THROWS_AS(parse_lf(")"), ParseError);
  CHECK_THROWS_AS(parse_lf("(count all_rows"), ParseError);
  CHECK_THROWS_AS(parse_lf("(count all_rows) extra"), ParseError);
  CHECK_THROWS_AS(parse_lf("(unknown_fn all_rows)"), ParseError);
  CHECK_THROWS_AS(parse_lf("(\"count\" all_rows)"), ParseError);
  CHECK_THROWS_AS(parse_lf("(count all_rows all_rows)"), TypeError);
  CHECK_THROWS_AS(parse_lf("(count 5)"), TypeError);
  // A bare atom that is not a number or all_rows parses as a relation.
  CHECK(parse_lf("score")->kind == ValueKind::Relation);
  CHECK(parse_lf("-12.5")->kind == ValueKind::Num);
  CHECK(parse_lf("all_rows")->kind == ValueKind::Rows);
}

TEST_CASE("counting and numeric filters", "[lflang]") {
  PredArgTable t = census_table();
  CHECK(run("(count all_rows)", t).num == Decimal(5));
  CHECK(run("(count (filter_number_lesser all_rows population 10000))", t).num ==
        Decimal(3));
  CHECK(run("(count (filter_number_greater all_rows population 10000))", t).num ==
        Decimal(2));
  CHECK(run("(count (filter_number_equals all_rows population 8595))", t).num ==
        Decimal(1));
  CHECK(run("(count (filter_number_equals all_rows population 8596))", t).num ==
        Decimal(0));
  // Rows lacking the cell never pass a filter.
  PredArgTable g = game_table();
  auto v = run("(filter_number_greater all_rows score 0)", g);
  CHECK(v.rows == std::vector<std::size_t>{0, 1, 2, 3});
  auto filtered = run("(filter_number_greater (filter_number_lesser all_rows score 44) score 40)", g);
  CHECK(filtered.rows == std::vector<std::size_t>{0});
}

TEST_CASE("date filters compare by calendar order", "[lflang]") {
  PredArgTable g = game_table();
  auto eq = run("(filter_date_equals all_rows when (date 1992 3 2))", g);
  CHECK(eq.rows == std::vector<std::size_t>{0});
  // Partial dates: absent fields sort before present ones.
  auto later = run("(filter_date_greater all_rows when (date 1991))", g);
  CHECK(later.rows == std::vector<std::size_t>{0, 1});
  auto earlier = run("(filter_date_lesser all_rows when (date 1992))", g);
  CHECK(earlier.rows == std::vector<std::size_t>{2});
  // Row 3 has no date cell and never matches.
  auto all_dates = run("(filter_date_greater all_rows when (date 1000))", g);
  CHECK(all_dates.rows == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("string containment is case-insensitive substring", "[lflang]") {
  PredArgTable g = game_table();
  auto v = run("(filter_string_contains all_rows player \"kasay\")", g);
  CHECK(v.rows == std::vector<std::size_t>{1, 2});
  auto partial = run("(filter_string_contains all_rows player \"ra\")", g);
  CHECK(partial.rows == std::vector<std::size_t>{0});  // Prater
  auto none = run("(filter_string_contains all_rows player \"zz\")", g);
  CHECK(none.rows.empty());
}

TEST_CASE("argmax and argmin keep all tied rows in order", "[lflang]") {
  PredArgTable g = game_table();
  CHECK(run("(argmax_number all_rows score)", g).rows == std::vector<std::size_t>{2, 3});
  CHECK(run("(argmin_number all_rows score)", g).rows == std::vector<std::size_t>{1});
  // Extremum of rows that all lack the key is empty, not an error.
  PredArgTable empty_scores;
  empty_scores.passage_id = "x";
  empty_scores.provenance = "imported";
  empty_scores.relations = {"player", "score"};
  empty_scores.rows.push_back(row({{"player", "A"}}));
  CHECK(run("(argmax_number all_rows score)", empty_scores).rows.empty());
}

TEST_CASE("selection deduplicates and skips missing cells", "[lflang]") {
  PredArgTable g = game_table();
  auto names = run("(select_string all_rows player)", g);
  CHECK(names.str_set == std::vector<std::string>{"Prater", "Kasay", "Elam"});
  auto nums = run("(select_number all_rows score)", g);
  CHECK(nums.num_set == std::vector<Decimal>{43, 39, 44});  // 44 appears once
  auto dates = run("(select_date all_rows when)", g);
  REQUIRE(dates.date_set.size() == 3);
  CHECK(dates.date_set[0] == Date{2, 3, 1992});
  CHECK(dates.date_set[2] == Date{std::nullopt, std::nullopt, 1991});
}

TEST_CASE("aggregates over number sets", "[lflang]") {
  PredArgTable g = game_table();
  CHECK(run("(sum (select_number all_rows score))", g).num == Decimal(43 + 39 + 44));
  CHECK(run("(max (select_number all_rows score))", g).num == Decimal(44));
  CHECK(run("(min (select_number all_rows score))", g).num == Decimal(39));
  // Sum of nothing is zero; extrema of nothing are undefined.
  CHECK(run("(sum (select_number (filter_number_greater all_rows score 99) score))", g)
            .num == Decimal(0));
  CHECK_THROWS_AS(
      run("(max (select_number (filter_number_greater all_rows score 99) score))", g),
      ExecutionError);
  CHECK_THROWS_AS(
      run("(min (select_number (filter_number_greater all_rows score 99) score))", g),
      ExecutionError);
}

TEST_CASE("arithmetic stays exact through execution", "[lflang]") {
  PredArgTable g = game_table();
  CHECK(run("(diff 16300000 12000000)", g).num == Decimal(4300000));
  CHECK(run("(plus 1683 15)", g).num == Decimal(1698));
  CHECK(run("(diff 150 25)", g).num == Decimal(125));
  CHECK(run("(diff 0.1 0.3)", g).num == *Decimal::parse("-0.2"));
  CHECK(run("(plus (diff 16300000 12000000) 0)", g).num == Decimal(4300000));
}

TEST_CASE("date ordering selects first and last rows", "[lflang]") {
  PredArgTable g = game_table();
  CHECK(run("(first_by_date all_rows when)", g).rows == std::vector<std::size_t>{2});
  CHECK(run("(last_by_date all_rows when)", g).rows == std::vector<std::size_t>{0});
}

TEST_CASE("missing relations fail at execution, not parse", "[lflang]") {
  PredArgTable g = game_table();
  LFPtr lf = parse_lf("(count (filter_number_greater all_rows bogus 1))");
  CHECK_THROWS_AS(execute(lf, g), ExecutionError);
  CHECK_THROWS_WITH(execute(lf, g), Catch::Matchers::ContainsSubstring("bogus"));
}

TEST_CASE("executing over an empty table", "[lflang]") {
  PredArgTable empty;
  empty.passage_id = "void";
  empty.provenance = "imported";
  empty.relations = {"a"};
  CHECK(run("(count all_rows)", empty).num == Decimal(0));
  CHECK(run("(select_string all_rows a)", empty).str_set.empty());
  CHECK_FALSE(to_answer(run("(select_string all_rows a)", empty), empty));
}

TEST_CASE("denotations convert to answers", "[lflang]") {
  PredArgTable g = game_table();
  auto num = to_answer(run("(count all_rows)", g), g);
  REQUIRE(num);
  CHECK(num->kind == Answer::Kind::Number);
  CHECK(num->number == Decimal(4));

  auto rows = to_answer(run("(argmax_number all_rows score)", g), g);
  REQUIRE(rows);
  CHECK(rows->spans == std::vector<std::string>{"Kasay", "Elam"});

  auto one_num = to_answer(run("(select_number (argmin_number all_rows score) score)", g), g);
  REQUIRE(one_num);
  CHECK(one_num->kind == Answer::Kind::Number);
  CHECK(one_num->number == Decimal(39));

  auto many_nums = to_answer(run("(select_number all_rows score)", g), g);
  REQUIRE(many_nums);
  CHECK(many_nums->kind == Answer::Kind::Spans);
  CHECK(many_nums->spans == std::vector<std::string>{"43", "39", "44"});

  auto one_date = to_answer(run("(select_date (first_by_date all_rows when) when)", g), g);
  REQUIRE(one_date);
  CHECK(one_date->kind == Answer::Kind::Date);
  CHECK(one_date->date == Date{std::nullopt, std::nullopt, 1991});

  CHECK_FALSE(to_answer(run("(filter_number_greater all_rows score 99)", g), g));
  Value rel;
  rel.kind = ValueKind::Relation;
  rel.relation = "score";
  CHECK_FALSE(to_answer(rel, g));
}

TEST_CASE("filters are monotone and order-preserving", "[lflang]") {
  std::mt19937 rng(435411);
  std::uniform_int_distribution<int> val(0, 30), rows_n(1, 9);
  for (int trial = 0; trial < 300; ++trial) {
    PredArgTable t;
    t.passage_id = "fuzz";
    t.provenance = "imported";
    t.relations = {"num"};
    int n = rows_n(rng);
    std::vector<int> values;
    for (int i = 0; i < n; ++i) {
      values.push_back(val(rng));
      t.rows.push_back(row({{"num", std::to_string(values.back())}}));
    }
    int cut = val(rng);
    auto kept = run("(filter_number_greater all_rows num " + std::to_string(cut) + ")", t);
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] > cut) expect.push_back(i);
    REQUIRE(kept.rows == expect);

    auto top = run("(argmax_number all_rows num)", t);
    int best = *std::max_element(values.begin(), values.end());
    for (std::size_t idx : top.rows) REQUIRE(values[idx] == best);
    REQUIRE_FALSE(top.rows.empty());
  }
}

TEST_CASE("grammar induction shares strings between question and passage", "[lflang]") {
  Passage p = make_passage(
      "kick", "Connor Barth kicked a 23-yard field goal. Graham Gano kicked two field "
              "goals in the final quarter.");
  QuestionAnswer qa;
  qa.question_id = "kick";
  qa.question_text = "Which kicker kicked the most field goals?";
  qa.question_tokens = tokenize(qa.question_text);
  PredArgTable table = pattern_extract(p);
  REQUIRE_FALSE(table.rows.empty());

  Grammar g = induce_grammar(qa, p, table);
  CHECK(g.functions.size() == 20);
  CHECK(g.relation_terminals ==
        std::vector<std::string>{"pred", "arg0", "arg1", "num", "date"});

  // Independent computation of the shared lowercased vocabulary, question order.
  std::set<std::string> passage_vocab;
  for (const auto& t : p.tokens) passage_vocab.insert(detail::to_lower(t.text));
  std::vector<std::string> expect;
  std::set<std::string> seen;
  for (const auto& t : qa.question_tokens) {
    std::string low = detail::to_lower(t.text);
    if (passage_vocab.count(low) && seen.insert(low).second) expect.push_back(low);
  }
  CHECK(g.str_terminals == expect);
  CHECK(std::find(expect.begin(), expect.end(), "kicked") != expect.end());
  CHECK(std::find(expect.begin(), expect.end(), "field") != expect.end());
  CHECK(std::find(expect.begin(), expect.end(), "goals") != expect.end());

  // Numbers: question first, then passage mentions, deduplicated.
  CHECK(g.num_terminals == std::vector<Decimal>{23});
  // Dates come from the table cells; this passage has none.
  CHECK(g.date_terminals.empty());
  // No embedding table was supplied.
  REQUIRE(g.warnings.size() == 1);
  CHECK(g.warnings[0] == "no embedding table; neighbor rule skipped");
}

TEST_CASE("grammar induction validates inputs", "[lflang]") {
  Passage p = make_passage("x", "Smith scored 3 points.");
  QuestionAnswer qa;
  qa.question_id = "x";
  qa.question_text = "How many points?";
  qa.question_tokens = tokenize(qa.question_text);
  PredArgTable table = pattern_extract(p);

  ContextRuleConfig bad;
  bad.cosine_distance_threshold = -0.1;
  CHECK_THROWS_AS(induce_grammar(qa, p, table, bad), ValidationError);
  bad.cosine_distance_threshold = 2.5;
  CHECK_THROWS_AS(induce_grammar(qa, p, table, bad), ValidationError);

  PredArgTable empty;
  empty.passage_id = "x";
  empty.provenance = "pattern";
  empty.relations = {"pred"};
  CHECK_THROWS_AS(induce_grammar(qa, p, empty), ValidationError);
}

TEST_CASE("embedding neighbors join the string terminals", "[lflang]") {
  std::string emb_text =
      "kicker 1 0 0\n"
      "punter 0.96 0.28 0\n"
      "quarterback 0 1 0\n"
      "field 0 0 1\n"
      "pitch 0.1 0 0.99\n";
  EmbeddingTable emb = parse_embeddings(emb_text);
  CHECK(emb.dim == 3);
  CHECK(emb.vectors.size() == 5);

  Passage p = make_passage("n1", "The punter kicked from the pitch after Smith scored 3.");
  QuestionAnswer qa;
  qa.question_id = "n1";
  qa.question_text = "Did the kicker leave the field?";
  qa.question_tokens = tokenize(qa.question_text);
  PredArgTable table = pattern_extract(p);
  REQUIRE_FALSE(table.rows.empty());

  auto terminals = [&](double thr) {
    ContextRuleConfig cfg;
    cfg.embeddings = &emb;
    cfg.cosine_distance_threshold = thr;
    return induce_grammar(qa, p, table, cfg).str_terminals;
  };

  // cos(kicker, punter) = 0.96 -> distance 0.04; cos(field, pitch) ~ 0.995.
  auto tight = terminals(0.0);
  CHECK(std::find(tight.begin(), tight.end(), "punter") == tight.end());
  auto def = terminals(0.3);
  CHECK(std::find(def.begin(), def.end(), "punter") != def.end());
  CHECK(std::find(def.begin(), def.end(), "pitch") != def.end());
  CHECK(std::find(def.begin(), def.end(), "quarterback") == def.end());

  // Monotone in the threshold: a looser radius only adds terminals.
  auto loose = terminals(2.0);
  for (const auto& w : def) CHECK(std::find(loose.begin(), loose.end(), w) != loose.end());
  for (const auto& w : tight) CHECK(std::find(def.begin(), def.end(), w) != def.end());

  // With embeddings present there is no warning.
  ContextRuleConfig cfg;
  cfg.embeddings = &emb;
  CHECK(induce_grammar(qa, p, table, cfg).warnings.empty());
}

TEST_CASE("embedding files validate shape", "[lflang]") {
  CHECK_THROWS_AS(parse_embeddings("word 1 2\nother 1 2 3\n"), ValidationError);
  CHECK_THROWS_AS(parse_embeddings("word\n"), ParseError);
  CHECK_THROWS_AS(parse_embeddings("word 1 banana\n"), ParseError);
  CHECK(parse_embeddings("").vectors.empty());

  EmbeddingTable t = parse_embeddings("a 1 0\nb 0 1\nc -1 0\nz 0 0\n");
  CHECK(*cosine_distance(t, "a", "a") == Catch::Approx(0.0));
  CHECK(*cosine_distance(t, "a", "b") == Catch::Approx(1.0));
  CHECK(*cosine_distance(t, "a", "c") == Catch::Approx(2.0));
  CHECK_FALSE(cosine_distance(t, "a", "missing"));
  CHECK_FALSE(cosine_distance(t, "a", "z"));  // zero vector never matches
}
