#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "discern/corpus.hpp"
#include "discern/fixtures.hpp"
#include "discern/lflang.hpp"
#include "discern/metrics.hpp"
#include "discern/search.hpp"
#include "discern/tables.hpp"

#define DISCERN_VERSION "0.1.0"

namespace {

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct QuestionContext {
  const discern::Passage* passage = nullptr;
  const discern::QuestionAnswer* qa = nullptr;
};

QuestionContext find_question_or_throw(const discern::Dataset& ds,
                                       const std::string& qid) {
  auto [passage, qa] = ds.find_question(qid);
  if (!qa)
    throw discern::ValidationError("question \"" + qid + "\" not found in dataset");
  return {passage, qa};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-reasoning answer evaluation, logical-form execution, "
               "and denotation search over predicate-argument tables"};
  app.set_version_flag("--version", DISCERN_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  bool json_out = false;
  bool word_numbers = false;
  app.add_flag("--json", json_out, "machine-readable JSON on stdout");
  app.add_flag("--word-numbers", word_numbers,
               "also read spelled-out numbers up to one hundred");

  std::string gold_path, pred_path;
  bool per_type = false;
  int jobs = 1;
  auto* cmd_eval = app.add_subcommand("evaluate", "score predictions against gold");
  cmd_eval->add_option("--gold", gold_path, "gold dataset JSON")->required();
  cmd_eval->add_option("--pred", pred_path, "prediction JSON")->required();
  cmd_eval->add_flag("--per-type", per_type, "break scores down by answer type");
  cmd_eval->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  std::string tables_path, passage_id, lf_text;
  auto* cmd_exec = app.add_subcommand("exec-lf", "execute one logical form");
  cmd_exec->add_option("--tables", tables_path, "table file JSON")->required();
  cmd_exec->add_option("--passage-id", passage_id, "table to execute against")
      ->required();
  cmd_exec->add_option("--lf", lf_text, "s-expression logical form")->required();

  std::string dataset_path, question_id, embeddings_path;
  int depth = 4;
  std::size_t max_forms = 10000, max_candidates = 1000000;
  double threshold = 0.3;
  auto* cmd_slf = app.add_subcommand("search-lf",
                                     "exhaustive logical-form search for one question");
  cmd_slf->add_option("--tables", tables_path, "table file JSON")->required();
  cmd_slf->add_option("--dataset", dataset_path, "dataset JSON")->required();
  cmd_slf->add_option("--question-id", question_id, "question to search")->required();
  cmd_slf->add_option("--depth", depth, "maximum tree depth")
      ->check(CLI::PositiveNumber);
  cmd_slf->add_option("--max-forms", max_forms, "cap on returned forms");
  cmd_slf->add_option("--max-candidates", max_candidates, "enumeration budget");
  cmd_slf->add_option("--embeddings", embeddings_path,
                      "word embeddings (text: word v1 v2 ...)");
  cmd_slf->add_option("--threshold", threshold, "cosine distance threshold");

  int max_terms = 2;
  auto* cmd_sexec = app.add_subcommand(
      "search-exec", "span/count/sign execution targets for one question");
  cmd_sexec->add_option("--dataset", dataset_path, "dataset JSON")->required();
  cmd_sexec->add_option("--question-id", question_id, "question to search")->required();
  cmd_sexec->add_option("--max-terms", max_terms, "sign-assignment term cap")
      ->check(CLI::PositiveNumber);

  std::string out_path;
  auto* cmd_extract = app.add_subcommand("extract-tables",
                                         "pattern-extract tables from a dataset");
  cmd_extract->add_option("--dataset", dataset_path, "dataset JSON")->required();
  cmd_extract->add_option("--out", out_path, "output path (stdout when omitted)");

  std::string out_dir;
  auto* cmd_fixtures = app.add_subcommand("fixtures", "write the bundled fixtures");
  cmd_fixtures->add_option("--out-dir", out_dir, "output directory")->required();

  for (auto* sub : app.get_subcommands({}))
    sub->set_version_flag("--version", DISCERN_VERSION);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  discern::TokenizeOptions opts;
  opts.numbers.word_numbers = word_numbers;

  try {
    if (*cmd_eval) {
      discern::Dataset ds = discern::load_dataset(gold_path, opts);
      discern::PredictionFile preds = discern::load_predictions(pred_path);
      print_warnings(preds.warnings);
      discern::EvalReport report = discern::evaluate(ds, preds.predictions, jobs);
      if (json_out) {
        discern::json j;
        j["em"] = report.em;
        j["f1"] = report.f1;
        j["question_count"] = report.question_count;
        j["predicted_count"] = report.predicted_count;
        j["by_type"] = discern::json::object();
        for (const auto& [type, b] : report.by_type) {
          discern::json tj;
          tj["count"] = b.count;
          tj["em"] = b.em;
          tj["f1"] = b.f1;
          j["by_type"][discern::answer_type_name(type)] = std::move(tj);
        }
        std::cout << j.dump() << "\n";
      } else {
        std::cout << "EM: " << pct(report.em) << "  F1: " << pct(report.f1) << "\n";
        if (per_type)
          for (const auto& [type, b] : report.by_type) {
            std::string name = discern::answer_type_name(type);
            name.resize(12, ' ');
            std::cout << name << "EM: " << pct(b.em) << "  F1: " << pct(b.f1)
                      << "  (" << b.count << ")\n";
          }
      }
      return 0;
    }

    if (*cmd_exec) {
      discern::TableSet tables = discern::load_tables(tables_path, opts.numbers);
      print_warnings(tables.warnings);
      const discern::PredArgTable* table = tables.find(passage_id);
      if (!table)
        throw discern::ValidationError("no table for passage \"" + passage_id + "\"");
      discern::LFPtr lf = discern::parse_lf(lf_text);
      discern::Value value = discern::execute(lf, *table);
      auto answer = discern::to_answer(value, *table);
      if (answer)
        std::cout << discern::detail::answer_to_json(*answer).dump() << "\n";
      else
        std::cout << "null\n";
      return 0;
    }

    if (*cmd_slf) {
      discern::Dataset ds = discern::load_dataset(dataset_path, opts);
      discern::TableSet tables = discern::load_tables(tables_path, opts.numbers);
      print_warnings(tables.warnings);
      QuestionContext ctx = find_question_or_throw(ds, question_id);
      const discern::PredArgTable* table = tables.find(ctx.passage->id);
      if (!table)
        throw discern::ValidationError("no table for passage \"" + ctx.passage->id +
                                       "\" (empty tables are skipped on import)");

      discern::EmbeddingTable embeddings;
      discern::ContextRuleConfig rule_cfg;
      rule_cfg.cosine_distance_threshold = threshold;
      if (!embeddings_path.empty()) {
        embeddings = discern::load_embeddings(embeddings_path);
        rule_cfg.embeddings = &embeddings;
      }
      discern::Grammar grammar = discern::induce_grammar(*ctx.qa, *ctx.passage, *table,
                                                         rule_cfg, opts.numbers);
      print_warnings(grammar.warnings);

      discern::SearchConfig cfg;
      cfg.max_depth = depth;
      cfg.max_forms = max_forms;
      cfg.max_candidates = max_candidates;
      discern::LFSearchResult result = discern::search_logical_forms(
          grammar, *table, ctx.qa->gold_answers.front(), cfg, opts.numbers);
      if (result.truncated) std::cerr << "warning: search truncated\n";

      if (json_out) {
        discern::json j;
        j["forms"] = discern::json::array();
        for (const auto& f : result.forms) j["forms"].push_back(f.text);
        j["truncated"] = result.truncated;
        std::cout << j.dump() << "\n";
      } else {
        for (const auto& f : result.forms) std::cout << f.text << "\n";
      }
      return 0;
    }

    if (*cmd_sexec) {
      discern::Dataset ds = discern::load_dataset(dataset_path, opts);
      QuestionContext ctx = find_question_or_throw(ds, question_id);
      discern::SearchConfig cfg;
      cfg.max_addsub_terms = max_terms;
      discern::ExecutionTargetSet targets = discern::search_execution_targets(
          *ctx.passage, *ctx.qa, ctx.qa->gold_answers.front(), cfg);
      std::cout << discern::targets_to_json(targets).dump() << "\n";
      return 0;
    }

    if (*cmd_extract) {
      discern::Dataset ds = discern::load_dataset(dataset_path, opts);
      std::string bytes = discern::serialize_tables(discern::extract_all(ds));
      if (out_path.empty()) {
        std::cout << bytes;
      } else {
        discern::detail::write_file(out_path, bytes);
        std::cerr << "wrote " << out_path << "\n";
      }
      return 0;
    }

    if (*cmd_fixtures) {
      discern::write_fixtures(out_dir);
      std::cerr << "wrote " << out_dir << "/fixtures.json\n";
      std::cerr << "wrote " << out_dir << "/fixtures_tables.json\n";
      return 0;
    }
  } catch (const discern::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
