#include <iostream>
#include <set>

#include "common.hpp"
#include "sentikit/csv.hpp"
#include "sentikit/error.hpp"
#include "sentikit/tokenize.hpp"
#include "sentikit/util.hpp"
#include "sentikit/vader.hpp"

namespace sentikit::cli {

namespace {

void add_evaluate(CLI::App& app, const Globals& g) {
  struct Opts {
    std::string method, labels, field = "both", segment = "each", output;
    std::string engine, raw, clean, emoji;
    LexiconOptions lex;
    std::string checkpoint, tokenizer;
    double test_fraction = 0.2;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("evaluate", "accuracy of a lexicon method or a trained Bi-LSTM on labeled articles");
  cmd->add_option("--method", o->method, "method name written to the report")->required();
  cmd->add_option("--labels", o->labels, "labels CSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--field", o->field, "headline_synopsis, full_text or both")
      ->check(CLI::IsMember({"headline_synopsis", "full_text", "both"}));
  cmd->add_option("--segment", o->segment, "financial, non_financial, all or each")
      ->check(CLI::IsMember({"financial", "non_financial", "all", "each"}));
  cmd->add_option("--clean", o->clean, "cleaned JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--output", o->output, "report CSV")->required();

  auto* engine = cmd->add_option("--engine", o->engine, "lexicon engine: vader or lm")
                     ->check(CLI::IsMember({"vader", "lm"}));
  cmd->add_option("--raw", o->raw, "ingested JSONL (original text for the vader engine)")->check(CLI::ExistingFile);
  cmd->add_option("--emoji-lexicon", o->emoji, "emoji description table")->check(CLI::ExistingFile);
  cmd->add_option("--lexicon", o->lex.path, "lexicon file")->check(CLI::ExistingFile);
  cmd->add_option("--lexicon-format", o->lex.format, "vader_tsv, lm_csv or valence_csv (default: lm_csv for the lm engine, else vader_tsv)")
      ->check(CLI::IsMember({"vader_tsv", "lm_csv", "valence_csv"}));
  cmd->add_option("--valence-scale", o->lex.scale, "scale of a valence_csv lexicon")
      ->check(CLI::IsMember({"plus_minus_4", "plus_minus_1"}));

  auto* ckpt = cmd->add_option("--checkpoint", o->checkpoint, "Bi-LSTM checkpoint")->check(CLI::ExistingFile);
  cmd->add_option("--tokenizer", o->tokenizer, "WordPiece vocab of the checkpoint")->check(CLI::ExistingFile);
  cmd->add_option("--test-fraction", o->test_fraction, "must match the value used for training");
  engine->excludes(ckpt);

  cmd->callback([o, cmd, &g] {
    auto clean = read_articles(o->clean);
    auto labels = sampling::read_labels(o->labels);
    std::vector<eval::ReportRow> rows;

    if (!o->checkpoint.empty()) {
      if (o->tokenizer.empty()) fail(ErrorKind::parameter, "--checkpoint needs --tokenizer");
      if (o->field == "both" || o->segment == "each")
        fail(ErrorKind::parameter, "model evaluation needs one --field and one --segment");
      auto tok = tokenize::load_wordpiece(o->tokenizer);
      auto model = neural::load_checkpoint(o->checkpoint);
      if (model.vocab_hash != neural::vocab_hash(tok))
        fail(ErrorKind::predict, "tokenizer does not match the checkpoint vocabulary");
      auto data = sequence_data(labeled_docs(clean, labels, o->segment, corpus::parse_text_field(o->field)), tok);
      std::vector<int> y;
      for (const auto& e : data.examples) y.push_back(e.second);
      auto split = model_split(y, o->test_fraction, g.seed);
      for (const auto* part : {&split.train, &split.test}) {
        std::vector<int> truth;
        for (auto i : *part) truth.push_back(y[i]);
        rows.push_back(report_row(o->method, o->field, o->segment, part == &split.train ? "train" : "test",
                                  bilstm_predictions(model, data.examples, *part), truth));
      }
    } else {
      if (o->engine.empty()) fail(ErrorKind::parameter, "give --engine (lexicon) or --checkpoint (model)");
      if (o->lex.path.empty()) fail(ErrorKind::parameter, "--engine needs --lexicon");
      const bool use_vader = o->engine == "vader";
      if (use_vader && o->raw.empty()) fail(ErrorKind::parameter, "the vader engine scores original text; give --raw");
      if (o->engine == "lm" && cmd->count("--lexicon-format") == 0) o->lex.format = "lm_csv";
      auto lex = load_lexicon(o->lex);
      std::optional<vader::EmojiLexicon> emojis;
      if (!o->emoji.empty()) emojis = vader::load_emoji_lexicon(o->emoji);
      std::map<std::string, corpus::NewsArticle> raw;
      if (!o->raw.empty()) raw = by_id(read_articles(o->raw));

      eval::Scorer scorer = [&](const eval::EvalItem& item) {
        return use_vader ? vader::score_vader(item.raw_text, lex, emojis ? &*emojis : nullptr)
                         : lexicon::score_lm(tokenize::word_tokenize(item.clean_text), lex);
      };
      for (auto field : expand_fields(o->field)) {
        for (const auto& segment : expand_segments(o->segment)) {
          std::vector<eval::EvalItem> items;
          for (const auto& d : labeled_docs(clean, labels, segment, field)) {
            eval::EvalItem item{"", d.text, d.label};
            if (!raw.empty()) {
              auto it = raw.find(d.id);
              auto text = it == raw.end() ? std::nullopt : it->second.field(field);
              if (!text) fail(ErrorKind::validation, "article " + d.id + " has no original " + std::string(corpus::to_string(field)));
              item.raw_text = *text;
            }
            items.push_back(std::move(item));
          }
          if (items.empty()) {
            note("note: no labeled " + segment + " articles with " + std::string(corpus::to_string(field)));
            continue;
          }
          rows.push_back({o->method, std::string(corpus::to_string(field)), segment, "all",
                          eval::lexicon_accuracy(items, scorer)});
        }
      }
    }
    write_file(o->output, eval::report_csv(rows));
    for (const auto& r : rows)
      note(r.method + " " + r.field + " " + r.segment + " " + r.split + ": accuracy " +
           format_double(r.accuracy()) + " (n=" + std::to_string(r.confusion.n()) +
           ", no signal " + std::to_string(r.confusion.no_signal) + ")");
  });
}

void add_correlate(CLI::App& app) {
  struct Opts {
    std::vector<std::string> scores;
    std::string from, to, output;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("correlate", "Pearson correlation between per-article scores of several methods");
  cmd->add_option("--scores", o->scores, "NAME=scores.csv from score-lexicon (repeat)")->required();
  cmd->add_option("--from", o->from, "keep articles published at or after this ISO date");
  cmd->add_option("--to", o->to, "keep articles published before this ISO date");
  cmd->add_option("--output", o->output, "correlation matrix CSV")->required();
  cmd->callback([o] {
    std::vector<std::pair<std::string, std::vector<double>>> series;
    std::vector<std::string> reference_ids;
    for (const auto& entry : o->scores) {
      auto eq = entry.find('=');
      if (eq == std::string::npos || eq == 0) fail(ErrorKind::parameter, "--scores expects NAME=PATH, got " + entry);
      std::string name = entry.substr(0, eq), path = entry.substr(eq + 1);
      auto rows = csv::parse(read_file(path));
      if (rows.empty()) fail(ErrorKind::parse, path + ": empty scores file");
      csv::Header h(rows.front());
      auto c_id = h.require("id"), c_date = h.require("publish_datetime");
      auto c_comp = h.require("compound"), c_pol = h.require("polarity");
      std::map<std::string, double> by;
      for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != h.size()) fail(ErrorKind::parse, path + ": bad row " + std::to_string(i));
        const auto& date = r[c_date];
        if (!o->from.empty() && date < o->from) continue;
        if (!o->to.empty() && date >= o->to) continue;
        by[r[c_id]] = parse_double(r[c_comp].empty() ? r[c_pol] : r[c_comp]);
      }
      std::vector<std::string> ids;
      std::vector<double> values;
      for (const auto& [id, v] : by) {
        ids.push_back(id);
        values.push_back(v);
      }
      if (series.empty()) reference_ids = ids;
      else if (ids != reference_ids) fail(ErrorKind::validation, path + ": article set differs from the first scores file");
      series.emplace_back(name, std::move(values));
    }
    auto m = eval::correlate(series);
    auto text = eval::correlation_csv(m);
    write_file(o->output, text);
    std::cout << text;
    note("correlated " + std::to_string(series.size()) + " methods over " + std::to_string(reference_ids.size()) + " articles");
  });
}

void add_report(CLI::App& app) {
  struct Opts {
    std::vector<std::string> inputs;
    std::string output_dir;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("report", "merge report CSVs and render the lexicon and model tables");
  cmd->add_option("--input", o->inputs, "report CSVs (repeat)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--output-dir", o->output_dir, "directory for report.csv, lexicon_table.txt, model_table.txt")->required();
  cmd->callback([o] {
    std::vector<eval::ReportRow> rows;
    for (const auto& p : o->inputs)
      for (auto& r : eval::parse_report_csv(read_file(p))) rows.push_back(std::move(r));
    std::filesystem::path dir(o->output_dir);
    auto lex_table = eval::render_lexicon_table(rows);
    auto model_table = eval::render_model_table(rows);
    write_file(dir / "report.csv", eval::report_csv(rows));
    write_file(dir / "lexicon_table.txt", lex_table);
    write_file(dir / "model_table.txt", model_table);
    std::cout << "Lexicon methods\n" << lex_table << "\nModels\n" << model_table;
  });
}

}  // namespace

void add_eval_commands(CLI::App& app, const Globals& g) {
  add_evaluate(app, g);
  add_correlate(app);
  add_report(app);
}

}  // namespace sentikit::cli
