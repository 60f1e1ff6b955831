#include <iostream>
#include <sstream>

#include "common.hpp"
#include "sentikit/csv.hpp"
#include "sentikit/error.hpp"
#include "sentikit/tokenize.hpp"
#include "sentikit/util.hpp"
#include "sentikit/vader.hpp"

namespace sentikit::cli {

namespace {

void add_score(CLI::App& app) {
  struct Opts {
    LexiconOptions lex;
    std::string input, output, engine = "vader", field = "headline_synopsis", emoji, segment = "all";
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("score-lexicon", "per-article lexicon scores");
  cmd->add_option("--input", o->input,
                  "article JSONL (ingested text for the vader engine, cleaned text for lm)")
      ->required()->check(CLI::ExistingFile);
  add_lexicon_options(cmd, o->lex);
  cmd->add_option("--engine", o->engine, "vader or lm")->check(CLI::IsMember({"vader", "lm"}));
  cmd->add_option("--field", o->field, "headline_synopsis or full_text")
      ->check(CLI::IsMember({"headline_synopsis", "full_text"}));
  cmd->add_option("--segment", o->segment, "financial, non_financial or all")
      ->check(CLI::IsMember({"financial", "non_financial", "all"}));
  cmd->add_option("--emoji-lexicon", o->emoji, "emoji description table (vader engine)")->check(CLI::ExistingFile);
  cmd->add_option("--output", o->output, "scores CSV")->required();
  cmd->callback([o, cmd] {
    if (o->engine == "lm" && cmd->count("--lexicon-format") == 0) o->lex.format = "lm_csv";
    auto lex = load_lexicon(o->lex);
    std::optional<vader::EmojiLexicon> emojis;
    if (!o->emoji.empty()) emojis = vader::load_emoji_lexicon(o->emoji);
    auto field = corpus::parse_text_field(o->field);

    std::vector<corpus::NewsArticle> articles;
    std::size_t missing = 0;
    for (auto& a : read_articles(o->input)) {
      if (!in_segment(a, o->segment)) continue;
      if (!a.field(field)) {
        ++missing;
        continue;
      }
      articles.push_back(std::move(a));
    }
    std::vector<lexicon::SentimentScore> scores(articles.size());
    const bool use_vader = o->engine == "vader";
    std::vector<std::string> errors(articles.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t i = 0; i < articles.size(); ++i) {
      try {
        auto text = *articles[i].field(field);
        scores[i] = use_vader ? vader::score_vader(text, lex, emojis ? &*emojis : nullptr)
                              : lexicon::score_lm(tokenize::word_tokenize(text), lex);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
    for (const auto& e : errors)
      if (!e.empty()) fail(ErrorKind::parameter, e);

    std::ostringstream out;
    csv::write_row(out, {"id", "publish_datetime", "segment", "pos_count", "neg_count", "token_count",
                         "polarity", "subjectivity", "compound", "no_signal"});
    for (std::size_t i = 0; i < articles.size(); ++i) {
      const auto& s = scores[i];
      csv::write_row(out, {articles[i].id, articles[i].publish_datetime,
                           std::string(corpus::to_string(articles[i].segment)), std::to_string(s.pos_count),
                           std::to_string(s.neg_count), std::to_string(s.token_count),
                           format_double(s.polarity), format_double(s.subjectivity),
                           s.compound ? format_double(*s.compound) : "", s.no_signal ? "true" : "false"});
    }
    write_file(o->output, out.str());
    note("scored " + std::to_string(articles.size()) + " articles with " + lex.name() +
         (missing ? ", skipped " + std::to_string(missing) + " without " + o->field : ""));
  });
}

void add_merge(CLI::App& app) {
  struct Opts {
    LexiconOptions vader, lm;
    std::string strategy, output;
  };
  auto o = std::make_shared<Opts>();
  o->lm.format = "lm_csv";
  o->lm.scale = "plus_minus_1";
  auto* cmd = app.add_subcommand("merge-lexicons", "build LM-in-VADER or VADER-in-LM");
  cmd->add_option("--strategy", o->strategy, "lm-in-vader or vader-in-lm")
      ->required()->check(CLI::IsMember({"lm-in-vader", "vader-in-lm"}));
  add_lexicon_options(cmd, o->vader, "vader-");
  add_lexicon_options(cmd, o->lm, "lm-");
  cmd->add_option("--output", o->output, "merged lexicon as word,valence CSV")->required();
  cmd->callback([o] {
    auto v = load_lexicon(o->vader);
    auto l = load_lexicon(o->lm);
    auto merged = o->strategy == "lm-in-vader" ? lexicon::merge_lm_in_vader(v, l) : lexicon::merge_vader_in_lm(l, v);
    write_file(o->output, lexicon::to_valence_csv(merged));
    note(o->strategy + ": " + std::to_string(merged.size()) + " words, scale " +
         std::string(lexicon::to_string(merged.scale())));
  });
}

void add_diff(CLI::App& app) {
  struct Opts {
    LexiconOptions left, right;
    std::string output;
  };
  auto o = std::make_shared<Opts>();
  o->left.format = "lm_csv";
  o->left.scale = "plus_minus_1";
  auto* cmd = app.add_subcommand("diff-lexicons", "common words and polarity disagreements of two lexicons");
  add_lexicon_options(cmd, o->left, "left-");
  add_lexicon_options(cmd, o->right, "right-");
  cmd->add_option("--output", o->output, "metric,value CSV (default: stdout only)");
  cmd->callback([o] {
    auto d = lexicon::diff_lexicons(load_lexicon(o->left), load_lexicon(o->right));
    std::ostringstream out;
    csv::write_row(out, {"metric", "value"});
    const std::pair<const char*, std::size_t> rows[] = {
        {"common_words", d.common_words},
        {"common_negative", d.common_negative},
        {"common_positive", d.common_positive},
        {"left_negative_right_positive", d.left_neg_right_pos},
        {"left_positive_right_negative", d.left_pos_right_neg},
        {"exclusive_left", d.exclusive_left},
        {"exclusive_right", d.exclusive_right},
    };
    for (const auto& [k, v] : rows) csv::write_row(out, {k, std::to_string(v)});
    std::cout << out.str();
    if (!o->output.empty()) write_file(o->output, out.str());
  });
}

}  // namespace

void add_lexicon_commands(CLI::App& app, const Globals&) {
  add_score(app);
  add_merge(app);
  add_diff(app);
}

}  // namespace sentikit::cli
