#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "sentikit/classical.hpp"
#include "sentikit/csv.hpp"
#include "sentikit/error.hpp"
#include "sentikit/features.hpp"
#include "sentikit/tokenize.hpp"
#include "sentikit/util.hpp"

namespace sentikit::cli {

namespace {

template <class T>
std::vector<T> pick(const std::vector<T>& v, const std::vector<std::size_t>& idx) {
  std::vector<T> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

void add_train_tokenizer(CLI::App& app) {
  struct Opts {
    std::string input, output, segment = "financial", field = "both";
    int vocab_size = 8000, max_word_chars = 100;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("train-tokenizer", "train a WordPiece vocabulary");
  cmd->add_option("--input", o->input, "cleaned JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--segment", o->segment, "financial, non_financial or all")
      ->check(CLI::IsMember({"financial", "non_financial", "all"}));
  cmd->add_option("--field", o->field, "headline_synopsis, full_text or both")
      ->check(CLI::IsMember({"headline_synopsis", "full_text", "both"}));
  cmd->add_option("--vocab-size", o->vocab_size, "target vocabulary size");
  cmd->add_option("--max-word-chars", o->max_word_chars, "longer words encode as unk");
  cmd->add_option("--output", o->output, "vocab file (metadata goes to <output>.meta.json)")->required();
  cmd->callback([o] {
    std::vector<std::vector<std::string>> docs;
    for (const auto& a : read_articles(o->input)) {
      if (!in_segment(a, o->segment)) continue;
      for (auto f : expand_fields(o->field))
        if (auto text = a.field(f)) docs.push_back(tokenize::word_tokenize(*text));
    }
    tokenize::TrainOptions opts;
    opts.max_word_chars = o->max_word_chars;
    auto model = tokenize::train_wordpiece(docs, o->vocab_size, opts);
    tokenize::save_wordpiece(model, o->output);
    note("wordpiece vocabulary: " + std::to_string(model.size()) + " tokens (alphabet " +
         std::to_string(model.alphabet_size) + ", target " + std::to_string(o->vocab_size) + ") from " +
         std::to_string(docs.size()) + " texts");
  });
}

void add_encode(CLI::App& app) {
  struct Opts {
    std::string tokenizer, text, input, output, field = "headline_synopsis";
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("encode", "apply a WordPiece vocabulary");
  cmd->add_option("--tokenizer", o->tokenizer, "vocab file")->required()->check(CLI::ExistingFile);
  auto* text = cmd->add_option("--text", o->text, "encode this text and print the pieces");
  auto* input = cmd->add_option("--input", o->input, "article JSONL to encode")->check(CLI::ExistingFile);
  cmd->add_option("--field", o->field, "headline_synopsis or full_text")
      ->check(CLI::IsMember({"headline_synopsis", "full_text"}));
  cmd->add_option("--output", o->output, "JSONL of {id, ids}")->needs(input);
  text->excludes(input);
  cmd->callback([o] {
    auto tok = tokenize::load_wordpiece(o->tokenizer);
    if (o->input.empty()) {
      std::vector<std::string> pieces;
      for (const auto& w : tokenize::word_tokenize(o->text))
        for (auto& p : tokenize::encode_wordpiece(tok, w)) pieces.push_back(std::move(p));
      std::cout << join(pieces, " ") << "\n";
      return;
    }
    if (o->output.empty()) fail(ErrorKind::parameter, "--input needs --output");
    auto field = corpus::parse_text_field(o->field);
    std::string out;
    for (const auto& a : read_articles(o->input)) {
      auto t = a.field(field);
      if (!t) continue;
      nlohmann::ordered_json j = {{"id", a.id}, {"ids", tokenize::encode_ids(tok, tokenize::word_tokenize(*t))}};
      out += j.dump() + "\n";
    }
    write_file(o->output, out);
  });
}

struct SupervisedOpts {
  std::string input, labels, field = "headline_synopsis", segment = "financial", report, method;
  double test_fraction = 0.2;
};

void add_supervised_options(CLI::App* cmd, SupervisedOpts& o) {
  cmd->add_option("--input", o.input, "cleaned JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--labels", o.labels, "labels CSV from aggregate-labels")->required()->check(CLI::ExistingFile);
  cmd->add_option("--field", o.field, "headline_synopsis or full_text")
      ->check(CLI::IsMember({"headline_synopsis", "full_text"}));
  cmd->add_option("--segment", o.segment, "financial, non_financial or all")
      ->check(CLI::IsMember({"financial", "non_financial", "all"}));
  cmd->add_option("--test-fraction", o.test_fraction, "held-out share, stratified by label");
  cmd->add_option("--report", o.report, "write train/test accuracy rows to this report CSV");
  cmd->add_option("--method-name", o.method, "method name used in the report");
}

void add_train_classical(CLI::App& app, const Globals& g) {
  struct Opts : SupervisedOpts {
    std::string model = "nb", output, tfidf_output;
    int max_depth = 5, min_samples_split = 2, n_trees = 25;
    double alpha = 1.0;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("train-classical", "TF-IDF + naive bayes / tree / bagging / random forest");
  add_supervised_options(cmd, *o);
  cmd->add_option("--model", o->model, "nb, tree, bagging or forest")
      ->check(CLI::IsMember({"nb", "tree", "bagging", "forest"}));
  cmd->add_option("--max-depth", o->max_depth, "tree depth limit");
  cmd->add_option("--min-samples-split", o->min_samples_split, "smallest node weight that may split");
  cmd->add_option("--n-trees", o->n_trees, "ensemble size");
  cmd->add_option("--alpha", o->alpha, "naive bayes additive smoothing");
  cmd->add_option("--output", o->output, "model JSON")->required();
  cmd->add_option("--tfidf-output", o->tfidf_output, "fitted TF-IDF model CSV")->required();
  cmd->callback([o, &g] {
    auto docs = labeled_docs(read_articles(o->input), sampling::read_labels(o->labels), o->segment,
                             corpus::parse_text_field(o->field));
    std::vector<std::vector<std::string>> tokens;
    std::vector<int> labels;
    for (const auto& d : docs) {
      tokens.push_back(tokenize::word_tokenize(d.text));
      labels.push_back(d.label);
    }
    auto split = model_split(labels, o->test_fraction, g.seed);
    auto tfidf = features::fit_tfidf(pick(tokens, split.train), [](const std::string& m) { note("note: " + m); });
    auto X = features::transform_all(tfidf, tokens);
    auto Xtr = pick(X, split.train);
    auto ytr = pick(labels, split.train);

    classical::Model model;
    if (o->model == "nb") {
      model = classical::fit_nb(Xtr, ytr, o->alpha);
    } else if (o->model == "tree") {
      classical::TreeParams tp;
      tp.max_depth = o->max_depth;
      tp.min_samples_split = o->min_samples_split;
      model = classical::fit_tree(Xtr, ytr, tp, derive_seed(g.seed, "tree"));
    } else {
      classical::EnsembleParams ep;
      ep.kind = o->model == "bagging" ? classical::EnsembleKind::bagging : classical::EnsembleKind::random_forest;
      ep.n_trees = o->n_trees;
      ep.max_depth = o->max_depth;
      ep.min_samples_split = o->min_samples_split;
      ep.seed = derive_seed(g.seed, "ensemble");
      model = classical::fit_ensemble(Xtr, ytr, ep);
    }
    classical::save_model(model, o->output);
    features::save_tfidf(tfidf, o->tfidf_output);

    std::string method = o->method.empty() ? classical::model_kind(model) : o->method;
    std::vector<eval::ReportRow> rows;
    for (const auto* part : {&split.train, &split.test}) {
      auto pred = classical::predict(model, pick(X, *part));
      rows.push_back(report_row(method, o->field, o->segment, part == &split.train ? "train" : "test", pred,
                                pick(labels, *part)));
    }
    note(method + ": train accuracy " + format_double(rows[0].accuracy()) + ", test accuracy " +
         format_double(rows[1].accuracy()) + " (" + std::to_string(tfidf.size()) + " tf-idf columns)");
    if (!o->report.empty()) write_file(o->report, eval::report_csv(rows));
  });
}

void add_train_bilstm(CLI::App& app, const Globals& g) {
  struct Opts : SupervisedOpts {
    std::string tokenizer, output, metrics, optimizer = "adam";
    neural::TrainConfig cfg;
    int d_embed = 64, hidden = 64;
    std::optional<int> max_seq_len;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("train-bilstm", "train the embedding + Bi-LSTM classifier");
  add_supervised_options(cmd, *o);
  cmd->add_option("--tokenizer", o->tokenizer, "WordPiece vocab file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--epochs", o->cfg.epochs, "training epochs");
  cmd->add_option("--learning-rate", o->cfg.learning_rate, "step size");
  cmd->add_option("--batch-size", o->cfg.batch_size, "examples per update");
  cmd->add_option("--clip-norm", o->cfg.gradient_clip_norm, "global gradient norm cap (<= 0 disables)");
  cmd->add_option("--optimizer", o->optimizer, "adam or sgd")->check(CLI::IsMember({"adam", "sgd"}));
  cmd->add_option("--validation-fraction", o->cfg.validation_fraction, "share of the training split held for validation");
  cmd->add_option("--d-embed", o->d_embed, "embedding width");
  cmd->add_option("--hidden", o->hidden, "LSTM state width per direction");
  cmd->add_option("--max-seq-len", o->max_seq_len, "truncation length (default 256 headline+synopsis, 512 full text)");
  cmd->add_option("--output", o->output, "checkpoint JSON")->required();
  cmd->add_option("--metrics", o->metrics, "per-epoch metrics CSV");
  cmd->callback([o, &g] {
    auto tok = tokenize::load_wordpiece(o->tokenizer);
    auto docs = labeled_docs(read_articles(o->input), sampling::read_labels(o->labels), o->segment,
                             corpus::parse_text_field(o->field));
    auto data = sequence_data(docs, tok);
    if (data.dropped_empty) note("note: " + std::to_string(data.dropped_empty) + " documents encode to nothing");
    std::vector<int> labels;
    for (const auto& e : data.examples) labels.push_back(e.second);
    auto split = model_split(labels, o->test_fraction, g.seed);

    neural::Dims dims;
    dims.vocab_size = static_cast<int>(tok.size());
    dims.d_embed = o->d_embed;
    dims.hidden = o->hidden;
    dims.max_seq_len = o->max_seq_len.value_or(o->field == "full_text" ? 512 : 256);
    auto model = neural::init_model(dims, derive_seed(g.seed, "bilstm"));
    model.vocab_hash = neural::vocab_hash(tok);

    auto cfg = o->cfg;
    cfg.seed = derive_seed(g.seed, "bilstm-train");
    cfg.optimizer = o->optimizer == "adam" ? neural::Optimizer::adam : neural::Optimizer::sgd;
    auto result = neural::train(model, pick(data.examples, split.train), cfg);
    neural::save_checkpoint(model, o->output);

    if (!o->metrics.empty()) {
      std::ostringstream out;
      csv::write_row(out, {"epoch", "train_loss", "train_accuracy", "validation_loss", "validation_accuracy"});
      for (const auto& m : result.epochs) {
        csv::write_row(out, {std::to_string(m.epoch), format_double(m.train_loss), format_double(m.train_accuracy),
                             m.validation_loss ? format_double(*m.validation_loss) : "",
                             m.validation_accuracy ? format_double(*m.validation_accuracy) : ""});
      }
      write_file(o->metrics, out.str());
    }
    if (result.truncated_sequences)
      note("note: " + std::to_string(result.truncated_sequences) + " sequences truncated to " +
           std::to_string(dims.max_seq_len) + " tokens");

    std::string method = o->method.empty() ? "bilstm" : o->method;
    std::vector<eval::ReportRow> rows;
    for (const auto* part : {&split.train, &split.test}) {
      rows.push_back(report_row(method, o->field, o->segment, part == &split.train ? "train" : "test",
                                bilstm_predictions(model, data.examples, *part), pick(labels, *part)));
    }
    const auto& last = result.epochs.back();
    note(method + ": " + std::to_string(result.epochs.size()) + " epochs, final train loss " +
         format_double(last.train_loss) + ", train accuracy " + format_double(rows[0].accuracy()) +
         ", test accuracy " + format_double(rows[1].accuracy()));
    if (!o->report.empty()) write_file(o->report, eval::report_csv(rows));
  });
}

}  // namespace

void add_model_commands(CLI::App& app, const Globals& g) {
  add_train_tokenizer(app);
  add_encode(app);
  add_train_classical(app, g);
  add_train_bilstm(app, g);
}

}  // namespace sentikit::cli
