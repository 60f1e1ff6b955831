#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "common.hpp"
#include "sentikit/error.hpp"
#include "sentikit/sampling.hpp"
#include "sentikit/util.hpp"

namespace sentikit::cli {

namespace {

std::string articles_jsonl(const std::vector<corpus::NewsArticle>& articles) {
  std::ostringstream out;
  corpus::write_jsonl(out, articles);
  return out.str();
}

void add_ingest(CLI::App& app) {
  struct Opts {
    std::string input, output, format;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("ingest", "read raw articles (JSONL or CSV) and apply the drop rule");
  cmd->add_option("--input", o->input, "raw article file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", o->format, "jsonl or csv (default: from the extension)")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  cmd->add_option("--output", o->output, "ingested JSONL")->required();
  cmd->callback([o] {
    std::string fmt = o->format;
    if (fmt.empty()) fmt = std::filesystem::path(o->input).extension() == ".csv" ? "csv" : "jsonl";
    auto r = corpus::ingest(o->input, corpus::parse_format(fmt));
    write_file(o->output, articles_jsonl(r.articles));
    note("ingested " + std::to_string(r.articles.size()) + " articles, dropped " +
         std::to_string(r.dropped) + ", malformed " + std::to_string(r.malformed));
  });
}

void add_preprocess(CLI::App& app) {
  struct Opts {
    std::string input, output, stopwords;
    std::size_t min_chars = 20, top_sectors = 4;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("preprocess", "clean text, merge headline+synopsis, normalise sectors");
  cmd->add_option("--input", o->input, "ingested JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--output", o->output, "cleaned JSONL")->required();
  cmd->add_option("--stopwords", o->stopwords, "stopword list, one per line (default: bundled English list)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--min-full-text-chars", o->min_chars, "shorter cleaned full texts become absent");
  cmd->add_option("--top-sectors", o->top_sectors, "raw sectors kept by frequency");
  cmd->callback([o] {
    auto cfg = corpus::PreprocessConfig::defaults();
    if (!o->stopwords.empty()) cfg.stopwords = corpus::load_stopwords(o->stopwords);
    cfg.min_full_text_chars = o->min_chars;
    cfg.top_sector_count = o->top_sectors;
    cfg.validate();
    auto articles = read_articles(o->input);
    for (auto& a : articles) a = corpus::preprocess(a, cfg);
    articles = corpus::normalize_sectors(std::move(articles), cfg.top_sector_count);
    write_file(o->output, articles_jsonl(articles));
    std::map<std::string, std::size_t> counts;
    for (const auto& a : articles) ++counts[std::string(corpus::to_string(a.sector))];
    std::string summary;
    for (const auto& [s, n] : counts) summary += " " + s + "=" + std::to_string(n);
    note("preprocessed " + std::to_string(articles.size()) + " articles;" + summary);
  });
}

void add_sample(CLI::App& app, const Globals& g) {
  struct Opts {
    std::string input, raw, segment = "financial", sample_out, mask_table, items;
    double confidence = 0.95, margin = 0.05;
    int round_to = 100;
    std::optional<std::size_t> n;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("sample", "draw a stratified, blinded annotation sample");
  cmd->add_option("--input", o->input, "cleaned JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--raw", o->raw, "ingested JSONL; raters then see the original text")->check(CLI::ExistingFile);
  cmd->add_option("--segment", o->segment, "financial, non_financial or all")
      ->check(CLI::IsMember({"financial", "non_financial", "all"}));
  cmd->add_option("--confidence", o->confidence, "confidence level");
  cmd->add_option("--margin", o->margin, "margin of error");
  cmd->add_option("--round-to", o->round_to, "round the sample size up to a multiple of this");
  cmd->add_option("--n", o->n, "explicit sample size (overrides the formula)");
  cmd->add_option("--sample-output", o->sample_out, "sampled cleaned articles (JSONL)")->required();
  cmd->add_option("--mask-table", o->mask_table, "article_id,masked_id table")->required();
  cmd->add_option("--items", o->items, "annotation items shown to raters (JSONL)")->required();
  cmd->callback([o, &g] {
    std::vector<corpus::NewsArticle> pool;
    for (auto& a : read_articles(o->input))
      if (in_segment(a, o->segment)) pool.push_back(std::move(a));
    std::size_t n = o->n ? *o->n
                         : static_cast<std::size_t>(sampling::round_up_to(
                               sampling::sample_size(o->confidence, o->margin), o->round_to));
    auto sample = sampling::stratified_sample(pool, sampling::by_sector(), n,
                                              derive_seed(g.seed, "sample/" + o->segment));
    std::vector<std::string> ids;
    for (const auto& a : sample) ids.push_back(a.id);
    auto masks = sampling::assign_masked_ids(ids, derive_seed(g.seed, "mask/" + o->segment));

    std::map<std::string, corpus::NewsArticle> raw;
    if (!o->raw.empty()) raw = by_id(read_articles(o->raw));
    std::vector<std::pair<std::string, nlohmann::ordered_json>> items;
    for (const auto& a : sample) {
      const corpus::NewsArticle* shown = &a;
      if (!raw.empty()) {
        auto it = raw.find(a.id);
        if (it == raw.end()) fail(ErrorKind::validation, "article " + a.id + " missing from " + o->raw);
        shown = &it->second;
      }
      auto full = shown->field(corpus::TextField::full_text);
      nlohmann::ordered_json j = {{"masked_id", masks.at(a.id)},
                                  {"headline_synopsis", shown->field(corpus::TextField::headline_synopsis).value_or("")},
                                  {"full_text", full ? nlohmann::ordered_json(*full) : nlohmann::ordered_json(nullptr)}};
      items.emplace_back(masks.at(a.id), std::move(j));
    }
    // Sorting by the random masked id hides publication order.
    std::sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::string text;
    for (const auto& [m, j] : items) text += j.dump() + "\n";

    write_file(o->sample_out, articles_jsonl(sample));
    sampling::write_mask_table(o->mask_table, masks);
    write_file(o->items, text);

    std::map<std::string, std::size_t> per;
    for (const auto& a : sample) ++per[std::string(corpus::to_string(a.sector))];
    std::string summary;
    for (const auto& [s, k] : per) summary += " " + s + "=" + std::to_string(k);
    note("sampled " + std::to_string(sample.size()) + " of " + std::to_string(pool.size()) + " " +
         o->segment + " articles;" + summary);
  });
}

std::vector<sampling::AnnotationItem> read_items(const std::string& path) {
  std::vector<sampling::AnnotationItem> items;
  std::size_t lineno = 0;
  for (const auto& line : split(read_file(path), '\n')) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      sampling::AnnotationItem it;
      it.masked_id = j.at("masked_id").get<std::string>();
      it.headline_synopsis = j.at("headline_synopsis").get<std::string>();
      if (j.contains("full_text") && !j["full_text"].is_null()) it.full_text = j["full_text"].get<std::string>();
      items.push_back(std::move(it));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::parse, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return items;
}

void add_annotate(CLI::App& app) {
  struct Opts {
    std::string rater, input, progress, show_full = "on";
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("annotate", "score sampled articles on -2,-1,+1,+2 (resumable)");
  cmd->add_option("--rater", o->rater, "rater id")->required();
  cmd->add_option("--input", o->input, "annotation items (JSONL from `sample --items`)")
      ->required()->check(CLI::ExistingFile);
  cmd->add_option("--progress-file", o->progress, "annotation CSV, appended after every answer")->required();
  cmd->add_option("--show-full-text", o->show_full, "on or off")->check(CLI::IsMember({"on", "off"}));
  cmd->callback([o] {
    auto items = read_items(o->input);
    auto r = sampling::annotate(items, o->rater, o->progress, o->show_full == "on", std::cin, std::cout);
    note("rater " + o->rater + ": recorded " + std::to_string(r.recorded.size()) + ", already done " +
         std::to_string(r.skipped_done) + (r.completed ? "" : "; input ended early, progress saved"));
  });
}

void add_aggregate(CLI::App& app) {
  struct Opts {
    std::vector<std::string> annotations, masks;
    std::string output;
    int raters = 3;
  };
  auto o = std::make_shared<Opts>();
  auto* cmd = app.add_subcommand("aggregate-labels", "average rater scores into binary labels");
  cmd->add_option("--annotations", o->annotations, "annotation CSV files")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mask-table", o->masks, "mask tables mapping masked ids back")->required()->check(CLI::ExistingFile);
  cmd->add_option("--raters", o->raters, "raters required per article")->check(CLI::PositiveNumber);
  cmd->add_option("--output", o->output, "labels CSV")->required();
  cmd->callback([o] {
    std::map<std::string, std::string> unmask;
    for (const auto& path : o->masks)
      for (const auto& [id, masked] : sampling::read_mask_table(path)) unmask[masked] = id;
    std::vector<sampling::AnnotationRecord> records;
    for (const auto& path : o->annotations) {
      for (auto r : sampling::read_annotations(path)) {
        auto it = unmask.find(r.article_id);
        if (it == unmask.end())
          fail(ErrorKind::validation, path + ": masked id " + r.article_id + " is in no mask table");
        r.article_id = it->second;
        records.push_back(std::move(r));
      }
    }
    auto agg = sampling::aggregate_labels(records, o->raters);
    sampling::write_labels(o->output, agg);
    std::size_t pos = 0;
    for (const auto& a : agg.labeled) pos += a.label == sampling::Label::positive;
    note("labeled " + std::to_string(agg.labeled.size()) + " articles (" + std::to_string(pos) +
         " positive), conflicted " + std::to_string(agg.conflicted.size()));
  });
}

}  // namespace

void add_data_commands(CLI::App& app, const Globals& g) {
  add_ingest(app);
  add_preprocess(app);
  add_sample(app, g);
  add_annotate(app);
  add_aggregate(app);
}

}  // namespace sentikit::cli
