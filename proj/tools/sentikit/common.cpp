#include "common.hpp"

#include "sentikit/util.hpp"

#include <algorithm>
#include <iostream>

namespace sentikit::cli {

void note(const std::string& msg) { std::cerr << msg << "\n"; }

void add_lexicon_options(CLI::App* cmd, LexiconOptions& o, const std::string& prefix) {
  cmd->add_option("--" + prefix + "lexicon", o.path, "lexicon file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--" + prefix + "lexicon-format", o.format,
                  "vader_tsv, lm_csv or valence_csv (default: " + o.format + ")")
      ->check(CLI::IsMember({"vader_tsv", "lm_csv", "valence_csv"}));
  cmd->add_option("--" + prefix + "valence-scale", o.scale, "scale of a valence_csv lexicon")
      ->check(CLI::IsMember({"plus_minus_4", "plus_minus_1"}));
}

lexicon::Lexicon load_lexicon(const LexiconOptions& o) {
  lexicon::LoadOptions lo;
  auto format = lexicon::parse_format(o.format);
  lo.valence_csv_scale = lexicon::parse_scale(o.scale);
  if (format == lexicon::Format::vader_tsv) lo.duplicates = lexicon::DuplicatePolicy::keep_last;
  auto lex = lexicon::load_lexicon(o.path, format, lo);
  if (lex.overwritten_duplicates > 0)
    note("warning: " + o.path + ": " + std::to_string(lex.overwritten_duplicates) +
         " duplicate words, kept the last occurrence");
  return lex;
}

bool in_segment(const corpus::NewsArticle& a, const std::string& segment) {
  if (segment == "all") return true;
  return corpus::to_string(a.segment) == segment;
}

std::vector<std::string> expand_segments(const std::string& segment) {
  if (segment == "each") return kSegmentNames;
  return {segment};
}

std::vector<corpus::TextField> expand_fields(const std::string& field) {
  if (field == "both") return {corpus::TextField::headline_synopsis, corpus::TextField::full_text};
  return {corpus::parse_text_field(field)};
}

std::vector<corpus::NewsArticle> read_articles(const std::string& path) {
  return corpus::read_jsonl(path);
}

std::map<std::string, corpus::NewsArticle> by_id(const std::vector<corpus::NewsArticle>& articles) {
  std::map<std::string, corpus::NewsArticle> out;
  for (const auto& a : articles) out.emplace(a.id, a);
  return out;
}

std::vector<LabeledDoc> labeled_docs(const std::vector<corpus::NewsArticle>& articles,
                                     const std::map<std::string, sampling::Label>& labels,
                                     const std::string& segment, corpus::TextField field) {
  std::vector<LabeledDoc> out;
  for (const auto& a : articles) {
    auto it = labels.find(a.id);
    if (it == labels.end() || !in_segment(a, segment)) continue;
    auto text = a.field(field);
    if (!text) continue;
    out.push_back({a.id, *text, static_cast<int>(it->second)});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  return out;
}

}  // namespace sentikit::cli

namespace sentikit::cli {

SequenceData sequence_data(const std::vector<LabeledDoc>& docs, const tokenize::WordPieceModel& tok) {
  SequenceData out;
  for (const auto& d : docs) {
    auto ids = tokenize::encode_ids(tok, tokenize::word_tokenize(d.text));
    if (ids.empty()) {
      ++out.dropped_empty;
      continue;
    }
    out.ids.push_back(d.id);
    out.examples.emplace_back(std::move(ids), d.label);
  }
  return out;
}

eval::Split model_split(const std::vector<int>& labels, double test_fraction, std::uint64_t seed) {
  return eval::split_indices(labels, test_fraction, derive_seed(seed, "model-split"));
}

std::vector<int> bilstm_predictions(const neural::BiLstmModel& model,
                                    const std::vector<neural::Example>& examples,
                                    const std::vector<std::size_t>& idx) {
  std::vector<int> pred(idx.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::size_t k = 0; k < idx.size(); ++k)
    pred[k] = neural::classify(neural::forward(model, examples[idx[k]].first)).label;
  return pred;
}

eval::ReportRow report_row(const std::string& method, const std::string& field, const std::string& segment,
                           const std::string& split, const std::vector<int>& pred,
                           const std::vector<int>& labels) {
  return {method, field, segment, split, eval::confusion(pred, labels)};
}

}  // namespace sentikit::cli
