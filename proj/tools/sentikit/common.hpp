#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sentikit/corpus.hpp"
#include "sentikit/lexicon.hpp"
#include "sentikit/sampling.hpp"

namespace sentikit::cli {

struct Globals {
  std::uint64_t seed = 0;
  int jobs = 0;
};

void add_data_commands(CLI::App& app, const Globals& g);
void add_lexicon_commands(CLI::App& app, const Globals& g);
void add_model_commands(CLI::App& app, const Globals& g);
void add_eval_commands(CLI::App& app, const Globals& g);

// Progress and warnings go to stderr so stdout stays machine-readable.
void note(const std::string& msg);

struct LexiconOptions {
  std::string path;
  std::string format = "vader_tsv";
  std::string scale = "plus_minus_4";  // valence_csv only
};
void add_lexicon_options(CLI::App* cmd, LexiconOptions& o, const std::string& prefix = "");
// vader_tsv tolerates the duplicate entries of the published file (last one
// wins, with a warning); other formats reject duplicates.
lexicon::Lexicon load_lexicon(const LexiconOptions& o);

// "financial", "non_financial" or "all".
bool in_segment(const corpus::NewsArticle& a, const std::string& segment);
std::vector<std::string> expand_segments(const std::string& segment);  // "each" -> all three
std::vector<corpus::TextField> expand_fields(const std::string& field);  // "both" -> two

std::vector<corpus::NewsArticle> read_articles(const std::string& path);
std::map<std::string, corpus::NewsArticle> by_id(const std::vector<corpus::NewsArticle>& articles);

struct LabeledDoc {
  std::string id;
  std::string text;
  int label = 0;
};

// Labeled articles of a segment that carry the field, sorted by id.
std::vector<LabeledDoc> labeled_docs(const std::vector<corpus::NewsArticle>& articles,
                                     const std::map<std::string, sampling::Label>& labels,
                                     const std::string& segment, corpus::TextField field);

inline const std::vector<std::string> kSegmentNames = {"financial", "non_financial", "all"};
inline const std::vector<std::string> kFieldNames = {"headline_synopsis", "full_text"};

}  // namespace sentikit::cli

#include "sentikit/eval.hpp"
#include "sentikit/neural.hpp"

namespace sentikit::cli {

// Encoded labeled documents for the Bi-LSTM; documents whose encoding is
// empty are dropped. The train/test split is a pure function of the result
// and the global seed, so training and evaluation agree on it.
struct SequenceData {
  std::vector<std::string> ids;
  std::vector<neural::Example> examples;
  std::size_t dropped_empty = 0;
};
SequenceData sequence_data(const std::vector<LabeledDoc>& docs, const tokenize::WordPieceModel& tok);

eval::Split model_split(const std::vector<int>& labels, double test_fraction, std::uint64_t seed);

std::vector<int> bilstm_predictions(const neural::BiLstmModel& model,
                                    const std::vector<neural::Example>& examples,
                                    const std::vector<std::size_t>& idx);

eval::ReportRow report_row(const std::string& method, const std::string& field, const std::string& segment,
                           const std::string& split, const std::vector<int>& pred,
                           const std::vector<int>& labels);

}  // namespace sentikit::cli
