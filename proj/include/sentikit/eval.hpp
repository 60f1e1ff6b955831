#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sentikit/lexicon.hpp"
#include "sentikit/parallel.hpp"

namespace sentikit::eval {

struct Split {
  std::vector<std::size_t> train, test;  // indices into the dataset, ascending
};

// Label-stratified: each class contributes round(n_c * test_fraction)
// items to the test side, kept within [1, n_c - 1].
Split split_indices(const std::vector<int>& labels, double test_fraction, std::uint64_t seed);

double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels);

// Positive class is 1. no_signal counts items without a prediction; they are
// scored as wrong and kept out of the four cells.
struct Confusion {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0, no_signal = 0;
  std::int64_t n() const { return tp + fp + tn + fn + no_signal; }
  double accuracy() const;
  bool operator==(const Confusion&) const = default;
};

// -1 in predictions marks no signal.
Confusion confusion(const std::vector<int>& predictions, const std::vector<int>& labels);

struct EvalItem {
  std::string raw_text;    // case and punctuation kept (VADER family)
  std::string clean_text;  // preprocessed (LM family)
  int label = 0;
};

// Predicted label = sign of compound when present, else sign of polarity;
// zero or no_signal scores count as wrong.
using Scorer = std::function<lexicon::SentimentScore(const EvalItem&)>;
Confusion lexicon_accuracy(const std::vector<EvalItem>& items, const Scorer& scorer,
                           Exec exec = Exec::parallel);
int sign_label(const lexicon::SentimentScore& s);  // 1, 0 or -1 for no signal

struct CorrelationMatrix {
  std::vector<std::string> methods;
  // nullopt where either vector has zero variance.
  std::vector<std::vector<std::optional<double>>> values;
};

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b);
CorrelationMatrix correlate(const std::vector<std::pair<std::string, std::vector<double>>>& scores);
std::string correlation_csv(const CorrelationMatrix& m);

// One evaluated cell. split is "train", "test" or "all".
struct ReportRow {
  std::string method;
  std::string field;    // headline_synopsis | full_text
  std::string segment;  // financial | non_financial | all
  std::string split;
  Confusion confusion;

  double accuracy() const { return confusion.accuracy(); }
  bool operator==(const ReportRow&) const = default;
};

std::string report_csv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> parse_report_csv(std::string_view text);

// Lexicon layout: columns A-F are (headline_synopsis, financial),
// (full_text, financial), (headline_synopsis, non_financial),
// (full_text, non_financial), (full_text, all), (headline_synopsis, all).
std::string render_lexicon_table(const std::vector<ReportRow>& rows);
// Model layout: train/test accuracy on full text, then on headline_synopsis.
std::string render_model_table(const std::vector<ReportRow>& rows);

}  // namespace sentikit::eval
