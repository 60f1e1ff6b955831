#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sentikit/corpus.hpp"

namespace sentikit::sampling {

// Worst-case (p = 0.5) infinite-population sample size:
// ceil(z^2 * 0.25 / e^2), z the two-sided normal quantile for `confidence`.
int sample_size(double confidence, double margin_of_error);
int round_up_to(int value, int multiple);

// Largest-remainder (Hamilton) allocation of n over strata, proportional to
// stratum size. Remainder ties go to the lexicographically smaller stratum.
std::map<std::string, std::size_t> allocate(const std::map<std::string, std::size_t>& strata,
                                            std::size_t n);

using StratumKey = std::function<std::string(const corpus::NewsArticle&)>;
StratumKey by_sector();

// Seeded stratified sample without replacement. Output is grouped by stratum
// in name order.
std::vector<corpus::NewsArticle> stratified_sample(const std::vector<corpus::NewsArticle>& articles,
                                                   const StratumKey& key, std::size_t n,
                                                   std::uint64_t seed);

// article id -> 128-bit random hex, injective.
std::map<std::string, std::string> assign_masked_ids(const std::vector<std::string>& ids,
                                                     std::uint64_t seed);
void write_mask_table(const std::filesystem::path& path,
                      const std::map<std::string, std::string>& table);
std::map<std::string, std::string> read_mask_table(const std::filesystem::path& path);

struct AnnotationRecord {
  std::string article_id;  // masked id when persisted
  std::string rater_id;
  int score = 0;  // one of -2, -1, +1, +2
  bool operator==(const AnnotationRecord&) const = default;
};

// Accepts -2, -1, 1, 2 (optionally with '+'); anything else, including 0, is
// rejected.
std::optional<int> parse_score(std::string_view input);

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path);
void append_annotation(const std::filesystem::path& path, const AnnotationRecord& record);

struct AnnotationItem {
  std::string masked_id;
  std::string headline_synopsis;
  std::optional<std::string> full_text;
};

struct SessionResult {
  std::vector<AnnotationRecord> recorded;  // this session only
  std::size_t skipped_done = 0;            // already in the progress file
  bool completed = false;                  // false if input ended early
};

// Prompts for every item not yet scored by `rater_id` in the progress file,
// appending each accepted score immediately. Publish dates are never shown.
SessionResult annotate(const std::vector<AnnotationItem>& items, const std::string& rater_id,
                       const std::filesystem::path& progress_file, bool show_full_text,
                       std::istream& in, std::ostream& out);

enum class Label { negative = 0, positive = 1 };
std::string_view to_string(Label l);
Label parse_label(std::string_view s);

struct LabeledArticle {
  std::string article_id;
  int score_sum = 0;
  int rater_count = 0;
  std::optional<Label> label;  // empty when conflicted
  bool conflicted = false;
  std::string masked_id;

  double mean_score() const { return rater_count ? double(score_sum) / rater_count : 0.0; }
};

struct Aggregation {
  std::vector<LabeledArticle> labeled;     // mean != 0
  std::vector<LabeledArticle> conflicted;  // mean == 0, reported but unlabeled
};

// Groups records by article; every article needs exactly raters_required
// distinct raters (Error(incomplete_annotation) lists the offenders).
Aggregation aggregate_labels(const std::vector<AnnotationRecord>& records, int raters_required = 3);

// CSV article_id,mean_score,label,conflicted. Conflicted rows carry label
// "none".
void write_labels(const std::filesystem::path& path, const Aggregation& agg);
std::map<std::string, Label> read_labels(const std::filesystem::path& path);

}  // namespace sentikit::sampling
