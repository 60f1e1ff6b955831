#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sentikit::lexicon {

enum class Scale { plus_minus_4, plus_minus_1 };
enum class Format { vader_tsv, lm_csv, valence_csv };
enum class DuplicatePolicy { reject, keep_last };

enum class Category : std::uint8_t {
  positive = 1 << 0,
  negative = 1 << 1,
  litigious = 1 << 2,
  uncertain = 1 << 3,
  strong_modal = 1 << 4,
  weak_modal = 1 << 5,
};

// Bit set of Category flags.
using CategorySet = std::uint8_t;
inline bool has(CategorySet set, Category c) { return set & static_cast<std::uint8_t>(c); }

Format parse_format(std::string_view name);
Scale parse_scale(std::string_view name);
std::string_view to_string(Scale s);

class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::string name, Scale scale) : name_(std::move(name)), scale_(scale) {}

  const std::string& name() const { return name_; }
  Scale scale() const { return scale_; }

  // Throws Error(validation) for duplicates or valences outside the scale.
  void add(const std::string& word, double valence, CategorySet tags = 0);
  // Inserts or overwrites; still range-checked.
  void set(const std::string& word, double valence, CategorySet tags = 0);

  const double* find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word) != nullptr; }
  CategorySet tags(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }

  // Entries in word order.
  std::vector<std::pair<std::string, double>> sorted_entries() const;

  // Number of duplicate lines overwritten while loading with keep_last.
  std::size_t overwritten_duplicates = 0;

 private:
  void check_range(const std::string& word, double valence) const;

  std::string name_;
  Scale scale_ = Scale::plus_minus_4;
  std::unordered_map<std::string, double> entries_;
  std::unordered_map<std::string, CategorySet> tags_;
};

struct LoadOptions {
  DuplicatePolicy duplicates = DuplicatePolicy::reject;
  Scale valence_csv_scale = Scale::plus_minus_4;  // valence_csv carries no scale
};

Lexicon load_lexicon(const std::filesystem::path& path, Format format, LoadOptions opts = {});
Lexicon parse_lexicon(std::string_view text, Format format, std::string name, LoadOptions opts = {});

// Two-column `word,valence` export, sorted by word.
std::string to_valence_csv(const Lexicon& lex);

struct SentimentScore {
  int pos_count = 0;
  int neg_count = 0;
  int token_count = 0;
  double polarity = 0.0;
  double subjectivity = 0.0;
  std::optional<double> compound;  // VADER engine only
  // VADER proportions of positive, neutral and negative mass.
  double pos = 0.0, neu = 0.0, neg = 0.0;
  bool no_signal = true;
};

// polarity = (P-N)/(P+N), subjectivity = (P+N)/n. P+N == 0 gives polarity 0
// with no_signal.
SentimentScore polarity_subjectivity(int pos, int neg, int n);

// Loughran-McDonald style counting over preprocessed tokens.
SentimentScore score_lm(const std::vector<std::string>& tokens, const Lexicon& lex);

// Words that carry LM weight (nonzero valence); tag-only entries are excluded.
std::vector<std::string> weighted_words(const Lexicon& lex);

// Host VADER, guest LM: LM's weighted words override or extend VADER.
Lexicon merge_lm_in_vader(const Lexicon& vader, const Lexicon& lm);
// Host LM, guest VADER: every LM entry is kept; VADER-only words enter as
// sign(valence), zero-valence words are skipped.
Lexicon merge_vader_in_lm(const Lexicon& lm, const Lexicon& vader);

struct LexiconDiff {
  std::size_t common_words = 0;
  std::size_t common_negative = 0;
  std::size_t common_positive = 0;
  std::size_t left_neg_right_pos = 0;  // e.g. LM negative, VADER positive
  std::size_t left_pos_right_neg = 0;  // e.g. LM positive, VADER negative
  std::size_t exclusive_left = 0;
  std::size_t exclusive_right = 0;
  bool operator==(const LexiconDiff&) const = default;
};

LexiconDiff diff_lexicons(const Lexicon& left, const Lexicon& right);

}  // namespace sentikit::lexicon
