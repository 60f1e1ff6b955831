#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sentikit/parallel.hpp"

namespace sentikit::tokenize {

// Maximal runs of non-whitespace, in order.
std::vector<std::string> word_tokenize(std::string_view text);

class WordPieceModel {
 public:
  std::string continuation_prefix = "##";
  std::string unk_token = "[UNK]";
  int max_word_chars = 100;
  int target_vocab_size = 8000;
  // Size of the initial vocabulary (unk plus character tokens).
  int alphabet_size = 0;

  const std::vector<std::string>& vocab() const { return vocab_; }
  std::size_t size() const { return vocab_.size(); }
  // Appends a token; returns false if it was already present.
  bool add(const std::string& token);
  std::optional<int> id(std::string_view token) const;
  int unk_id() const;
  bool contains(std::string_view token) const { return id(token).has_value(); }

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, int> index_;
};

// One training step, kept for inspection and oracle tests.
struct MergeStep {
  std::string left, right, token;
  std::int64_t pair_count = 0, left_count = 0, right_count = 0;
  bool grew_vocab = true;
};

struct TrainOptions {
  std::string continuation_prefix = "##";
  std::string unk_token = "[UNK]";
  int max_word_chars = 100;
  Exec exec = Exec::parallel;
};

// Word-frequency-weighted trainer. Each round scores every adjacent pair
// x,y as count(xy) / (count(x) * count(y)) and merges the best one; ties go
// to the lexicographically smallest (x, y).
WordPieceModel train_wordpiece(const std::map<std::string, std::int64_t>& word_counts,
                               int target_vocab_size, const TrainOptions& opts = {},
                               std::vector<MergeStep>* trace = nullptr);
WordPieceModel train_wordpiece(const std::vector<std::vector<std::string>>& documents,
                               int target_vocab_size, const TrainOptions& opts = {},
                               std::vector<MergeStep>* trace = nullptr);

// Greedy longest-match-first. Any unmatched position, or a word longer than
// max_word_chars, yields the single unk token.
std::vector<std::string> encode_wordpiece(const WordPieceModel& model, std::string_view word);
std::vector<int> encode_ids(const WordPieceModel& model, const std::vector<std::string>& words);

// Vocab file: one token per line. Metadata goes to `<vocab>.meta.json`.
void save_wordpiece(const WordPieceModel& model, const std::filesystem::path& vocab_path);
WordPieceModel load_wordpiece(const std::filesystem::path& vocab_path);
std::filesystem::path meta_path(const std::filesystem::path& vocab_path);

// Adjacent-pair occurrence counts over symbol-id sequences, each sequence
// weighted by its frequency. Key is (left << 32) | right.
using PairCounts = std::unordered_map<std::uint64_t, std::int64_t>;
PairCounts count_pairs(const std::vector<std::vector<int>>& words,
                       const std::vector<std::int64_t>& freqs, Exec exec);

}  // namespace sentikit::tokenize
