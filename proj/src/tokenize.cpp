#include "sentikit/tokenize.hpp"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>
#include <omp.h>

#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

namespace sentikit::tokenize {

std::vector<std::string> word_tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space_ascii(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space_ascii(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

bool WordPieceModel::add(const std::string& token) {
  if (index_.count(token)) return false;
  index_.emplace(token, static_cast<int>(vocab_.size()));
  vocab_.push_back(token);
  return true;
}

std::optional<int> WordPieceModel::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int WordPieceModel::unk_id() const {
  auto u = id(unk_token);
  if (!u) fail(ErrorKind::validation, "vocabulary lacks the unk token " + unk_token);
  return *u;
}

PairCounts count_pairs(const std::vector<std::vector<int>>& words,
                       const std::vector<std::int64_t>& freqs, Exec exec) {
  auto count_range = [&](std::size_t lo, std::size_t hi, PairCounts& out) {
    for (std::size_t w = lo; w < hi; ++w) {
      const auto& seq = words[w];
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        auto key = (static_cast<std::uint64_t>(seq[i]) << 32) | static_cast<std::uint32_t>(seq[i + 1]);
        out[key] += freqs[w];
      }
    }
  };

  PairCounts total;
  if (exec == Exec::serial) {
    count_range(0, words.size(), total);
    return total;
  }

  std::vector<PairCounts> partial(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    auto t = static_cast<std::size_t>(omp_get_thread_num());
    auto nt = static_cast<std::size_t>(omp_get_num_threads());
    std::size_t lo = words.size() * t / nt, hi = words.size() * (t + 1) / nt;
    count_range(lo, hi, partial[t]);
  }
  // Integer sums, so merge order cannot change the result.
  for (auto& p : partial)
    for (const auto& [k, v] : p) total[k] += v;
  return total;
}

namespace {

struct Candidate {
  int left = -1, right = -1;
  std::int64_t pair = 0, lc = 0, rc = 0;
};

// a beats b if its score is higher, or equal with a smaller (left, right).
bool better(const Candidate& a, const Candidate& b, const std::vector<std::string>& vocab) {
  if (b.left < 0) return true;
  __int128 lhs = static_cast<__int128>(a.pair) * (static_cast<__int128>(b.lc) * b.rc);
  __int128 rhs = static_cast<__int128>(b.pair) * (static_cast<__int128>(a.lc) * a.rc);
  if (lhs != rhs) return lhs > rhs;
  const auto& al = vocab[a.left];
  const auto& bl = vocab[b.left];
  if (al != bl) return al < bl;
  return vocab[a.right] < vocab[b.right];
}

}  // namespace

WordPieceModel train_wordpiece(const std::map<std::string, std::int64_t>& word_counts,
                               int target_vocab_size, const TrainOptions& opts,
                               std::vector<MergeStep>* trace) {
  WordPieceModel model;
  model.continuation_prefix = opts.continuation_prefix;
  model.unk_token = opts.unk_token;
  model.max_word_chars = opts.max_word_chars;
  model.target_vocab_size = target_vocab_size;

  std::vector<std::vector<std::string>> chars;
  std::vector<std::int64_t> freqs;
  std::set<std::string> alphabet;
  for (const auto& [word, n] : word_counts) {
    if (word.empty() || n <= 0) continue;
    auto cps = utf8_code_points(word);
    for (const auto& c : cps) {
      alphabet.insert(c);
      alphabet.insert(opts.continuation_prefix + c);
    }
    chars.push_back(std::move(cps));
    freqs.push_back(n);
  }
  if (chars.empty()) fail(ErrorKind::fit, "wordpiece training corpus has no words");

  model.add(opts.unk_token);
  for (const auto& a : alphabet) model.add(a);
  model.alphabet_size = static_cast<int>(model.size());
  if (target_vocab_size <= model.alphabet_size)
    fail(ErrorKind::parameter, "target vocab size " + std::to_string(target_vocab_size) +
                                   " must exceed the alphabet size " +
                                   std::to_string(model.alphabet_size));

  std::vector<std::vector<int>> words;
  words.reserve(chars.size());
  for (const auto& cps : chars) {
    std::vector<int> seq;
    for (std::size_t i = 0; i < cps.size(); ++i)
      seq.push_back(*model.id(i == 0 ? cps[i] : opts.continuation_prefix + cps[i]));
    words.push_back(std::move(seq));
  }

  const auto& prefix = opts.continuation_prefix;
  while (static_cast<int>(model.size()) < target_vocab_size) {
    std::vector<std::int64_t> sym(model.size(), 0);
    for (std::size_t w = 0; w < words.size(); ++w)
      for (int s : words[w]) sym[s] += freqs[w];

    auto pairs = count_pairs(words, freqs, opts.exec);
    if (pairs.empty()) break;

    Candidate best;
    for (const auto& [key, n] : pairs) {
      Candidate c{static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu), n, 0, 0};
      c.lc = sym[c.left];
      c.rc = sym[c.right];
      if (better(c, best, model.vocab())) best = c;
    }

    std::string left = model.vocab()[best.left];
    std::string right = model.vocab()[best.right];
    std::string token = left + (right.rfind(prefix, 0) == 0 ? right.substr(prefix.size()) : right);
    bool grew = model.add(token);
    int merged = *model.id(token);
    if (trace) trace->push_back({left, right, token, best.pair, best.lc, best.rc, grew});

    for (auto& seq : words) {
      std::size_t out = 0;
      for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i + 1 < seq.size() && seq[i] == best.left && seq[i + 1] == best.right) {
          seq[out++] = merged;
          ++i;
        } else {
          seq[out++] = seq[i];
        }
      }
      seq.resize(out);
    }
  }
  return model;
}

WordPieceModel train_wordpiece(const std::vector<std::vector<std::string>>& documents,
                               int target_vocab_size, const TrainOptions& opts,
                               std::vector<MergeStep>* trace) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& doc : documents)
    for (const auto& w : doc) ++counts[w];
  return train_wordpiece(counts, target_vocab_size, opts, trace);
}

std::vector<std::string> encode_wordpiece(const WordPieceModel& model, std::string_view word) {
  auto cps = utf8_code_points(word);
  if (cps.empty()) return {};
  if (static_cast<int>(cps.size()) > model.max_word_chars) return {model.unk_token};

  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < cps.size()) {
    std::string piece;
    std::size_t end = cps.size();
    for (; end > start; --end) {
      piece = start > 0 ? model.continuation_prefix : std::string();
      for (std::size_t k = start; k < end; ++k) piece += cps[k];
      if (model.contains(piece)) break;
    }
    if (end == start) return {model.unk_token};
    out.push_back(std::move(piece));
    start = end;
  }
  return out;
}

std::vector<int> encode_ids(const WordPieceModel& model, const std::vector<std::string>& words) {
  std::vector<int> ids;
  for (const auto& w : words)
    for (const auto& piece : encode_wordpiece(model, w)) ids.push_back(*model.id(piece));
  return ids;
}

std::filesystem::path meta_path(const std::filesystem::path& vocab_path) {
  auto p = vocab_path;
  p += ".meta.json";
  return p;
}

void save_wordpiece(const WordPieceModel& model, const std::filesystem::path& vocab_path) {
  std::string text;
  for (const auto& t : model.vocab()) text += t + "\n";
  write_file(vocab_path, text);
  nlohmann::ordered_json meta = {
      {"unk_token", model.unk_token},
      {"continuation_prefix", model.continuation_prefix},
      {"max_word_chars", model.max_word_chars},
      {"target_vocab_size", model.target_vocab_size},
      {"alphabet_size", model.alphabet_size},
      {"vocab_size", model.size()},
  };
  write_file(meta_path(vocab_path), meta.dump(2) + "\n");
}

WordPieceModel load_wordpiece(const std::filesystem::path& vocab_path) {
  WordPieceModel model;
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(meta_path(vocab_path)));
    model.unk_token = meta.at("unk_token").get<std::string>();
    model.continuation_prefix = meta.at("continuation_prefix").get<std::string>();
    model.max_word_chars = meta.at("max_word_chars").get<int>();
    model.target_vocab_size = meta.at("target_vocab_size").get<int>();
    model.alphabet_size = meta.value("alphabet_size", 0);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, meta_path(vocab_path).string() + ": " + e.what());
  }
  for (const auto& line : split(read_file(vocab_path), '\n')) {
    if (line.empty()) continue;
    if (!model.add(line))
      fail(ErrorKind::validation, vocab_path.string() + ": duplicate token '" + line + "'");
  }
  model.unk_id();
  return model;
}

}  // namespace sentikit::tokenize
