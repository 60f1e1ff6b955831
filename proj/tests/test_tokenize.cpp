#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "sentikit/error.hpp"
#include "sentikit/tokenize.hpp"
#include "oracles.hpp"

using namespace sentikit;
using namespace sentikit::tokenize;

namespace {

using Counts = std::map<std::string, std::int64_t>;

WordPieceModel model_from(const std::vector<std::string>& tokens) {
  WordPieceModel m;
  m.add(m.unk_token);
  for (const auto& t : tokens) m.add(t);
  return m;
}

}  // namespace

TEST_CASE("whitespace tokenisation") {
  CHECK(word_tokenize("nifty falls hard") == std::vector<std::string>{"nifty", "falls", "hard"});
  CHECK(word_tokenize("").empty());
  CHECK(word_tokenize("a  b") == std::vector<std::string>{"a", "b"});
  CHECK(word_tokenize("\t x \n") == std::vector<std::string>{"x"});
}

TEST_CASE("first merge of the hand-derived corpus") {
  std::vector<MergeStep> trace;
  auto m = train_wordpiece(Counts{{"ab", 4}, {"ac", 2}, {"db", 3}}, 10, {}, &trace);
  REQUIRE(!trace.empty());
  CHECK(trace[0].left == "a");
  CHECK(trace[0].right == "##c");
  CHECK(trace[0].token == "ac");
  CHECK(trace[0].pair_count == 2);
  CHECK(trace[0].left_count == 6);
  CHECK(trace[0].right_count == 2);
  CHECK(m.contains("ac"));
}

TEST_CASE("single repeated word and the merge budget") {
  for (int k : {1, 2, 7}) {
    std::vector<MergeStep> trace;
    train_wordpiece(Counts{{"aa", k}}, 4, {}, &trace);
    REQUIRE(trace.size() == 1);
    CHECK(trace[0].token == "aa");
  }
  std::vector<MergeStep> trace;
  auto m = train_wordpiece(Counts{{"abcd", 3}, {"bcda", 2}}, 0 + 10, {}, &trace);
  CHECK(m.alphabet_size == 9);
  CHECK(m.size() == 10);
  CHECK(trace.size() == 1);
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(train_wordpiece(Counts{}, 10), Error);
  CHECK_THROWS_AS(train_wordpiece(Counts{{"ab", 1}}, 5), Error);
}

TEST_CASE("vocabulary invariants") {
  std::mt19937_64 rng(2);
  auto corpus = oracle::random_corpus(rng, 40, "abcdefg");
  auto m = train_wordpiece(corpus, 60);
  CHECK(m.size() <= 60);
  CHECK(m.contains("[UNK]"));
  for (char c : std::string("abcdefg")) {
    CHECK(m.contains(std::string(1, c)));
    CHECK(m.contains("##" + std::string(1, c)));
  }
  auto again = train_wordpiece(corpus, 60);
  CHECK(again.vocab() == m.vocab());
}

TEST_CASE("trainer matches the brute-force oracle") {
  std::mt19937_64 rng(123);
  for (int t = 0; t < 50; ++t) {
    auto corpus = oracle::random_corpus(rng, 1 + rng() % 20, t % 2 ? "abc" : "abcdef");
    std::vector<MergeStep> trace;
    auto probe = train_wordpiece(corpus, 1000000, {}, &trace);
    auto oracle = oracle::wordpiece_merges(corpus, trace.size() + 1);
    REQUIRE(oracle.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
      CHECK(trace[i].left == oracle[i].left);
      CHECK(trace[i].right == oracle[i].right);
      CHECK(trace[i].token == oracle[i].token);
    }
    (void)probe;
  }
}

TEST_CASE("serial and parallel training agree") {
  std::mt19937_64 rng(9);
  auto corpus = oracle::random_corpus(rng, 300, "abcdefghij");
  TrainOptions serial;
  serial.exec = Exec::serial;
  CHECK(train_wordpiece(corpus, 200, serial).vocab() == train_wordpiece(corpus, 200).vocab());

  std::vector<std::vector<int>> words;
  std::vector<std::int64_t> freqs;
  for (int i = 0; i < 5000; ++i) {
    std::vector<int> w;
    for (int k = 0; k < 1 + int(rng() % 10); ++k) w.push_back(rng() % 30);
    words.push_back(w);
    freqs.push_back(1 + rng() % 5);
  }
  CHECK(count_pairs(words, freqs, Exec::serial) == count_pairs(words, freqs, Exec::parallel));
}

TEST_CASE("encoder worked examples") {
  auto m = model_from({"a", "b", "##b", "ab"});
  CHECK(encode_wordpiece(m, "ab") == std::vector<std::string>{"ab"});
  CHECK(encode_wordpiece(model_from({"a", "##b"}), "ac") == std::vector<std::string>{"[UNK]"});
  auto d = model_from({"d", "e", "de", "##cline", "##c", "##l"});
  CHECK(encode_wordpiece(d, "decline") == std::vector<std::string>{"de", "##cline"});
  CHECK(encode_wordpiece(m, "").empty());
  m.max_word_chars = 3;
  CHECK(encode_wordpiece(m, "abab") == std::vector<std::string>{"[UNK]"});
}

TEST_CASE("greedy encoding matches exhaustive segmentation") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    auto m = train_wordpiece(oracle::random_corpus(rng, 20, "abcd"), 30 + rng() % 30);
    // Drop some continuation characters so unmatched positions occur.
    WordPieceModel holes;
    holes.add(holes.unk_token);
    for (const auto& tok : m.vocab())
      if (tok != "##d" && tok != holes.unk_token) holes.add(tok);
    for (const auto* model : {&m, &holes}) {
      for (int k = 0; k < 300; ++k) {
        std::string w;
        int len = 1 + rng() % 8;
        for (int i = 0; i < len; ++i) w.push_back("abcd"[rng() % 4]);
        CHECK(encode_wordpiece(*model, w) == oracle::wordpiece_encode(*model, w));
      }
    }
  }
}

TEST_CASE("round trip on random words") {
  std::mt19937_64 rng(77);
  auto m = train_wordpiece(oracle::random_corpus(rng, 200, "abcdefghijklmnop"), 400);
  int unk = 0;
  for (int k = 0; k < 10000; ++k) {
    std::string w;
    int len = 1 + rng() % 12;
    for (int i = 0; i < len; ++i) w.push_back("abcdefghijklmnopqrstuvwxyz"[rng() % 26]);
    auto pieces = encode_wordpiece(m, w);
    if (pieces == std::vector<std::string>{"[UNK]"}) {
      ++unk;
      continue;
    }
    std::string joined;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (i > 0) {
        REQUIRE(pieces[i].rfind("##", 0) == 0);
        joined += pieces[i].substr(2);
      } else {
        joined += pieces[i];
      }
    }
    CHECK(joined == w);
  }
  CHECK(unk > 0);
  CHECK(unk < 10000);
}

TEST_CASE("unknown count never grows with the vocabulary") {
  std::mt19937_64 rng(4);
  auto corpus = oracle::random_corpus(rng, 60, "abcdefgh");
  std::vector<std::string> probes;
  for (int k = 0; k < 2000; ++k) {
    std::string w;
    for (int i = 0; i < 1 + int(rng() % 7); ++i) w.push_back("abcdefghij"[rng() % 10]);
    probes.push_back(w);
  }
  int prev = 1 << 30;
  for (int target : {20, 40, 80, 160}) {
    auto m = train_wordpiece(corpus, target);
    int unk = 0;
    for (const auto& [w, n] : corpus) unk += encode_wordpiece(m, w) == std::vector<std::string>{m.unk_token};
    CHECK(unk == 0);
    CHECK(unk <= prev);
    prev = unk;
  }
}

TEST_CASE("save and load") {
  std::mt19937_64 rng(8);
  auto m = train_wordpiece(oracle::random_corpus(rng, 30, "xyz"), 25);
  auto path = std::filesystem::temp_directory_path() / "sentikit_vocab.txt";
  save_wordpiece(m, path);
  auto back = load_wordpiece(path);
  CHECK(back.vocab() == m.vocab());
  CHECK(back.unk_token == m.unk_token);
  CHECK(back.continuation_prefix == m.continuation_prefix);
  CHECK(back.max_word_chars == m.max_word_chars);
  CHECK(back.alphabet_size == m.alphabet_size);
  std::filesystem::remove(path);
  std::filesystem::remove(meta_path(path));
}
