// Serial reference versus OpenMP kernel, one benchmark pair per hot loop.
// Arg 0 runs the serial path, arg 1 the parallel one.

#include <benchmark/benchmark.h>

#include <random>

#include "sentikit/classical.hpp"
#include "sentikit/eval.hpp"
#include "sentikit/features.hpp"
#include "sentikit/lexicon.hpp"
#include "sentikit/neural.hpp"
#include "sentikit/tokenize.hpp"

using namespace sentikit;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

std::vector<std::vector<int>> random_sequences(std::size_t n, int alphabet, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> out(n);
  for (auto& s : out) {
    s.resize(2 + rng() % 14);
    for (auto& v : s) v = static_cast<int>(rng() % alphabet);
  }
  return out;
}

void bm_count_pairs(benchmark::State& state) {
  auto words = random_sequences(50000, 60, 1);
  std::vector<std::int64_t> freqs(words.size(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(tokenize::count_pairs(words, freqs, mode(state)));
}

void bm_document_frequencies(benchmark::State& state) {
  auto docs = random_sequences(50000, 5000, 2);
  for (auto _ : state) benchmark::DoNotOptimize(features::document_frequencies(docs, 5000, mode(state)));
}

void bm_best_split(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::size_t rows = 4000, dim = 200;
  classical::Matrix X;
  classical::Labels y;
  for (std::size_t i = 0; i < rows; ++i) {
    features::SparseVector v;
    for (std::size_t f = 0; f < dim; f += 1 + rng() % 8) {
      v.indices.push_back(static_cast<int>(f));
      v.values.push_back(double(rng() % 100) / 100.0);
    }
    X.push_back(v);
    y.push_back(static_cast<int>(rng() % 2));
  }
  auto cols = classical::ColumnMatrix::from_rows(X, dim);
  std::vector<std::int64_t> w(rows, 1);
  std::vector<int> feats(dim);
  for (std::size_t f = 0; f < dim; ++f) feats[f] = static_cast<int>(f);
  for (auto _ : state) benchmark::DoNotOptimize(classical::best_split(cols, y, w, feats, mode(state)));
}

void bm_batch_gradient(benchmark::State& state) {
  neural::Dims dims;
  dims.vocab_size = 500;
  auto model = neural::init_model(dims, 4);
  std::vector<neural::Example> data;
  for (auto& s : random_sequences(256, 500, 5)) data.emplace_back(s, static_cast<int>(s.size() % 2));
  std::vector<std::size_t> batch(data.size());
  for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = i;
  for (auto _ : state) benchmark::DoNotOptimize(neural::batch_gradient(model, data, batch, mode(state)));
}

void bm_lexicon_accuracy(benchmark::State& state) {
  lexicon::Lexicon lex("bench", lexicon::Scale::plus_minus_1);
  for (int i = 0; i < 400; ++i) lex.add("w" + std::to_string(i), i % 3 == 0 ? 1.0 : -1.0);
  std::mt19937_64 rng(6);
  std::vector<eval::EvalItem> items(20000);
  for (auto& it : items) {
    for (int k = 0; k < 60; ++k) it.clean_text += "w" + std::to_string(rng() % 2000) + " ";
    it.label = static_cast<int>(rng() % 2);
  }
  eval::Scorer scorer = [&](const eval::EvalItem& it) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : it.clean_text) {
      if (c == ' ') {
        tokens.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    return lexicon::score_lm(tokens, lex);
  };
  for (auto _ : state) benchmark::DoNotOptimize(eval::lexicon_accuracy(items, scorer, mode(state)));
}

}  // namespace

BENCHMARK(bm_count_pairs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_document_frequencies)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_best_split)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_batch_gradient)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(bm_lexicon_accuracy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
