#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "sentikit/error.hpp"
#include "sentikit/eval.hpp"

using namespace sentikit;
using namespace sentikit::eval;

namespace {

lexicon::SentimentScore polarity_score(double p) {
  lexicon::SentimentScore s;
  s.polarity = p;
  s.no_signal = p == 0.0;
  return s;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST_CASE("stratified split arithmetic") {
  std::vector<int> labels;
  for (int i = 0; i < 100; ++i) labels.push_back(i < 30 ? 1 : 0);
  auto s = split_indices(labels, 0.2, 5);
  CHECK(s.train.size() == 80);
  CHECK(s.test.size() == 20);
  int test_pos = 0;
  for (auto i : s.test) test_pos += labels[i];
  CHECK(test_pos == 6);

  std::set<std::size_t> all(s.train.begin(), s.train.end());
  for (auto i : s.test) CHECK(all.insert(i).second);
  CHECK(all.size() == 100);
  CHECK(std::is_sorted(s.train.begin(), s.train.end()));
  CHECK(std::is_sorted(s.test.begin(), s.test.end()));

  auto again = split_indices(labels, 0.2, 5);
  CHECK(again.train == s.train);
  CHECK(split_indices(labels, 0.2, 6).test != s.test);

  std::vector<int> half(100);
  for (int i = 0; i < 50; ++i) half[i] = 1;
  auto h = split_indices(half, 0.5, 1);
  int pos = 0;
  for (auto i : h.test) pos += half[i];
  CHECK(h.test.size() == 50);
  CHECK(pos == 25);
}

TEST_CASE("split errors") {
  CHECK_THROWS_AS(split_indices({1, 0, 0, 0}, 0.2, 1), Error);
  CHECK_THROWS_AS(split_indices({1, 1, 0, 0}, 0.0, 1), Error);
  CHECK_THROWS_AS(split_indices({1, 1, 0, 0}, 1.0, 1), Error);
}

TEST_CASE("accuracy counting") {
  CHECK(accuracy({1, 0, 1}, {1, 0, 1}) == 1.0);
  CHECK(accuracy({0, 1}, {1, 0}) == 0.0);
  CHECK(accuracy({1, 1, 0, 0}, {1, 1, 0, 1}) == 0.75);
  CHECK_THROWS_AS(accuracy({1}, {1, 0}), Error);
  CHECK_THROWS_AS(accuracy({}, {}), Error);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    std::vector<int> p(1 + rng() % 50), l(p.size()), flip(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = rng() % 2;
      l[i] = rng() % 2;
      flip[i] = 1 - p[i];
    }
    CHECK(accuracy(p, l) + accuracy(flip, l) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("confusion cells") {
  auto c = confusion({1, 1, 0, 0, -1, -1}, {1, 0, 0, 1, 1, 0});
  CHECK(c.tp == 1);
  CHECK(c.fp == 1);
  CHECK(c.tn == 1);
  CHECK(c.fn == 1);
  CHECK(c.no_signal == 2);
  CHECK(c.n() == 6);
  CHECK(c.accuracy() == 2.0 / 6.0);
}

TEST_CASE("lexicon accuracy policies") {
  std::vector<EvalItem> items;
  for (int i = 0; i < 10; ++i) items.push_back({"", "", i % 2});
  auto oracle = lexicon_accuracy(items, [](const EvalItem& it) { return polarity_score(it.label ? 0.5 : -0.5); });
  CHECK(oracle.accuracy() == 1.0);
  auto silent = lexicon_accuracy(items, [](const EvalItem&) { return polarity_score(0.0); });
  CHECK(silent.accuracy() == 0.0);
  CHECK(silent.no_signal == 10);

  int calls = 0;
  std::vector<EvalItem> mixed;
  for (int i = 0; i < 10; ++i) mixed.push_back({std::to_string(i), "", 1});
  auto six = lexicon_accuracy(
      mixed, [](const EvalItem& it) { return polarity_score(std::stoi(it.raw_text) < 6 ? 1.0 : -1.0); },
      Exec::serial);
  CHECK(six.accuracy() == 0.6);
  (void)calls;
  CHECK_THROWS_AS(lexicon_accuracy({}, [](const EvalItem&) { return polarity_score(1); }), Error);
}

TEST_CASE("compound takes precedence over polarity") {
  lexicon::SentimentScore s = polarity_score(1.0);
  s.compound = -0.3;
  s.no_signal = false;
  CHECK(sign_label(s) == 0);
  s.compound = 0.0;
  s.no_signal = true;
  CHECK(sign_label(s) == -1);
  CHECK(sign_label(polarity_score(-0.2)) == 0);
}

TEST_CASE("serial and parallel lexicon accuracy agree") {
  std::vector<EvalItem> items;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5000; ++i) items.push_back({std::to_string(rng() % 7), "", int(rng() % 2)});
  auto scorer = [](const EvalItem& it) { return polarity_score(std::stoi(it.raw_text) - 3.0); };
  CHECK(lexicon_accuracy(items, scorer, Exec::serial) == lexicon_accuracy(items, scorer, Exec::parallel));
}

TEST_CASE("correlation constructions") {
  std::mt19937_64 rng(9);
  auto v = random_vector(rng, 100);
  std::vector<double> neg(v.size()), constant(v.size(), 2.5);
  std::transform(v.begin(), v.end(), neg.begin(), [](double x) { return -x; });
  CHECK(std::abs(*pearson(v, v) - 1.0) < 1e-12);
  CHECK(std::abs(*pearson(v, neg) + 1.0) < 1e-12);
  CHECK(!pearson(v, constant));
  CHECK_THROWS_AS(pearson(v, {1.0, 2.0}), Error);

  auto m = correlate({{"a", v}, {"b", neg}, {"c", random_vector(rng, 100)}, {"flat", constant}});
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(*m.values[i][i] - 1.0) < 1e-12);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(*m.values[i][j] - *m.values[j][i]) < 1e-12);
    CHECK(!m.values[i][3]);
    CHECK(!m.values[3][i]);
  }
  CHECK(!m.values[3][3]);
  CHECK(correlation_csv(m).find("undefined") != std::string::npos);
}

TEST_CASE("correlation matches a two-pass reference") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 + rng() % 50;
    auto a = random_vector(rng, n), b = random_vector(rng, n);
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ma += a[i] / n;
      mb += b[i] / n;
    }
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    CHECK(std::abs(*pearson(a, b) - sab / std::sqrt(saa * sbb)) < 1e-12);
  }
}

TEST_CASE("report csv round trip and tables") {
  std::vector<ReportRow> rows;
  const char* fields[] = {"headline_synopsis", "full_text"};
  const char* segments[] = {"financial", "non_financial", "all"};
  std::int64_t k = 1;
  for (const char* f : fields)
    for (const char* s : segments) rows.push_back({"VADER", f, s, "all", {k++, 2, 3, 4, 1}});
  rows.push_back({"Bi-LSTM, \"small\"", "full_text", "financial", "train", {40, 5, 40, 15, 0}});
  rows.push_back({"Bi-LSTM, \"small\"", "full_text", "financial", "test", {8, 2, 7, 3, 0}});
  CHECK(parse_report_csv(report_csv(rows)) == rows);

  auto lex = render_lexicon_table(rows);
  auto line_of = [](const std::string& text, const std::string& start) {
    auto p = text.find("\n" + start);
    REQUIRE(p != std::string::npos);
    return text.substr(p + 1, text.find('\n', p + 1) - p - 1);
  };
  // Accuracy (k + 3) / (k + 10): A = 4/11, B = 7/14, C = 5/12, D = 8/15,
  // E = 9/16, F = 6/13.
  auto vader = line_of(lex, "VADER");
  CHECK(vader == "VADER   36.4  50.0  41.7  53.3  56.2  46.2");

  auto model = render_model_table(rows);
  auto bil = line_of(model, "Bi-LSTM");
  CHECK(bil.find("80.0") != std::string::npos);
  CHECK(bil.find("75.0") != std::string::npos);

  auto empty = render_lexicon_table({});
  CHECK(empty.find("Method") != std::string::npos);
  CHECK(empty.find("VADER") == std::string::npos);
}
