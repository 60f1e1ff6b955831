#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sentikit/error.hpp"
#include "sentikit/features.hpp"

using namespace sentikit;
using namespace sentikit::features;

namespace {

using Docs = std::vector<std::vector<std::string>>;

Docs random_docs(std::mt19937_64& rng, int n, int vocab) {
  Docs docs;
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> d;
    int len = rng() % 12;
    for (int k = 0; k < len; ++k) d.push_back("t" + std::to_string(rng() % vocab));
    docs.push_back(d);
  }
  return docs;
}

}  // namespace

TEST_CASE("two-document worked example") {
  auto m = fit_tfidf({{"gain", "gain", "loss"}, {"loss"}});
  REQUIRE(m.terms == std::vector<std::string>{"gain", "loss"});
  CHECK(m.doc_count == 2);
  CHECK(m.idf[0] == doctest::Approx(1.4055).epsilon(1e-3));
  CHECK(m.idf[0] == doctest::Approx(std::log(1.5) + 1.0).epsilon(1e-15));
  CHECK(m.idf[1] == 1.0);

  auto v = transform_tfidf(m, {"gain", "gain", "loss"});
  REQUIRE(v.indices == std::vector<int>{0, 1});
  CHECK(v.dim == 2);
  CHECK(v.values[0] == doctest::Approx(0.9424).epsilon(1e-3));
  CHECK(v.values[1] == doctest::Approx(0.3353).epsilon(1e-3));
  CHECK(std::abs(v.values[0] - 0.9424) < 1e-3);
  CHECK(std::abs(v.values[1] - 0.3353) < 1e-3);
}

TEST_CASE("degenerate idf cases") {
  auto one = fit_tfidf({{"a", "b", "a"}});
  for (double x : one.idf) CHECK(x == 1.0);
  auto every = fit_tfidf({{"a", "b"}, {"a"}, {"c", "a"}});
  CHECK(every.idf[every.index("a")] == 1.0);
  for (double x : every.idf) CHECK(x > 0.0);
}

TEST_CASE("empty and unseen documents give zero vectors") {
  auto m = fit_tfidf({{"gain", "gain", "loss"}, {"loss"}});
  CHECK(transform_tfidf(m, {}).indices.empty());
  CHECK(transform_tfidf(m, {"zzz", "yyy"}).indices.empty());
  CHECK(transform_tfidf(m, {}).norm() == 0.0);
  CHECK(m.index("zzz") == -1);
}

TEST_CASE("fit errors and diagnostics") {
  CHECK_THROWS_AS(fit_tfidf({}), Error);
  CHECK_THROWS_AS(fit_tfidf({{}, {}}), Error);
  std::string message;
  fit_tfidf({{"a", "b", "c"}}, [&](const std::string& m) { message = m; });
  CHECK(!message.empty());
  message.clear();
  fit_tfidf({{"a"}, {"a"}}, [&](const std::string& m) { message = m; });
  CHECK(message.empty());
}

TEST_CASE("norms are zero or one and order does not matter") {
  std::mt19937_64 rng(3);
  auto docs = random_docs(rng, 400, 80);
  auto m = fit_tfidf(docs);
  for (auto d : random_docs(rng, 400, 100)) {
    auto v = transform_tfidf(m, d);
    double n = v.norm();
    CHECK((n == 0.0 || std::abs(n - 1.0) < 1e-12));
    CHECK(std::is_sorted(v.indices.begin(), v.indices.end()));
    CHECK(std::adjacent_find(v.indices.begin(), v.indices.end()) == v.indices.end());
    for (double x : v.values) CHECK(x != 0.0);
    for (int i : v.indices) CHECK((i >= 0 && i < v.dim));
    std::shuffle(d.begin(), d.end(), rng);
    CHECK(transform_tfidf(m, d) == v);
  }
}

TEST_CASE("idf matches a direct count") {
  std::mt19937_64 rng(12);
  auto docs = random_docs(rng, 200, 50);
  auto m = fit_tfidf(docs);
  for (std::size_t c = 0; c < m.size(); ++c) {
    int df = 0;
    for (const auto& d : docs) df += std::find(d.begin(), d.end(), m.terms[c]) != d.end();
    CHECK(m.idf[c] == doctest::Approx(std::log((1.0 + 200) / (1.0 + df)) + 1.0).epsilon(1e-14));
  }
}

TEST_CASE("serial and parallel paths agree") {
  std::mt19937_64 rng(21);
  auto docs = random_docs(rng, 3000, 400);
  auto a = fit_tfidf(docs, {}, Exec::serial);
  auto b = fit_tfidf(docs, {}, Exec::parallel);
  CHECK(a.terms == b.terms);
  CHECK(a.idf == b.idf);

  std::vector<std::vector<int>> ids;
  for (const auto& d : docs) {
    std::vector<int> row;
    for (const auto& t : d) row.push_back(a.index(t));
    ids.push_back(row);
  }
  CHECK(document_frequencies(ids, a.size(), Exec::serial) ==
        document_frequencies(ids, a.size(), Exec::parallel));
  auto rows = transform_all(a, docs);
  for (std::size_t i = 0; i < docs.size(); ++i) CHECK(rows[i] == transform_tfidf(a, docs[i]));
}

TEST_CASE("save and load") {
  auto m = fit_tfidf({{"gain", "gain", "loss"}, {"loss", "x,y"}});
  auto path = std::filesystem::temp_directory_path() / "sentikit_tfidf.csv";
  save_tfidf(m, path);
  auto back = load_tfidf(path);
  CHECK(back.terms == m.terms);
  CHECK(back.idf == m.idf);
  CHECK(back.doc_count == m.doc_count);
  CHECK(back.index("x,y") == 2);
  std::filesystem::remove(path);
}
