#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "sentikit/corpus.hpp"
#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

using namespace sentikit;
using namespace sentikit::corpus;

namespace {

NewsArticle article(std::string id, std::string headline, std::optional<std::string> synopsis,
                    std::optional<std::string> full_text, std::string sector = "Stocks") {
  NewsArticle a;
  a.id = std::move(id);
  a.publish_datetime = "2020-01-01T00:00:00";
  a.headline = std::move(headline);
  a.synopsis = std::move(synopsis);
  a.full_text = std::move(full_text);
  a.sector_raw = std::move(sector);
  return a;
}

std::string random_text(std::mt19937_64& rng, std::size_t len) {
  static const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .,;:!?%$#@&*()-_'\"\t\n";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[pick(rng)]);
  // Sprinkle in stopwords and whitelisted words.
  for (const char* w : {" the ", " up ", " not ", " down ", " and "})
    if (rng() % 3 == 0) s += w;
  return s;
}

}  // namespace

TEST_CASE("ingest applies the drop rule") {
  std::string text =
      R"({"id":"a","publish_datetime":"2020-01-01","headline":"h1","synopsis":"s","sector":"Stocks","full_text":"f"})"
      "\n"
      R"({"id":"b","publish_datetime":"2020-01-02","headline":"h2","synopsis":null,"sector":"Stocks","full_text":null})"
      "\n"
      R"({"id":"c","publish_datetime":"2020-01-03","headline":"h3","synopsis":"only synopsis","sector":"Tech"})"
      "\n";
  auto r = ingest_text(text, Format::jsonl);
  REQUIRE(r.articles.size() == 2);
  CHECK(r.dropped == 1);
  CHECK(r.malformed == 0);
  CHECK(r.articles[1].id == "c");
  CHECK(!r.articles[1].full_text);
}

TEST_CASE("ingest of an empty file") {
  auto r = ingest_text("", Format::jsonl);
  CHECK(r.articles.empty());
  CHECK(r.dropped == 0);
}

TEST_CASE("empty strings count as missing for the drop rule") {
  auto r = ingest_text(
      R"({"id":"a","publish_datetime":"2020-01-01","headline":"h","synopsis":"","sector":"Stocks","full_text":"  "})"
      "\n",
      Format::jsonl);
  CHECK(r.articles.empty());
  CHECK(r.dropped == 1);
}

TEST_CASE("malformed records are skipped and counted") {
  auto r = ingest_text(
      "{not json\n"
      R"({"headline":"no id","synopsis":"s","sector":"x","publish_datetime":"2020-01-01"})"
      "\n"
      R"({"id":"ok","publish_datetime":"2020-01-01","headline":"h","synopsis":"s","sector":"x"})"
      "\n",
      Format::jsonl);
  CHECK(r.articles.size() == 1);
  CHECK(r.malformed == 2);
}

TEST_CASE("csv ingest with quoted fields") {
  std::string text =
      "id,publish_datetime,update_datetime,headline,synopsis,sector,full_text\n"
      "1,2020-01-01,,\"Sensex up, banks rally\",\"Quote \"\"inside\"\"\",Stocks,\n"
      "2,2020-01-02,,dropped,,Stocks,\n";
  auto r = ingest_text(text, Format::csv);
  REQUIRE(r.articles.size() == 1);
  CHECK(r.dropped == 1);
  CHECK(r.articles[0].headline == "Sensex up, banks rally");
  CHECK(r.articles[0].synopsis == std::optional<std::string>("Quote \"inside\""));
}

TEST_CASE("preprocess worked examples") {
  auto cfg = PreprocessConfig::defaults();
  auto a = preprocess(article("1", "Nifty CRASHES 3%", "banks fall", "Up 5%!"), cfg);
  CHECK(a.headline_synopsis == "nifty crashes banks fall");
  CHECK(!a.full_text);
  CHECK(clean_text("Up 5%!", cfg) == "up");

  std::string long_clean = "markets rallied strongly following policy announcement";
  auto b = preprocess(article("2", "x", std::nullopt, long_clean), cfg);
  CHECK(b.full_text == std::optional<std::string>(long_clean));
}

TEST_CASE("short full text becomes absent after cleaning") {
  auto cfg = PreprocessConfig::defaults();
  // 19 cleaned characters versus 20.
  CHECK(!preprocess(article("1", "h", "s", "abcdefghij klmnopqr!!!!!!!!"), cfg).full_text);
  CHECK(preprocess(article("1", "h", "s", "abcdefghij klmnopqrs"), cfg).full_text);
}

TEST_CASE("whitelisted stopwords survive") {
  auto cfg = PreprocessConfig::defaults();
  for (const auto& w : default_whitelist()) {
    CHECK(cfg.stopwords.count(w) == 1);
    CHECK(clean_text("the " + w + " and", cfg) == w);
  }
}

TEST_CASE("config validation") {
  auto cfg = PreprocessConfig::defaults();
  cfg.whitelist.insert("sensex");
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = PreprocessConfig::defaults();
  cfg.min_full_text_chars = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("preprocess properties on random text") {
  auto cfg = PreprocessConfig::defaults();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    auto a = article("r" + std::to_string(i), random_text(rng, rng() % 40), random_text(rng, rng() % 60),
                     random_text(rng, rng() % 200));
    auto once = preprocess(a, cfg);
    auto twice = preprocess(once, cfg);
    CHECK(once == twice);
    for (const auto* text : {&once.headline_synopsis, &once.headline}) {
      for (char c : *text) CHECK(((c >= 'a' && c <= 'z') || c == ' '));
      if (text->empty()) continue;
      for (const auto& tok : split(*text, ' ')) {
        CHECK(!tok.empty());
        if (cfg.stopwords.count(tok)) CHECK(cfg.whitelist.count(tok) == 1);
      }
    }
    if (once.full_text) CHECK(once.full_text->size() >= cfg.min_full_text_chars);
  }
}

TEST_CASE("sector normalisation keeps the top sectors") {
  std::vector<NewsArticle> arts;
  auto add = [&](const std::string& sector, int n) {
    for (int i = 0; i < n; ++i) arts.push_back(article(sector + std::to_string(i), "h", "s", std::nullopt, sector));
  };
  add("Other", 463);
  add("Stocks", 245);
  add("Politics & India", 163);
  add("International", 81);
  add("Economy & Banking", 47);
  add("Entertainment", 1);
  auto out = normalize_sectors(arts, 4);
  std::map<Sector, int> counts;
  for (const auto& a : out) ++counts[a.sector];
  CHECK(counts[Sector::other] == 464);
  CHECK(counts[Sector::stocks] == 245);
  CHECK(counts[Sector::politics_india] == 163);
  CHECK(counts[Sector::international] == 81);
  CHECK(counts[Sector::economy_banking] == 47);
  for (const auto& a : out) {
    bool financial = a.sector == Sector::stocks || a.sector == Sector::economy_banking;
    CHECK((a.segment == Segment::financial) == financial);
  }
  CHECK_THROWS_AS(normalize_sectors(arts, 0), Error);
}

TEST_CASE("sectors outside the top k are clubbed into other") {
  std::vector<NewsArticle> arts;
  for (int i = 0; i < 5; ++i) arts.push_back(article("s" + std::to_string(i), "h", "s", std::nullopt, "stocks"));
  arts.push_back(article("e", "h", "s", std::nullopt, "entertainment"));
  auto out = normalize_sectors(arts, 1);
  CHECK(out[0].sector == Sector::stocks);
  CHECK(out[0].segment == Segment::financial);
  CHECK(out.back().sector == Sector::other);
  CHECK(out.back().segment == Segment::non_financial);
}

TEST_CASE("sector names are matched by letters only") {
  CHECK(sector_from_raw("Economy & Banking") == Sector::economy_banking);
  CHECK(sector_from_raw("economy&banking") == Sector::economy_banking);
  CHECK(sector_from_raw("POLITICS & INDIA") == Sector::politics_india);
  CHECK(sector_from_raw("Sports") == Sector::other);
}

TEST_CASE("cleaned jsonl round trip") {
  auto cfg = PreprocessConfig::defaults();
  std::vector<NewsArticle> arts = {preprocess(article("1", "Sensex up", "banks gain", std::nullopt), cfg),
                                   preprocess(article("2", "Rupee down", std::nullopt, "rupee falls sharply against dollar"), cfg)};
  arts = normalize_sectors(arts, 4);
  auto path = std::filesystem::temp_directory_path() / "sentikit_corpus_roundtrip.jsonl";
  {
    std::ostringstream out;
    write_jsonl(out, arts);
    write_file(path, out.str());
  }
  auto back = read_jsonl(path);
  std::filesystem::remove(path);
  REQUIRE(back.size() == arts.size());
  for (std::size_t i = 0; i < arts.size(); ++i) CHECK(back[i] == arts[i]);
}
