#include "sentikit/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sentikit/csv.hpp"
#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

namespace sentikit::corpus {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kStopwordData =
#include "stopwords_en.inc"
    ;

// Letters-only key used to compare sector tags ("Economy & Banking" ->
// "economybanking").
std::string sector_key(std::string_view raw) {
  std::string key;
  for (char c : raw) {
    if (c >= 'A' && c <= 'Z') key.push_back(static_cast<char>(c - 'A' + 'a'));
    else if (c >= 'a' && c <= 'z') key.push_back(c);
  }
  return key;
}

bool is_other_key(const std::string& key) { return key == "other" || key == "others"; }

bool valid_iso8601(const std::string& s) {
  static const std::regex re(
      R"(^\d{4}-\d{2}-\d{2}([T ]\d{2}:\d{2}(:\d{2}(\.\d+)?)?(Z|[+-]\d{2}:?\d{2})?)?$)");
  return std::regex_match(s, re);
}

std::optional<std::string> non_empty(std::optional<std::string> v) {
  if (v && trim(*v).empty()) return std::nullopt;
  return v;
}

// Field values shared by the JSONL and CSV readers.
struct RawRecord {
  std::optional<std::string> id, publish, update, headline, synopsis, sector, full_text;
  std::optional<std::string> sector_norm, segment, headline_synopsis;
};

enum class Outcome { ok, dropped, malformed };

Outcome to_article(const RawRecord& r, NewsArticle& out, bool drop_rule = true) {
  if (!r.id || r.id->empty() || !r.publish || !r.headline || !r.sector) return Outcome::malformed;
  if (!valid_iso8601(*r.publish)) return Outcome::malformed;
  auto update = non_empty(r.update);
  if (update && !valid_iso8601(*update)) return Outcome::malformed;

  auto synopsis = non_empty(r.synopsis);
  auto full_text = non_empty(r.full_text);
  if (drop_rule && !synopsis && !full_text) return Outcome::dropped;

  out = NewsArticle{};
  out.id = *r.id;
  out.publish_datetime = *r.publish;
  out.update_datetime = update;
  out.headline = *r.headline;
  out.synopsis = synopsis;
  out.full_text = full_text;
  out.sector_raw = *r.sector;
  out.sector = r.sector_norm ? parse_sector(*r.sector_norm) : sector_from_raw(out.sector_raw);
  out.segment = segment_of(out.sector);
  if (r.headline_synopsis) out.headline_synopsis = *r.headline_synopsis;
  return Outcome::ok;
}

std::optional<std::string> json_text(const ordered_json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw std::invalid_argument(std::string("non-text value for ") + key);
}

RawRecord record_from_json(const ordered_json& obj) {
  if (!obj.is_object()) throw std::invalid_argument("not an object");
  RawRecord r;
  r.id = json_text(obj, "id");
  r.publish = json_text(obj, "publish_datetime");
  r.update = json_text(obj, "update_datetime");
  r.headline = json_text(obj, "headline");
  r.synopsis = json_text(obj, "synopsis");
  r.sector = json_text(obj, "sector");
  r.full_text = json_text(obj, "full_text");
  r.sector_norm = json_text(obj, "sector_norm");
  r.segment = json_text(obj, "segment");
  r.headline_synopsis = json_text(obj, "headline_synopsis");
  return r;
}

void tally(IngestResult& result, Outcome o, NewsArticle&& a) {
  switch (o) {
    case Outcome::ok: result.articles.push_back(std::move(a)); break;
    case Outcome::dropped: ++result.dropped; break;
    case Outcome::malformed: ++result.malformed; break;
  }
}

IngestResult ingest_jsonl(std::string_view text) {
  IngestResult result;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    NewsArticle a;
    Outcome o = Outcome::malformed;
    try {
      o = to_article(record_from_json(ordered_json::parse(line)), a);
    } catch (const std::exception&) {
      o = Outcome::malformed;
    }
    tally(result, o, std::move(a));
  }
  return result;
}

IngestResult ingest_csv(std::string_view text) {
  IngestResult result;
  auto rows = csv::parse(text);
  if (rows.empty()) return result;
  csv::Header header(rows.front());
  auto col = [&](std::string_view name) { return header.find(name); };
  auto c_id = col("id"), c_pub = col("publish_datetime"), c_upd = col("update_datetime"),
       c_head = col("headline"), c_syn = col("synopsis"), c_sec = col("sector"),
       c_full = col("full_text");
  if (!c_id || !c_pub || !c_head || !c_sec)
    fail(ErrorKind::parse, "CSV header must name id, publish_datetime, headline and sector");

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    NewsArticle a;
    if (row.size() != header.size()) {
      tally(result, Outcome::malformed, std::move(a));
      continue;
    }
    auto get = [&](const std::optional<std::size_t>& c) -> std::optional<std::string> {
      if (!c) return std::nullopt;
      return row[*c];
    };
    RawRecord r;
    r.id = get(c_id);
    r.publish = get(c_pub);
    r.update = get(c_upd);
    r.headline = get(c_head);
    r.synopsis = get(c_syn);
    r.sector = get(c_sec);
    r.full_text = get(c_full);
    tally(result, to_article(r, a), std::move(a));
  }
  return result;
}

}  // namespace

std::string_view to_string(Sector s) {
  switch (s) {
    case Sector::stocks: return "stocks";
    case Sector::economy_banking: return "economy_banking";
    case Sector::politics_india: return "politics_india";
    case Sector::international: return "international";
    case Sector::other: return "other";
  }
  return "other";
}

std::string_view to_string(Segment s) {
  return s == Segment::financial ? "financial" : "non_financial";
}

std::string_view to_string(TextField f) {
  return f == TextField::headline_synopsis ? "headline_synopsis" : "full_text";
}

Sector parse_sector(std::string_view name) {
  for (Sector s : {Sector::stocks, Sector::economy_banking, Sector::politics_india,
                   Sector::international, Sector::other}) {
    if (name == to_string(s)) return s;
  }
  fail(ErrorKind::parse, "unknown sector '" + std::string(name) + "'");
}

Segment parse_segment(std::string_view name) {
  if (name == "financial") return Segment::financial;
  if (name == "non_financial" || name == "non-financial") return Segment::non_financial;
  fail(ErrorKind::parse, "unknown segment '" + std::string(name) + "'");
}

TextField parse_text_field(std::string_view name) {
  if (name == "headline_synopsis") return TextField::headline_synopsis;
  if (name == "full_text") return TextField::full_text;
  fail(ErrorKind::parse, "unknown text field '" + std::string(name) + "'");
}

Format parse_format(std::string_view name) {
  if (name == "jsonl") return Format::jsonl;
  if (name == "csv") return Format::csv;
  fail(ErrorKind::parse, "unknown corpus format '" + std::string(name) + "'");
}

Sector sector_from_raw(std::string_view raw) {
  static const std::map<std::string, Sector, std::less<>> names = {
      {"stocks", Sector::stocks},
      {"stock", Sector::stocks},
      {"economybanking", Sector::economy_banking},
      {"economyandbanking", Sector::economy_banking},
      {"politicsindia", Sector::politics_india},
      {"politicsandindia", Sector::politics_india},
      {"politicsnation", Sector::politics_india},
      {"politicsandnation", Sector::politics_india},
      {"international", Sector::international},
  };
  auto it = names.find(sector_key(raw));
  return it == names.end() ? Sector::other : it->second;
}

Segment segment_of(Sector s) {
  return (s == Sector::stocks || s == Sector::economy_banking) ? Segment::financial
                                                                : Segment::non_financial;
}

std::optional<std::string> NewsArticle::field(TextField f) const {
  if (f == TextField::full_text) return full_text;
  if (!headline_synopsis.empty()) return headline_synopsis;
  std::string joined = headline;
  if (synopsis) {
    if (!joined.empty()) joined.push_back(' ');
    joined += *synopsis;
  }
  if (trim(joined).empty()) return std::nullopt;
  return joined;
}

const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = [] {
    std::vector<std::string> out;
    for (auto& w : split(kStopwordData, '\n')) {
      auto t = trim(w);
      if (!t.empty()) out.emplace_back(t);
    }
    return out;
  }();
  return words;
}

const std::vector<std::string>& default_whitelist() {
  static const std::vector<std::string> words = {"up",   "down", "above", "below",
                                                 "over", "under", "off",  "no",
                                                 "not",  "nor",  "against"};
  return words;
}

PreprocessConfig PreprocessConfig::defaults() {
  PreprocessConfig cfg;
  cfg.stopwords.insert(default_stopwords().begin(), default_stopwords().end());
  cfg.whitelist.insert(default_whitelist().begin(), default_whitelist().end());
  return cfg;
}

void PreprocessConfig::validate() const {
  if (min_full_text_chars < 1) fail(ErrorKind::parameter, "min_full_text_chars must be >= 1");
  if (top_sector_count < 1) fail(ErrorKind::parameter, "top_sector_count must be >= 1");
  for (const auto& w : whitelist) {
    if (!stopwords.count(w))
      fail(ErrorKind::parameter, "whitelisted word '" + w + "' is not a stopword");
  }
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::set<std::string> out;
  for (auto& line : split(read_file(path), '\n')) {
    auto t = trim(line);
    if (!t.empty() && t.front() != '#') out.insert(to_lower_ascii(t));
  }
  return out;
}

IngestResult ingest_text(std::string_view text, Format format) {
  return format == Format::jsonl ? ingest_jsonl(text) : ingest_csv(text);
}

IngestResult ingest(const std::filesystem::path& path, Format format) {
  return ingest_text(read_file(path), format);
}

std::string clean_text(std::string_view text, const PreprocessConfig& cfg) {
  std::string out;
  out.reserve(text.size());
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    if (!cfg.stopwords.count(word) || cfg.whitelist.count(word)) {
      if (!out.empty()) out.push_back(' ');
      out += word;
    }
    word.clear();
  };
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') word.push_back(static_cast<char>(c - 'A' + 'a'));
    else if (c >= 'a' && c <= 'z') word.push_back(c);
    else flush();
  }
  flush();
  return out;
}

NewsArticle preprocess(const NewsArticle& article, const PreprocessConfig& cfg) {
  NewsArticle out = article;
  out.headline = clean_text(article.headline, cfg);
  out.synopsis.reset();
  if (article.synopsis) {
    auto s = clean_text(*article.synopsis, cfg);
    if (!s.empty()) out.synopsis = std::move(s);
  }
  out.full_text.reset();
  if (article.full_text) {
    auto f = clean_text(*article.full_text, cfg);
    if (f.size() >= cfg.min_full_text_chars) out.full_text = std::move(f);
  }
  out.headline_synopsis = out.headline;
  if (out.synopsis) {
    if (!out.headline_synopsis.empty()) out.headline_synopsis.push_back(' ');
    out.headline_synopsis += *out.synopsis;
  }
  out.segment = segment_of(out.sector);
  return out;
}

std::vector<NewsArticle> normalize_sectors(std::vector<NewsArticle> articles, std::size_t top_k) {
  if (top_k < 1) fail(ErrorKind::parameter, "top_k must be >= 1");
  std::map<std::string, std::size_t> freq;
  for (const auto& a : articles) {
    auto key = sector_key(a.sector_raw);
    if (!is_other_key(key)) ++freq[key];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::set<std::string> kept;
  for (std::size_t i = 0; i < ranked.size() && i < top_k; ++i) kept.insert(ranked[i].first);

  for (auto& a : articles) {
    a.sector = kept.count(sector_key(a.sector_raw)) ? sector_from_raw(a.sector_raw) : Sector::other;
    a.segment = segment_of(a.sector);
  }
  return articles;
}

std::string to_jsonl(const NewsArticle& a) {
  auto opt = [](const std::optional<std::string>& v) -> ordered_json {
    return v ? ordered_json(*v) : ordered_json(nullptr);
  };
  ordered_json j;
  j["id"] = a.id;
  j["publish_datetime"] = a.publish_datetime;
  j["update_datetime"] = opt(a.update_datetime);
  j["headline"] = a.headline;
  j["synopsis"] = opt(a.synopsis);
  j["sector"] = a.sector_raw;
  j["full_text"] = opt(a.full_text);
  j["sector_norm"] = std::string(to_string(a.sector));
  j["segment"] = std::string(to_string(a.segment));
  j["headline_synopsis"] = a.headline_synopsis;
  return j.dump();
}

void write_jsonl(std::ostream& out, const std::vector<NewsArticle>& articles) {
  for (const auto& a : articles) out << to_jsonl(a) << '\n';
}

std::vector<NewsArticle> read_jsonl(const std::filesystem::path& path) {
  std::vector<NewsArticle> out;
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    NewsArticle a;
    Outcome o = Outcome::malformed;
    try {
      o = to_article(record_from_json(ordered_json::parse(line)), a, false);
    } catch (const std::exception&) {
    }
    if (o != Outcome::ok)
      fail(ErrorKind::parse, path.string() + ":" + std::to_string(lineno) + ": unusable article record");
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace sentikit::corpus
