#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sentikit::corpus {

enum class Sector { stocks, economy_banking, politics_india, international, other };
enum class Segment { financial, non_financial };
enum class Format { jsonl, csv };
enum class TextField { headline_synopsis, full_text };

std::string_view to_string(Sector s);
std::string_view to_string(Segment s);
std::string_view to_string(TextField f);
Sector parse_sector(std::string_view name);
Segment parse_segment(std::string_view name);
TextField parse_text_field(std::string_view name);
Format parse_format(std::string_view name);

// Maps a raw sector tag onto the fixed enum by name alone ("Economy & Banking"
// -> economy_banking). Unknown tags map to other.
Sector sector_from_raw(std::string_view raw);
Segment segment_of(Sector s);

struct NewsArticle {
  std::string id;
  std::string publish_datetime;
  std::optional<std::string> update_datetime;
  std::string headline;
  std::optional<std::string> synopsis;
  std::optional<std::string> full_text;
  std::string sector_raw;
  Sector sector = Sector::other;
  Segment segment = Segment::non_financial;
  std::string headline_synopsis;

  // Text of the requested field; headline_synopsis falls back to
  // "headline synopsis" when the article has not been preprocessed.
  std::optional<std::string> field(TextField f) const;
  bool operator==(const NewsArticle&) const = default;
};

struct PreprocessConfig {
  std::set<std::string> stopwords;
  std::set<std::string> whitelist;
  std::size_t min_full_text_chars = 20;
  std::size_t top_sector_count = 4;

  // Bundled English stopword list with the market-direction whitelist.
  static PreprocessConfig defaults();
  // Throws Error(parameter) when the whitelist is not a subset of the
  // stopword list or min_full_text_chars is zero.
  void validate() const;
};

const std::vector<std::string>& default_stopwords();
const std::vector<std::string>& default_whitelist();
std::set<std::string> load_stopwords(const std::filesystem::path& path);

struct IngestResult {
  std::vector<NewsArticle> articles;
  std::size_t dropped = 0;    // both synopsis and full text missing
  std::size_t malformed = 0;  // unparseable or missing required keys
};

IngestResult ingest(const std::filesystem::path& path, Format format);
IngestResult ingest_text(std::string_view text, Format format);

// Lowercase, replace every byte outside [a-z] and whitespace by a space,
// collapse whitespace, drop non-whitelisted stopwords.
std::string clean_text(std::string_view text, const PreprocessConfig& cfg);

NewsArticle preprocess(const NewsArticle& article, const PreprocessConfig& cfg);

// Keeps the top_k most frequent raw sectors (by name frequency, ties broken
// by name) and clubs every other article into `other`. Raw tags that already
// mean "other" never occupy a top-k slot.
std::vector<NewsArticle> normalize_sectors(std::vector<NewsArticle> articles,
                                           std::size_t top_k);

// Cleaned-article JSONL: the input keys plus sector_norm, segment and
// headline_synopsis. Optional fields that are absent are written as null.
std::string to_jsonl(const NewsArticle& article);
void write_jsonl(std::ostream& out, const std::vector<NewsArticle>& articles);
// Reads either raw ingest JSONL or cleaned JSONL; malformed lines throw.
std::vector<NewsArticle> read_jsonl(const std::filesystem::path& path);

}  // namespace sentikit::corpus
