#include "sentikit/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sentikit/csv.hpp"
#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

namespace sentikit::lexicon {

Format parse_format(std::string_view name) {
  if (name == "vader_tsv") return Format::vader_tsv;
  if (name == "lm_csv") return Format::lm_csv;
  if (name == "valence_csv") return Format::valence_csv;
  fail(ErrorKind::parse, "unknown lexicon format '" + std::string(name) + "'");
}

Scale parse_scale(std::string_view name) {
  if (name == "plus_minus_4" || name == "4") return Scale::plus_minus_4;
  if (name == "plus_minus_1" || name == "1") return Scale::plus_minus_1;
  fail(ErrorKind::parse, "unknown lexicon scale '" + std::string(name) + "'");
}

std::string_view to_string(Scale s) {
  return s == Scale::plus_minus_4 ? "plus_minus_4" : "plus_minus_1";
}

void Lexicon::check_range(const std::string& word, double valence) const {
  bool ok = std::isfinite(valence);
  if (ok && scale_ == Scale::plus_minus_4) ok = valence >= -4.0 && valence <= 4.0;
  if (ok && scale_ == Scale::plus_minus_1) ok = valence == -1.0 || valence == 0.0 || valence == 1.0;
  if (!ok)
    fail(ErrorKind::validation, "valence " + format_double(valence) + " for '" + word +
                                    "' is outside the " + std::string(to_string(scale_)) + " scale");
}

void Lexicon::add(const std::string& word, double valence, CategorySet tags) {
  check_range(word, valence);
  if (!entries_.emplace(word, valence).second)
    fail(ErrorKind::validation, "duplicate word '" + word + "' in lexicon " + name_);
  if (tags) tags_[word] = tags;
}

void Lexicon::set(const std::string& word, double valence, CategorySet tags) {
  check_range(word, valence);
  entries_[word] = valence;
  if (tags) tags_[word] = tags;
  else tags_.erase(word);
}

const double* Lexicon::find(std::string_view word) const {
  auto it = entries_.find(std::string(word));
  return it == entries_.end() ? nullptr : &it->second;
}

CategorySet Lexicon::tags(std::string_view word) const {
  auto it = tags_.find(std::string(word));
  return it == tags_.end() ? 0 : it->second;
}

std::vector<std::pair<std::string, double>> Lexicon::sorted_entries() const {
  std::vector<std::pair<std::string, double>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void insert(Lexicon& lex, const std::string& word, double valence, CategorySet tags,
            DuplicatePolicy policy) {
  if (lex.contains(word)) {
    if (policy == DuplicatePolicy::reject)
      fail(ErrorKind::validation, "duplicate word '" + word + "' in lexicon " + lex.name());
    ++lex.overwritten_duplicates;
    lex.set(word, valence, tags);
    return;
  }
  lex.add(word, valence, tags);
}

Lexicon parse_vader(std::string_view text, std::string name, const LoadOptions& opts) {
  Lexicon lex(std::move(name), Scale::plus_minus_4);
  std::size_t lineno = 0;
  for (const auto& raw : split(text, '\n')) {
    ++lineno;
    auto line = trim(raw);
    if (line.empty()) continue;
    auto cols = split(line, '\t');
    if (cols.size() < 2)
      fail(ErrorKind::parse, lex.name() + ":" + std::to_string(lineno) + ": expected word<TAB>valence");
    insert(lex, cols[0], parse_double(cols[1]), 0, opts.duplicates);
  }
  return lex;
}

bool marked(const csv::Row& row, std::optional<std::size_t> col) {
  if (!col || *col >= row.size()) return false;
  auto v = trim(row[*col]);
  if (v.empty()) return false;
  return parse_double(v) != 0.0;
}

Lexicon parse_lm(std::string_view text, std::string name, const LoadOptions& opts) {
  Lexicon lex(std::move(name), Scale::plus_minus_1);
  auto rows = csv::parse(text);
  if (rows.empty()) return lex;
  csv::Header h(rows.front());
  auto c_word = h.require("word");
  const std::pair<const char*, Category> columns[] = {
      {"positive", Category::positive},         {"negative", Category::negative},
      {"litigious", Category::litigious},       {"uncertainty", Category::uncertain},
      {"strong_modal", Category::strong_modal}, {"weak_modal", Category::weak_modal},
  };
  std::vector<std::pair<std::optional<std::size_t>, Category>> cols;
  for (const auto& [col, cat] : columns) cols.emplace_back(h.find(col), cat);

  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    if (row.size() != h.size())
      fail(ErrorKind::parse, lex.name() + ": row " + std::to_string(i) + " has wrong column count");
    CategorySet tags = 0;
    for (const auto& [col, cat] : cols)
      if (marked(row, col)) tags |= static_cast<CategorySet>(cat);
    if (!tags) continue;  // master dictionaries list uncategorised words too
    bool pos = has(tags, Category::positive), neg = has(tags, Category::negative);
    std::string word = to_lower_ascii(trim(row[c_word]));
    if (pos && neg) fail(ErrorKind::validation, "word '" + word + "' is both positive and negative");
    insert(lex, word, pos ? 1.0 : neg ? -1.0 : 0.0, tags, opts.duplicates);
  }
  return lex;
}

Lexicon parse_valence_csv(std::string_view text, std::string name, const LoadOptions& opts) {
  Lexicon lex(std::move(name), opts.valence_csv_scale);
  auto rows = csv::parse(text);
  if (rows.empty()) return lex;
  csv::Header h(rows.front());
  auto c_word = h.require("word"), c_val = h.require("valence");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && trim(row[0]).empty()) continue;
    if (row.size() != h.size())
      fail(ErrorKind::parse, lex.name() + ": row " + std::to_string(i) + " has wrong column count");
    insert(lex, row[c_word], parse_double(row[c_val]), 0, opts.duplicates);
  }
  return lex;
}

}  // namespace

Lexicon parse_lexicon(std::string_view text, Format format, std::string name, LoadOptions opts) {
  switch (format) {
    case Format::vader_tsv: return parse_vader(text, std::move(name), opts);
    case Format::lm_csv: return parse_lm(text, std::move(name), opts);
    case Format::valence_csv: return parse_valence_csv(text, std::move(name), opts);
  }
  fail(ErrorKind::parameter, "unsupported lexicon format");
}

Lexicon load_lexicon(const std::filesystem::path& path, Format format, LoadOptions opts) {
  return parse_lexicon(read_file(path), format, path.filename().string(), opts);
}

std::string to_valence_csv(const Lexicon& lex) {
  std::ostringstream out;
  csv::write_row(out, {"word", "valence"});
  for (const auto& [word, v] : lex.sorted_entries()) csv::write_row(out, {word, format_double(v)});
  return out.str();
}

SentimentScore polarity_subjectivity(int pos, int neg, int n) {
  SentimentScore s;
  s.pos_count = pos;
  s.neg_count = neg;
  s.token_count = n;
  if (n <= 0) return s;
  if (pos + neg > 0) {
    s.polarity = static_cast<double>(pos - neg) / static_cast<double>(pos + neg);
    s.no_signal = false;
  }
  s.subjectivity = static_cast<double>(pos + neg) / static_cast<double>(n);
  return s;
}

SentimentScore score_lm(const std::vector<std::string>& tokens, const Lexicon& lex) {
  if (lex.scale() != Scale::plus_minus_1)
    fail(ErrorKind::parameter, "LM engine needs a plus_minus_1 lexicon, got " + lex.name());
  int pos = 0, neg = 0;
  for (const auto& t : tokens) {
    const double* v = lex.find(t);
    if (!v) continue;
    if (*v > 0) ++pos;
    else if (*v < 0) ++neg;
  }
  return polarity_subjectivity(pos, neg, static_cast<int>(tokens.size()));
}

std::vector<std::string> weighted_words(const Lexicon& lex) {
  std::vector<std::string> out;
  for (const auto& [w, v] : lex.sorted_entries())
    if (v != 0.0) out.push_back(w);
  return out;
}

Lexicon merge_lm_in_vader(const Lexicon& vader, const Lexicon& lm) {
  Lexicon out("lm-in-vader", Scale::plus_minus_4);
  for (const auto& [w, v] : vader.sorted_entries()) out.add(w, v);
  for (const auto& w : weighted_words(lm)) out.set(w, *lm.find(w), lm.tags(w));
  return out;
}

Lexicon merge_vader_in_lm(const Lexicon& lm, const Lexicon& vader) {
  Lexicon out("vader-in-lm", Scale::plus_minus_1);
  for (const auto& [w, v] : lm.sorted_entries()) out.add(w, v, lm.tags(w));
  for (const auto& [w, v] : vader.sorted_entries()) {
    if (lm.contains(w) || v == 0.0) continue;
    out.add(w, v > 0 ? 1.0 : -1.0);
  }
  return out;
}

LexiconDiff diff_lexicons(const Lexicon& left, const Lexicon& right) {
  LexiconDiff d;
  for (const auto& [w, lv] : left.sorted_entries()) {
    const double* rv = right.find(w);
    if (!rv) {
      ++d.exclusive_left;
      continue;
    }
    ++d.common_words;
    if (lv < 0 && *rv < 0) ++d.common_negative;
    else if (lv > 0 && *rv > 0) ++d.common_positive;
    else if (lv < 0 && *rv > 0) ++d.left_neg_right_pos;
    else if (lv > 0 && *rv < 0) ++d.left_pos_right_neg;
  }
  d.exclusive_right = right.size() - d.common_words;
  return d;
}

}  // namespace sentikit::lexicon
