#include "sentikit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "sentikit/csv.hpp"
#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

namespace sentikit::sampling {

int sample_size(double confidence, double margin_of_error) {
  if (!(confidence > 0.0 && confidence < 1.0))
    fail(ErrorKind::parameter, "confidence must lie in (0, 1)");
  if (!(margin_of_error > 0.0 && margin_of_error < 1.0))
    fail(ErrorKind::parameter, "margin_of_error must lie in (0, 1)");
  boost::math::normal standard;
  double z = boost::math::quantile(standard, 1.0 - (1.0 - confidence) / 2.0);
  double n = z * z * 0.25 / (margin_of_error * margin_of_error);
  return static_cast<int>(std::ceil(n));
}

int round_up_to(int value, int multiple) {
  if (multiple < 1) fail(ErrorKind::parameter, "rounding multiple must be >= 1");
  if (value <= 0) return 0;
  return ((value + multiple - 1) / multiple) * multiple;
}

std::map<std::string, std::size_t> allocate(const std::map<std::string, std::size_t>& strata,
                                            std::size_t n) {
  unsigned __int128 total = 0;
  for (const auto& [name, size] : strata) total += size;
  if (n > total)
    fail(ErrorKind::parameter, "sample size " + std::to_string(n) + " exceeds population");

  std::map<std::string, std::size_t> alloc;
  if (n == 0) {
    for (const auto& [name, size] : strata) alloc[name] = 0;
    return alloc;
  }
  struct Rem {
    unsigned __int128 remainder;
    std::string name;
  };
  std::vector<Rem> rems;
  std::size_t assigned = 0;
  for (const auto& [name, size] : strata) {
    unsigned __int128 scaled = static_cast<unsigned __int128>(n) * size;
    alloc[name] = static_cast<std::size_t>(scaled / total);
    assigned += alloc[name];
    rems.push_back({scaled % total, name});
  }
  // map iteration already yields name order, so a stable sort keeps it for ties
  std::stable_sort(rems.begin(), rems.end(),
                   [](const Rem& a, const Rem& b) { return a.remainder > b.remainder; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++alloc[rems[i].name];

  for (const auto& [name, size] : strata) {
    if (alloc[name] > size)
      fail(ErrorKind::allocation, "stratum '" + name + "' has " + std::to_string(size) +
                                      " articles but needs " + std::to_string(alloc[name]));
  }
  return alloc;
}

StratumKey by_sector() {
  return [](const corpus::NewsArticle& a) { return std::string(corpus::to_string(a.sector)); };
}

std::vector<corpus::NewsArticle> stratified_sample(const std::vector<corpus::NewsArticle>& articles,
                                                   const StratumKey& key, std::size_t n,
                                                   std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < articles.size(); ++i) members[key(articles[i])].push_back(i);
  std::map<std::string, std::size_t> sizes;
  for (const auto& [name, idx] : members) sizes[name] = idx.size();
  auto alloc = allocate(sizes, n);

  std::vector<corpus::NewsArticle> out;
  out.reserve(n);
  for (auto& [name, idx] : members) {
    std::size_t take = alloc[name];
    std::mt19937_64 rng(derive_seed(seed, "stratum/" + name));
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
      std::swap(idx[i], idx[pick(rng)]);
      out.push_back(articles[idx[i]]);
    }
  }
  return out;
}

std::map<std::string, std::string> assign_masked_ids(const std::vector<std::string>& ids,
                                                     std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, "masked-ids"));
  std::map<std::string, std::string> table;
  std::set<std::string> used;
  for (const auto& id : ids) {
    if (table.count(id)) fail(ErrorKind::parameter, "duplicate article id '" + id + "'");
    std::string masked;
    do {
      char buf[33];
      std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                    static_cast<unsigned long long>(rng()));
      masked = buf;
    } while (!used.insert(masked).second);
    table.emplace(id, std::move(masked));
  }
  return table;
}

void write_mask_table(const std::filesystem::path& path,
                      const std::map<std::string, std::string>& table) {
  std::ostringstream out;
  csv::write_row(out, {"article_id", "masked_id"});
  for (const auto& [id, masked] : table) csv::write_row(out, {id, masked});
  write_file(path, out.str());
}

std::map<std::string, std::string> read_mask_table(const std::filesystem::path& path) {
  auto rows = csv::parse(read_file(path));
  if (rows.empty()) fail(ErrorKind::parse, "empty mask table " + path.string());
  csv::Header h(rows.front());
  auto c_id = h.require("article_id"), c_mask = h.require("masked_id");
  std::map<std::string, std::string> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != h.size()) fail(ErrorKind::parse, "bad mask table row " + std::to_string(i));
    out[rows[i][c_id]] = rows[i][c_mask];
  }
  return out;
}

std::optional<int> parse_score(std::string_view input) {
  auto t = trim(input);
  if (t == "-2") return -2;
  if (t == "-1") return -1;
  if (t == "1" || t == "+1") return 1;
  if (t == "2" || t == "+2") return 2;
  return std::nullopt;
}

std::vector<AnnotationRecord> read_annotations(const std::filesystem::path& path) {
  std::vector<AnnotationRecord> out;
  auto rows = csv::parse(read_file(path));
  if (rows.empty()) return out;
  csv::Header h(rows.front());
  auto c_id = h.require("masked_id"), c_rater = h.require("rater_id"), c_score = h.require("score");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != h.size()) fail(ErrorKind::parse, path.string() + ": bad row " + std::to_string(i));
    auto score = parse_score(r[c_score]);
    if (!score)
      fail(ErrorKind::validation, path.string() + ": score '" + r[c_score] + "' outside {-2,-1,1,2}");
    out.push_back({r[c_id], r[c_rater], *score});
  }
  return out;
}

void append_annotation(const std::filesystem::path& path, const AnnotationRecord& record) {
  bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) fail(ErrorKind::io, "cannot append to " + path.string());
  if (fresh) csv::write_row(out, {"masked_id", "rater_id", "score"});
  csv::write_row(out, {record.article_id, record.rater_id, std::to_string(record.score)});
  out.flush();
  if (!out) fail(ErrorKind::io, "write failed for " + path.string());
}

SessionResult annotate(const std::vector<AnnotationItem>& items, const std::string& rater_id,
                       const std::filesystem::path& progress_file, bool show_full_text,
                       std::istream& in, std::ostream& out) {
  SessionResult result;
  std::set<std::string> done;
  if (std::filesystem::exists(progress_file)) {
    for (const auto& r : read_annotations(progress_file))
      if (r.rater_id == rater_id) done.insert(r.article_id);
  }

  std::size_t position = 0;
  for (const auto& item : items) {
    ++position;
    if (done.count(item.masked_id)) {
      ++result.skipped_done;
      continue;
    }
    out << "\n[" << position << "/" << items.size() << "] " << item.masked_id << "\n";
    out << "headline+synopsis: " << item.headline_synopsis << "\n";
    if (show_full_text && item.full_text) out << "full text: " << *item.full_text << "\n";

    std::optional<int> score;
    while (!score) {
      out << "score (-2, -1, +1, +2): " << std::flush;
      std::string line;
      if (!std::getline(in, line)) {
        out << "\nsession interrupted; progress saved to " << progress_file.string() << "\n";
        return result;
      }
      score = parse_score(line);
      if (!score) out << "invalid score '" << trim(line) << "': there is no neutral option\n";
    }
    AnnotationRecord rec{item.masked_id, rater_id, *score};
    append_annotation(progress_file, rec);
    result.recorded.push_back(std::move(rec));
  }
  result.completed = true;
  return result;
}

std::string_view to_string(Label l) { return l == Label::positive ? "positive" : "negative"; }

Label parse_label(std::string_view s) {
  if (s == "positive" || s == "1") return Label::positive;
  if (s == "negative" || s == "0") return Label::negative;
  fail(ErrorKind::parse, "unknown label '" + std::string(s) + "'");
}

Aggregation aggregate_labels(const std::vector<AnnotationRecord>& records, int raters_required) {
  if (raters_required < 1) fail(ErrorKind::parameter, "raters_required must be >= 1");
  std::map<std::string, std::map<std::string, int>> by_article;
  for (const auto& r : records) {
    if (!parse_score(std::to_string(r.score)))
      fail(ErrorKind::validation, "score " + std::to_string(r.score) + " for '" + r.article_id +
                                      "' is outside {-2,-1,1,2}");
    if (!by_article[r.article_id].emplace(r.rater_id, r.score).second)
      fail(ErrorKind::validation,
           "rater '" + r.rater_id + "' scored '" + r.article_id + "' more than once");
  }

  std::vector<std::string> incomplete;
  for (const auto& [id, scores] : by_article)
    if (static_cast<int>(scores.size()) != raters_required) incomplete.push_back(id);
  if (!incomplete.empty()) {
    if (incomplete.size() > 20) {
      std::size_t more = incomplete.size() - 20;
      incomplete.resize(20);
      incomplete.push_back("... " + std::to_string(more) + " more");
    }
    fail(ErrorKind::incomplete_annotation,
         "articles without exactly " + std::to_string(raters_required) +
             " ratings: " + join(incomplete, ", "));
  }

  Aggregation agg;
  for (const auto& [id, scores] : by_article) {
    LabeledArticle la;
    la.article_id = id;
    la.rater_count = static_cast<int>(scores.size());
    for (const auto& [rater, s] : scores) la.score_sum += s;
    if (la.score_sum > 0) la.label = Label::positive;
    else if (la.score_sum < 0) la.label = Label::negative;
    else la.conflicted = true;
    (la.conflicted ? agg.conflicted : agg.labeled).push_back(std::move(la));
  }
  return agg;
}

void write_labels(const std::filesystem::path& path, const Aggregation& agg) {
  std::vector<const LabeledArticle*> rows;
  for (const auto& a : agg.labeled) rows.push_back(&a);
  for (const auto& a : agg.conflicted) rows.push_back(&a);
  std::sort(rows.begin(), rows.end(),
            [](const auto* a, const auto* b) { return a->article_id < b->article_id; });
  std::ostringstream out;
  csv::write_row(out, {"article_id", "mean_score", "label", "conflicted"});
  for (const auto* a : rows) {
    csv::write_row(out, {a->article_id, format_double(a->mean_score()),
                         a->label ? std::string(to_string(*a->label)) : "none",
                         a->conflicted ? "true" : "false"});
  }
  write_file(path, out.str());
}

std::map<std::string, Label> read_labels(const std::filesystem::path& path) {
  auto rows = csv::parse(read_file(path));
  if (rows.empty()) fail(ErrorKind::parse, "empty label file " + path.string());
  csv::Header h(rows.front());
  auto c_id = h.require("article_id"), c_label = h.require("label");
  auto c_conf = h.find("conflicted");
  std::map<std::string, Label> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != h.size()) fail(ErrorKind::parse, path.string() + ": bad row " + std::to_string(i));
    if (c_conf && r[*c_conf] == "true") continue;
    out[r[c_id]] = parse_label(r[c_label]);
  }
  return out;
}

}  // namespace sentikit::sampling
