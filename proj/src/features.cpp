#include "sentikit/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <omp.h>

#include "sentikit/csv.hpp"
#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

namespace sentikit::features {

double SparseVector::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

int TfidfModel::index(const std::string& term) const {
  auto it = index_.find(term);
  return it == index_.end() ? -1 : it->second;
}

void TfidfModel::rebuild_index() {
  index_.clear();
  for (std::size_t i = 0; i < terms.size(); ++i)
    if (!index_.emplace(terms[i], static_cast<int>(i)).second)
      fail(ErrorKind::validation, "duplicate tf-idf term '" + terms[i] + "'");
}

std::vector<std::int64_t> document_frequencies(const std::vector<std::vector<int>>& docs,
                                               std::size_t columns, Exec exec) {
  auto count_range = [&](std::size_t lo, std::size_t hi, std::vector<std::int64_t>& df) {
    std::vector<int> seen;
    for (std::size_t d = lo; d < hi; ++d) {
      seen = docs[d];
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      for (int c : seen) ++df[c];
    }
  };

  std::vector<std::int64_t> df(columns, 0);
  if (exec == Exec::serial) {
    count_range(0, docs.size(), df);
    return df;
  }
  std::vector<std::vector<std::int64_t>> partial(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
  {
    auto t = static_cast<std::size_t>(omp_get_thread_num());
    auto nt = static_cast<std::size_t>(omp_get_num_threads());
    partial[t].assign(columns, 0);
    count_range(docs.size() * t / nt, docs.size() * (t + 1) / nt, partial[t]);
  }
  for (const auto& p : partial)
    for (std::size_t c = 0; c < p.size(); ++c) df[c] += p[c];
  return df;
}

TfidfModel fit_tfidf(const std::vector<std::vector<std::string>>& docs, const Diagnostic& diag,
                     Exec exec) {
  if (docs.empty()) fail(ErrorKind::fit, "tf-idf needs at least one document");
  TfidfModel model;
  std::unordered_map<std::string, int> index;
  std::vector<std::vector<int>> ids(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& t : docs[d]) {
      auto [it, fresh] = index.emplace(t, static_cast<int>(model.terms.size()));
      if (fresh) model.terms.push_back(t);
      ids[d].push_back(it->second);
    }
  }
  if (model.terms.empty()) fail(ErrorKind::fit, "tf-idf documents are all empty");

  auto df = document_frequencies(ids, model.terms.size(), exec);
  model.doc_count = static_cast<std::int64_t>(docs.size());
  const double n = static_cast<double>(model.doc_count);
  model.idf.resize(df.size());
  for (std::size_t c = 0; c < df.size(); ++c)
    model.idf[c] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[c]))) + 1.0;
  model.rebuild_index();

  if (diag && model.terms.size() > docs.size())
    diag("tf-idf has " + std::to_string(model.terms.size()) + " columns for " +
         std::to_string(docs.size()) + " rows; expect sparse, high-dimensional features");
  return model;
}

SparseVector transform_tfidf(const TfidfModel& model, const std::vector<std::string>& doc) {
  std::map<int, double> counts;
  for (const auto& t : doc) {
    int c = model.index(t);
    if (c >= 0) counts[c] += 1.0;
  }
  SparseVector v;
  v.dim = static_cast<int>(model.size());
  for (const auto& [c, n] : counts) {
    v.indices.push_back(c);
    v.values.push_back(n * model.idf[c]);
  }
  double norm = v.norm();
  if (norm > 0)
    for (double& x : v.values) x /= norm;
  return v;
}

std::vector<SparseVector> transform_all(const TfidfModel& model,
                                        const std::vector<std::vector<std::string>>& docs) {
  std::vector<SparseVector> out(docs.size());
#pragma omp parallel for schedule(static)
  for (std::size_t d = 0; d < docs.size(); ++d) out[d] = transform_tfidf(model, docs[d]);
  return out;
}

void save_tfidf(const TfidfModel& model, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# doc_count=" << model.doc_count << "\n";
  csv::write_row(out, {"term", "index", "idf"});
  for (std::size_t i = 0; i < model.terms.size(); ++i)
    csv::write_row(out, {model.terms[i], std::to_string(i), format_double(model.idf[i])});
  write_file(path, out.str());
}

TfidfModel load_tfidf(const std::filesystem::path& path) {
  std::string text = read_file(path);
  const std::string marker = "# doc_count=";
  if (text.rfind(marker, 0) != 0) fail(ErrorKind::parse, path.string() + ": missing doc_count line");
  auto nl = text.find('\n');
  TfidfModel model;
  model.doc_count = parse_int(trim(std::string_view(text).substr(marker.size(), nl - marker.size())));
  auto rows = csv::parse(std::string_view(text).substr(nl == std::string::npos ? text.size() : nl + 1));
  if (rows.empty()) fail(ErrorKind::parse, path.string() + ": missing header");
  csv::Header h(rows.front());
  auto c_term = h.require("term"), c_index = h.require("index"), c_idf = h.require("idf");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != h.size()) fail(ErrorKind::parse, path.string() + ": bad row " + std::to_string(i));
    if (parse_int(r[c_index]) != static_cast<long long>(i - 1))
      fail(ErrorKind::parse, path.string() + ": indices must be consecutive from 0");
    model.terms.push_back(r[c_term]);
    model.idf.push_back(parse_double(r[c_idf]));
  }
  model.rebuild_index();
  return model;
}

}  // namespace sentikit::features
