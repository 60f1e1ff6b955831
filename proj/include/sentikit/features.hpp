#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sentikit/parallel.hpp"

namespace sentikit::features {

struct SparseVector {
  std::vector<int> indices;  // strictly increasing
  std::vector<double> values;
  int dim = 0;

  double norm() const;
  bool operator==(const SparseVector&) const = default;
};

// idf(t) = ln((1 + n) / (1 + df(t))) + 1, raw-count tf, L2-normalised rows.
class TfidfModel {
 public:
  std::vector<std::string> terms;  // column order = first occurrence
  std::vector<double> idf;
  std::int64_t doc_count = 0;

  std::size_t size() const { return terms.size(); }
  int index(const std::string& term) const;  // -1 when unseen
  void rebuild_index();

 private:
  std::unordered_map<std::string, int> index_;
};

using Diagnostic = std::function<void(const std::string&)>;

// Calls diag when there are more columns than rows.
TfidfModel fit_tfidf(const std::vector<std::vector<std::string>>& docs,
                     const Diagnostic& diag = {}, Exec exec = Exec::parallel);
SparseVector transform_tfidf(const TfidfModel& model, const std::vector<std::string>& doc);
std::vector<SparseVector> transform_all(const TfidfModel& model,
                                        const std::vector<std::vector<std::string>>& docs);

// Number of documents containing each column id.
std::vector<std::int64_t> document_frequencies(const std::vector<std::vector<int>>& docs,
                                               std::size_t columns, Exec exec);

// CSV: a `# doc_count=N` line, then `term,index,idf` rows.
void save_tfidf(const TfidfModel& model, const std::filesystem::path& path);
TfidfModel load_tfidf(const std::filesystem::path& path);

}  // namespace sentikit::features
