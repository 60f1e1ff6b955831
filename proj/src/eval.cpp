#include "sentikit/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "sentikit/csv.hpp"
#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

namespace sentikit::eval {

Split split_indices(const std::vector<int>& labels, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    fail(ErrorKind::parameter, "test fraction must lie strictly between 0 and 1");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  Split s;
  for (auto& [label, idx] : by_class) {
    if (idx.size() < 2)
      fail(ErrorKind::parameter, "class " + std::to_string(label) + " has fewer than 2 members");
    std::mt19937_64 rng(derive_seed(seed, "split/" + std::to_string(label)));
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(idx[i - 1], idx[pick(rng)]);
    }
    auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * test_fraction));
    n_test = std::clamp<std::size_t>(n_test, 1, idx.size() - 1);
    s.test.insert(s.test.end(), idx.begin(), idx.begin() + static_cast<long>(n_test));
    s.train.insert(s.train.end(), idx.begin() + static_cast<long>(n_test), idx.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

double accuracy(const std::vector<int>& predictions, const std::vector<int>& labels) {
  if (predictions.size() != labels.size())
    fail(ErrorKind::parameter, "predictions and labels differ in length");
  if (labels.empty()) fail(ErrorKind::parameter, "accuracy of an empty set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) hits += predictions[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double Confusion::accuracy() const {
  auto total = n();
  return total == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total);
}

Confusion confusion(const std::vector<int>& predictions, const std::vector<int>& labels) {
  if (predictions.size() != labels.size())
    fail(ErrorKind::parameter, "predictions and labels differ in length");
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int p = predictions[i], y = labels[i];
    if (p < 0) ++c.no_signal;
    else if (p == 1 && y == 1) ++c.tp;
    else if (p == 1) ++c.fp;
    else if (y == 0) ++c.tn;
    else ++c.fn;
  }
  return c;
}

int sign_label(const lexicon::SentimentScore& s) {
  double v = s.compound ? *s.compound : s.polarity;
  if (s.no_signal || v == 0.0) return -1;
  return v > 0 ? 1 : 0;
}

Confusion lexicon_accuracy(const std::vector<EvalItem>& items, const Scorer& scorer, Exec exec) {
  if (items.empty()) fail(ErrorKind::parameter, "no labeled items to evaluate");
  std::vector<int> pred(items.size()), labels(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) labels[i] = items[i].label;
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < items.size(); ++i) pred[i] = sign_label(scorer(items[i]));
  } else {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < items.size(); ++i) pred[i] = sign_label(scorer(items[i]));
  }
  return confusion(pred, labels);
}

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) fail(ErrorKind::parameter, "score vectors differ in length");
  if (a.size() < 2) fail(ErrorKind::parameter, "correlation needs at least 2 points");
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CorrelationMatrix correlate(const std::vector<std::pair<std::string, std::vector<double>>>& scores) {
  CorrelationMatrix m;
  const std::size_t k = scores.size();
  for (const auto& [name, v] : scores) {
    m.methods.push_back(name);
    if (v.size() != scores.front().second.size())
      fail(ErrorKind::parameter, "score vector for " + name + " has a different length");
  }
  m.values.assign(k, std::vector<std::optional<double>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      auto r = pearson(scores[i].second, scores[j].second);
      if (i == j && r) r = 1.0;
      m.values[i][j] = r;
      m.values[j][i] = r;
    }
  }
  return m;
}

std::string correlation_csv(const CorrelationMatrix& m) {
  std::ostringstream out;
  csv::Row header = {"method"};
  header.insert(header.end(), m.methods.begin(), m.methods.end());
  csv::write_row(out, header);
  for (std::size_t i = 0; i < m.methods.size(); ++i) {
    csv::Row row = {m.methods[i]};
    for (const auto& v : m.values[i]) row.push_back(v ? format_double(*v) : "undefined");
    csv::write_row(out, row);
  }
  return out.str();
}

namespace {

const csv::Row kReportHeader = {"method", "field", "segment", "split", "n", "accuracy",
                                "tp",     "fp",    "tn",      "fn",    "no_signal"};

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string render(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& body) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : body)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t c = 0; c < cells.size(); ++c) l += (c ? "  " : "") + pad(cells[c], width[c]);
    while (!l.empty() && l.back() == ' ') l.pop_back();
    out += l + "\n";
  };
  line(header);
  for (const auto& r : body) line(r);
  return out;
}

// Methods in first-appearance order, keeping those with a row of one of the
// given splits.
std::vector<std::string> methods_in_order(const std::vector<ReportRow>& rows,
                                          std::initializer_list<std::string_view> splits) {
  std::vector<std::string> out;
  for (const auto& r : rows) {
    if (std::find(splits.begin(), splits.end(), r.split) == splits.end()) continue;
    if (std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
  }
  return out;
}

std::string cell(const std::vector<ReportRow>& rows, const std::string& method, const std::string& field,
                 const std::string& segment, const std::string& split) {
  for (const auto& r : rows)
    if (r.method == method && r.field == field && r.segment == segment && r.split == split)
      return percent(r.accuracy());
  return "-";
}

}  // namespace

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  csv::write_row(out, kReportHeader);
  for (const auto& r : rows) {
    const auto& c = r.confusion;
    csv::write_row(out, {r.method, r.field, r.segment, r.split, std::to_string(c.n()),
                         format_double(r.accuracy()), std::to_string(c.tp), std::to_string(c.fp),
                         std::to_string(c.tn), std::to_string(c.fn), std::to_string(c.no_signal)});
  }
  return out.str();
}

std::vector<ReportRow> parse_report_csv(std::string_view text) {
  auto rows = csv::parse(text);
  if (rows.empty()) fail(ErrorKind::parse, "report csv has no header");
  csv::Header h(rows.front());
  std::vector<ReportRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != h.size()) fail(ErrorKind::parse, "report row " + std::to_string(i) + " has wrong width");
    ReportRow row;
    row.method = r[h.require("method")];
    row.field = r[h.require("field")];
    row.segment = r[h.require("segment")];
    row.split = r[h.require("split")];
    auto& c = row.confusion;
    c.tp = parse_int(r[h.require("tp")]);
    c.fp = parse_int(r[h.require("fp")]);
    c.tn = parse_int(r[h.require("tn")]);
    c.fn = parse_int(r[h.require("fn")]);
    c.no_signal = parse_int(r[h.require("no_signal")]);
    if (parse_int(r[h.require("n")]) != c.n())
      fail(ErrorKind::parse, "report row " + std::to_string(i) + ": n does not match the confusion counts");
    out.push_back(row);
  }
  return out;
}

std::string render_lexicon_table(const std::vector<ReportRow>& rows) {
  const std::pair<const char*, const char*> cols[] = {
      {"headline_synopsis", "financial"}, {"full_text", "financial"},
      {"headline_synopsis", "non_financial"}, {"full_text", "non_financial"},
      {"full_text", "all"}, {"headline_synopsis", "all"}};
  std::vector<std::vector<std::string>> body;
  for (const auto& m : methods_in_order(rows, {"all"})) {
    std::vector<std::string> line = {m};
    for (const auto& [field, segment] : cols) line.push_back(cell(rows, m, field, segment, "all"));
    body.push_back(line);
  }
  std::string legend =
      "A headline+synopsis, financial; B full text, financial; C headline+synopsis, non-financial;\n"
      "D full text, non-financial; E full text, all; F headline+synopsis, all. Accuracy in %.\n";
  return render({"Method", "A", "B", "C", "D", "E", "F"}, body) + legend;
}

std::string render_model_table(const std::vector<ReportRow>& rows) {
  std::vector<std::vector<std::string>> body;
  for (const auto& m : methods_in_order(rows, {"train", "test"})) {
    body.push_back({m, cell(rows, m, "full_text", "financial", "train"),
                    cell(rows, m, "full_text", "financial", "test"),
                    cell(rows, m, "headline_synopsis", "financial", "train"),
                    cell(rows, m, "headline_synopsis", "financial", "test")});
  }
  return render({"Model", "Train (Full text)", "Test (Full text)", "Train (HS)", "Test (HS)"}, body) +
         "Accuracy in %, financial segment.\n";
}

}  // namespace sentikit::eval
