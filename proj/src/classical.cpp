#include "sentikit/classical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

namespace sentikit::classical {

namespace {

void check_inputs(const Matrix& X, const Labels& y) {
  if (X.empty()) fail(ErrorKind::fit, "no training rows");
  if (X.size() != y.size())
    fail(ErrorKind::fit, "X has " + std::to_string(X.size()) + " rows but y has " +
                             std::to_string(y.size()) + " labels");
  for (int label : y)
    if (label != 0 && label != 1) fail(ErrorKind::fit, "labels must be 0 or 1");
  for (const auto& r : X)
    if (r.dim != X.front().dim) fail(ErrorKind::fit, "rows have different dimensions");
}

void check_dim(int model_dim, const SparseVector& x) {
  if (x.dim != model_dim)
    fail(ErrorKind::predict, "feature dimension " + std::to_string(x.dim) +
                                 " does not match the model's " + std::to_string(model_dim));
}

double value_at(const SparseVector& x, int feature) {
  auto it = std::lower_bound(x.indices.begin(), x.indices.end(), feature);
  if (it == x.indices.end() || *it != feature) return 0.0;
  return x.values[static_cast<std::size_t>(it - x.indices.begin())];
}

}  // namespace

// --- naive bayes ---

std::array<double, 2> NaiveBayes::joint_log(const SparseVector& x) const {
  check_dim(dim, x);
  std::array<double, 2> out = log_prior;
  for (int c = 0; c < 2; ++c)
    for (std::size_t k = 0; k < x.indices.size(); ++k)
      out[c] += x.values[k] * log_likelihood[c][x.indices[k]];
  return out;
}

double NaiveBayes::posterior_positive(const SparseVector& x) const {
  auto j = joint_log(x);
  double m = std::max(j[0], j[1]);
  double e0 = std::exp(j[0] - m), e1 = std::exp(j[1] - m);
  return e1 / (e0 + e1);
}

int NaiveBayes::predict(const SparseVector& x) const {
  auto j = joint_log(x);
  return j[1] > j[0] ? 1 : 0;
}

NaiveBayes fit_nb(const Matrix& X, const Labels& y, double alpha) {
  check_inputs(X, y);
  if (!(alpha > 0)) fail(ErrorKind::parameter, "naive bayes alpha must be positive");
  NaiveBayes nb;
  nb.alpha = alpha;
  nb.dim = X.front().dim;
  std::array<std::int64_t, 2> n{};
  std::array<std::vector<double>, 2> sums{std::vector<double>(nb.dim, 0.0),
                                          std::vector<double>(nb.dim, 0.0)};
  for (std::size_t i = 0; i < X.size(); ++i) {
    int c = y[i];
    ++n[c];
    for (std::size_t k = 0; k < X[i].indices.size(); ++k) {
      if (X[i].values[k] < 0) fail(ErrorKind::fit, "naive bayes needs nonnegative features");
      sums[c][X[i].indices[k]] += X[i].values[k];
    }
  }
  for (int c = 0; c < 2; ++c)
    if (n[c] == 0) fail(ErrorKind::fit, "class " + std::to_string(c) + " is absent from y");

  const double total = static_cast<double>(X.size());
  for (int c = 0; c < 2; ++c) {
    nb.log_prior[c] = std::log(static_cast<double>(n[c]) / total);
    double mass = std::accumulate(sums[c].begin(), sums[c].end(), 0.0) + alpha * nb.dim;
    nb.log_likelihood[c].resize(nb.dim);
    for (int f = 0; f < nb.dim; ++f) nb.log_likelihood[c][f] = std::log((sums[c][f] + alpha) / mass);
  }
  return nb;
}

// --- trees ---

ColumnMatrix ColumnMatrix::from_rows(const Matrix& X, int dim) {
  ColumnMatrix m;
  m.rows = static_cast<int>(X.size());
  m.columns.resize(static_cast<std::size_t>(dim));
  for (std::size_t r = 0; r < X.size(); ++r)
    for (std::size_t k = 0; k < X[r].indices.size(); ++k)
      m.columns[X[r].indices[k]].emplace_back(static_cast<int>(r), X[r].values[k]);
  return m;
}

bool better_split(const SplitCandidate& a, const SplitCandidate& b) {
  if (!a.valid()) return false;
  if (!b.valid()) return true;
  __int128 lhs = a.numerator * b.denominator, rhs = b.numerator * a.denominator;
  if (lhs != rhs) return lhs > rhs;
  if (a.feature != b.feature) return a.feature < b.feature;
  return a.threshold < b.threshold;
}

namespace {

struct NodeTotals {
  std::array<std::int64_t, 2> w{};
  std::int64_t rows = 0;  // distinct rows present
};

NodeTotals node_totals(const Labels& y, const std::vector<std::int64_t>& weight) {
  NodeTotals t;
  for (std::size_t r = 0; r < weight.size(); ++r) {
    if (weight[r] <= 0) continue;
    t.w[y[r]] += weight[r];
    ++t.rows;
  }
  return t;
}

struct Bin {
  double value;
  std::array<std::int64_t, 2> w;
};

// Distinct feature values present in the node, with class weights.
std::vector<Bin> feature_bins(const ColumnMatrix& cols, const Labels& y,
                              const std::vector<std::int64_t>& weight, const NodeTotals& node, int f) {
  std::vector<Bin> bins;
  std::array<std::int64_t, 2> nonzero{};
  std::int64_t nonzero_rows = 0;
  for (const auto& [r, v] : cols.columns[f]) {
    if (weight[r] <= 0) continue;
    std::array<std::int64_t, 2> w{};
    w[y[r]] = weight[r];
    bins.push_back({v, w});
    nonzero[y[r]] += weight[r];
    ++nonzero_rows;
  }
  if (nonzero_rows < node.rows)
    bins.push_back({0.0, {node.w[0] - nonzero[0], node.w[1] - nonzero[1]}});
  std::sort(bins.begin(), bins.end(), [](const Bin& a, const Bin& b) { return a.value < b.value; });
  std::vector<Bin> merged;
  for (const auto& b : bins) {
    if (!merged.empty() && merged.back().value == b.value) {
      merged.back().w[0] += b.w[0];
      merged.back().w[1] += b.w[1];
    } else {
      merged.push_back(b);
    }
  }
  return merged;
}

SplitCandidate best_for_feature(const ColumnMatrix& cols, const Labels& y,
                                const std::vector<std::int64_t>& weight, const NodeTotals& node,
                                int f) {
  auto bins = feature_bins(cols, y, weight, node, f);
  SplitCandidate best;
  std::array<__int128, 2> left{};
  const std::array<__int128, 2> total{node.w[0], node.w[1]};
  for (std::size_t i = 0; i + 1 < bins.size(); ++i) {
    left[0] += bins[i].w[0];
    left[1] += bins[i].w[1];
    __int128 r0 = total[0] - left[0], r1 = total[1] - left[1];
    __int128 wl = left[0] + left[1], wr = r0 + r1;
    __int128 sl = left[0] * left[0] + left[1] * left[1], sr = r0 * r0 + r1 * r1;
    double a = bins[i].value, b = bins[i + 1].value;
    double mid = a / 2.0 + b / 2.0;
    if (mid >= b || mid < a) mid = a;
    SplitCandidate c{f, mid, sl * wr + sr * wl, wl * wr};
    if (better_split(c, best)) best = c;
  }
  return best;
}

bool is_constant(const ColumnMatrix& cols, const std::vector<std::int64_t>& weight,
                 const NodeTotals& node, int f) {
  std::int64_t nonzero_rows = 0;
  std::optional<double> lo, hi;
  for (const auto& [r, v] : cols.columns[f]) {
    if (weight[r] <= 0) continue;
    ++nonzero_rows;
    if (v == 0.0) continue;
    lo = lo ? std::min(*lo, v) : v;
    hi = hi ? std::max(*hi, v) : v;
  }
  if (!lo) return true;
  if (nonzero_rows < node.rows) return false;
  return *lo == *hi;
}

}  // namespace

SplitCandidate best_split(const ColumnMatrix& cols, const Labels& y,
                          const std::vector<std::int64_t>& weight, const std::vector<int>& features,
                          Exec exec) {
  NodeTotals node = node_totals(y, weight);
  SplitCandidate best;
  if (exec == Exec::serial) {
    for (int f : features) {
      auto c = best_for_feature(cols, y, weight, node, f);
      if (better_split(c, best)) best = c;
    }
    return best;
  }
  std::vector<SplitCandidate> per(features.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t k = 0; k < features.size(); ++k)
    per[k] = best_for_feature(cols, y, weight, node, features[k]);
  // better_split is a total order, so the reduction order does not matter.
  for (const auto& c : per)
    if (better_split(c, best)) best = c;
  return best;
}

int Tree::depth() const {
  std::function<int(int)> rec = [&](int i) -> int {
    const auto& n = nodes[i];
    if (n.is_leaf()) return 0;
    return 1 + std::max(rec(n.left), rec(n.right));
  };
  return nodes.empty() ? 0 : rec(0);
}

int Tree::predict(const SparseVector& x) const {
  check_dim(dim, x);
  int i = 0;
  while (!nodes[i].is_leaf()) i = value_at(x, nodes[i].feature) <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  return nodes[i].label;
}

namespace {

struct TreeBuilder {
  const ColumnMatrix& cols;
  const Matrix& X;
  const Labels& y;
  const TreeParams& params;
  std::mt19937_64 rng;
  Tree tree;

  std::vector<int> candidate_features(const std::vector<std::int64_t>& weight, const NodeTotals& node) {
    const int F = static_cast<int>(cols.columns.size());
    std::vector<int> all(F);
    std::iota(all.begin(), all.end(), 0);
    if (!params.features_per_split || *params.features_per_split >= F) return all;
    // Visit features in random order until enough non-constant ones are seen.
    std::vector<int> picked;
    int wanted = *params.features_per_split, seen = 0;
    for (int i = 0; i < F && seen < wanted; ++i) {
      std::uniform_int_distribution<int> pick(i, F - 1);
      std::swap(all[i], all[pick(rng)]);
      if (is_constant(cols, weight, node, all[i])) continue;
      picked.push_back(all[i]);
      ++seen;
    }
    std::sort(picked.begin(), picked.end());
    return picked;
  }

  int build(const std::vector<int>& rows, const std::vector<std::int64_t>& base_weight, int depth) {
    std::vector<std::int64_t> weight(cols.rows, 0);
    for (int r : rows) weight[r] = base_weight[r];
    NodeTotals node = node_totals(y, weight);

    int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes[id].counts = node.w;
    tree.nodes[id].label = node.w[1] > node.w[0] ? 1 : 0;

    bool pure = node.w[0] == 0 || node.w[1] == 0;
    if (depth >= params.max_depth || pure || node.w[0] + node.w[1] < params.min_samples_split)
      return id;

    auto split = best_split(cols, y, weight, candidate_features(weight, node), params.exec);
    if (!split.valid()) return id;

    std::vector<int> left, right;
    for (int r : rows)
      (value_at(X[r], split.feature) <= split.threshold ? left : right).push_back(r);

    int l = build(left, base_weight, depth + 1);
    int rr = build(right, base_weight, depth + 1);
    auto& n = tree.nodes[id];
    n.feature = split.feature;
    n.threshold = split.threshold;
    n.left = l;
    n.right = rr;
    return id;
  }
};

}  // namespace

Tree fit_tree(const Matrix& X, const Labels& y, const TreeParams& params, std::uint64_t seed,
              const std::vector<std::int64_t>* weights) {
  check_inputs(X, y);
  if (params.max_depth < 1) fail(ErrorKind::parameter, "max_depth must be at least 1");
  if (params.features_per_split && *params.features_per_split < 1)
    fail(ErrorKind::parameter, "features_per_split must be at least 1");
  const int dim = X.front().dim;
  auto cols = ColumnMatrix::from_rows(X, dim);

  std::vector<std::int64_t> base(X.size(), 1);
  if (weights) {
    if (weights->size() != X.size()) fail(ErrorKind::fit, "weights do not match rows");
    base = *weights;
  }
  std::vector<int> rows;
  for (std::size_t r = 0; r < X.size(); ++r)
    if (base[r] > 0) rows.push_back(static_cast<int>(r));
  if (rows.empty()) fail(ErrorKind::fit, "all sample weights are zero");

  TreeBuilder b{cols, X, y, params, std::mt19937_64(seed), {}};
  b.tree.dim = dim;
  b.build(rows, base, 0);
  return std::move(b.tree);
}

// --- ensembles ---

std::string_view to_string(EnsembleKind k) {
  return k == EnsembleKind::bagging ? "bagging" : "forest";
}

std::array<int, 2> Ensemble::votes(const SparseVector& x) const {
  check_dim(dim, x);
  std::array<int, 2> v{};
  for (const auto& t : trees) ++v[t.predict(x)];
  return v;
}

int Ensemble::predict(const SparseVector& x) const {
  auto v = votes(x);
  return v[1] > v[0] ? 1 : 0;
}

Ensemble fit_ensemble(const Matrix& X, const Labels& y, const EnsembleParams& params) {
  check_inputs(X, y);
  if (params.n_trees < 1) fail(ErrorKind::parameter, "n_trees must be at least 1");
  Ensemble e;
  e.kind = params.kind;
  e.seed = params.seed;
  e.dim = X.front().dim;
  if (params.kind == EnsembleKind::random_forest)
    e.features_per_split = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(e.dim)))));
  e.trees.resize(static_cast<std::size_t>(params.n_trees));

  TreeParams tp;
  tp.max_depth = params.max_depth;
  tp.min_samples_split = params.min_samples_split;
  if (e.features_per_split > 0) tp.features_per_split = e.features_per_split;
  tp.exec = Exec::serial;

  auto fit_one = [&](int t) {
    // Each tree owns a seed derived from its index, so the trees do not
    // depend on which worker trains them or in what order.
    std::mt19937_64 rng(derive_seed(params.seed, "tree/" + std::to_string(t)));
    std::vector<std::int64_t> w(X.size(), 1);
    if (params.bootstrap) {
      std::fill(w.begin(), w.end(), 0);
      std::uniform_int_distribution<std::size_t> pick(0, X.size() - 1);
      for (std::size_t k = 0; k < X.size(); ++k) ++w[pick(rng)];
    }
    e.trees[t] = fit_tree(X, y, tp, rng(), &w);
  };

  if (params.exec == Exec::serial) {
    for (int t = 0; t < params.n_trees; ++t) fit_one(t);
  } else {
    std::vector<std::string> errors(e.trees.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < params.n_trees; ++t) {
      try {
        fit_one(t);
      } catch (const std::exception& ex) {
        errors[t] = ex.what();
      }
    }
    for (const auto& msg : errors)
      if (!msg.empty()) fail(ErrorKind::fit, msg);
  }
  return e;
}

// --- shared ---

std::vector<int> predict(const Model& model, const Matrix& X) {
  std::vector<int> out(X.size());
  std::visit([&](const auto& m) {
    for (std::size_t i = 0; i < X.size(); ++i) out[i] = m.predict(X[i]);
  }, model);
  return out;
}

std::string model_kind(const Model& model) {
  if (std::holds_alternative<NaiveBayes>(model)) return "nb";
  if (std::holds_alternative<Tree>(model)) return "tree";
  return std::string(to_string(std::get<Ensemble>(model).kind));
}

namespace {

using nlohmann::ordered_json;

ordered_json node_json(const Tree& t, int i) {
  const auto& n = t.nodes[i];
  if (n.is_leaf()) return {{"label", n.label}, {"counts", n.counts}};
  return {{"feature", n.feature}, {"threshold", n.threshold}, {"counts", n.counts},
          {"left", node_json(t, n.left)}, {"right", node_json(t, n.right)}};
}

int node_from_json(Tree& t, const nlohmann::json& j) {
  int id = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  auto counts = j.at("counts").get<std::array<std::int64_t, 2>>();
  t.nodes[id].counts = counts;
  t.nodes[id].label = counts[1] > counts[0] ? 1 : 0;
  if (j.contains("label")) {
    t.nodes[id].label = j.at("label").get<int>();
    return id;
  }
  int f = j.at("feature").get<int>();
  if (f < 0 || f >= t.dim) fail(ErrorKind::parse, "tree node feature out of range");
  double th = j.at("threshold").get<double>();
  int l = node_from_json(t, j.at("left"));
  int r = node_from_json(t, j.at("right"));
  auto& n = t.nodes[id];
  n.feature = f;
  n.threshold = th;
  n.left = l;
  n.right = r;
  return id;
}

ordered_json tree_json(const Tree& t) { return node_json(t, 0); }

Tree tree_from_json(const nlohmann::json& root, int dim) {
  Tree t;
  t.dim = dim;
  node_from_json(t, root);
  return t;
}

}  // namespace

std::string to_json(const Model& model) {
  ordered_json j;
  j["model"] = model_kind(model);
  if (const auto* nb = std::get_if<NaiveBayes>(&model)) {
    j["dim"] = nb->dim;
    j["alpha"] = nb->alpha;
    j["log_prior"] = nb->log_prior;
    j["log_likelihood"] = {nb->log_likelihood[0], nb->log_likelihood[1]};
  } else if (const auto* t = std::get_if<Tree>(&model)) {
    j["dim"] = t->dim;
    j["root"] = tree_json(*t);
  } else {
    const auto& e = std::get<Ensemble>(model);
    j["dim"] = e.dim;
    j["seed"] = e.seed;
    j["features_per_split"] = e.features_per_split;
    j["trees"] = ordered_json::array();
    for (const auto& t : e.trees) j["trees"].push_back(tree_json(t));
  }
  return j.dump() + "\n";
}

Model model_from_json(std::string_view text) {
  try {
    auto j = nlohmann::json::parse(text);
    auto kind = j.at("model").get<std::string>();
    int dim = j.at("dim").get<int>();
    if (kind == "nb") {
      NaiveBayes nb;
      nb.dim = dim;
      nb.alpha = j.at("alpha").get<double>();
      nb.log_prior = j.at("log_prior").get<std::array<double, 2>>();
      for (int c = 0; c < 2; ++c) {
        nb.log_likelihood[c] = j.at("log_likelihood").at(c).get<std::vector<double>>();
        if (static_cast<int>(nb.log_likelihood[c].size()) != dim)
          fail(ErrorKind::parse, "naive bayes likelihood length does not match dim");
      }
      return nb;
    }
    if (kind == "tree") return tree_from_json(j.at("root"), dim);
    if (kind == "bagging" || kind == "forest") {
      Ensemble e;
      e.kind = kind == "bagging" ? EnsembleKind::bagging : EnsembleKind::random_forest;
      e.dim = dim;
      e.seed = j.at("seed").get<std::uint64_t>();
      e.features_per_split = j.at("features_per_split").get<int>();
      for (const auto& t : j.at("trees")) e.trees.push_back(tree_from_json(t, dim));
      return e;
    }
    fail(ErrorKind::parse, "unknown model kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("model json: ") + e.what());
  }
}

void save_model(const Model& model, const std::filesystem::path& path) {
  write_file(path, to_json(model));
}

Model load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

}  // namespace sentikit::classical
