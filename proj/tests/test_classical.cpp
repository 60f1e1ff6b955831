#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "sentikit/classical.hpp"
#include "sentikit/error.hpp"
#include "oracles.hpp"
#include "synthetic_tasks.hpp"

using namespace sentikit;
using namespace sentikit::classical;
using synthetic::sparse;

namespace {

double accuracy(const std::vector<int>& pred, const Labels& y) {
  int ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += pred[i] == y[i];
  return double(ok) / y.size();
}

}  // namespace

TEST_CASE("split search matches exhaustive enumeration") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    int dim = 1 + rng() % 6;
    int rows = 2 + rng() % (200 / dim - 1);
    Matrix X;
    Labels y;
    std::vector<std::int64_t> w;
    for (int i = 0; i < rows; ++i) {
      std::vector<double> x(dim);
      for (auto& v : x) v = (rng() % 3 == 0) ? 0.0 : double(rng() % 6) / 2.0;
      X.push_back(sparse(x));
      y.push_back(rng() % 2);
      w.push_back(t % 2 ? 1 : rng() % 3);
    }
    std::vector<int> feats(dim);
    for (int f = 0; f < dim; ++f) feats[f] = f;
    auto cols = ColumnMatrix::from_rows(X, dim);
    auto got = best_split(cols, y, w, feats, Exec::serial);
    auto want = oracle::exhaustive_split(X, y, w, dim);
    CHECK(got.feature == want.feature);
    if (want.feature >= 0) {
      CHECK(got.threshold == want.threshold);
      CHECK(got.numerator * want.den == want.num * got.denominator);
    }
    auto par = best_split(cols, y, w, feats, Exec::parallel);
    CHECK(par.feature == got.feature);
    CHECK(par.threshold == got.threshold);
  }
}

TEST_CASE("naive bayes matches the closed form") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const int dim = 5, n = 8;
    Matrix X;
    Labels y;
    for (int i = 0; i < n; ++i) {
      std::vector<double> x(dim);
      for (auto& v : x) v = rng() % 2 ? double(rng() % 5) / 4.0 : 0.0;
      X.push_back(sparse(x));
      y.push_back(i < 3 ? 1 : i < 6 ? 0 : int(rng() % 2));
    }
    double alpha = t % 2 ? 1.0 : 0.5;
    auto nb = fit_nb(X, y, alpha);
    for (int i = 0; i < n; ++i) {
      auto joint = oracle::nb_joint(X, y, alpha, X[i]);
      auto got = nb.joint_log(X[i]);
      CHECK(std::abs(got[0] - joint[0]) < 1e-9);
      CHECK(std::abs(got[1] - joint[1]) < 1e-9);
      double post = 1.0 / (1.0 + std::exp(joint[0] - joint[1]));
      CHECK(std::abs(nb.posterior_positive(X[i]) - post) < 1e-9);
    }
  }
}

TEST_CASE("naive bayes majority prior and separable feature") {
  Matrix X;
  Labels y;
  for (int i = 0; i < 10; ++i) {
    X.push_back(sparse({1.0, 1.0}));
    y.push_back(i == 0 ? 1 : 0);
  }
  auto nb = fit_nb(X, y);
  for (int p : predict(Model{nb}, X)) CHECK(p == 0);

  Matrix S = {sparse({1, 0}), sparse({2, 0}), sparse({0, 1}), sparse({0, 3})};
  Labels sy = {1, 1, 0, 0};
  CHECK(predict(Model{fit_nb(S, sy)}, S) == sy);
  CHECK_THROWS_AS(fit_nb(S, {1, 1, 1, 1}), Error);
  CHECK_THROWS_AS(fit_nb(S, {1, 0}), Error);
}

TEST_CASE("trees on pure and XOR data") {
  Matrix P = {sparse({1, 2}), sparse({3, 4})};
  auto pure = fit_tree(P, {1, 1}, {}, 0);
  CHECK(pure.nodes.size() == 1);
  CHECK(predict(Model{pure}, P) == Labels{1, 1});

  auto x = synthetic::xor_data(3);
  TreeParams two;
  two.max_depth = 2;
  auto t2 = fit_tree(x.X, x.y, two, 0);
  CHECK(accuracy(predict(Model{t2}, x.X), x.y) == 1.0);
  CHECK(t2.nodes[0].feature == 0);
  TreeParams one;
  one.max_depth = 1;
  CHECK(accuracy(predict(Model{fit_tree(x.X, x.y, one, 0)}, x.X), x.y) == 0.5);
  CHECK_THROWS_AS(fit_tree({}, {}, {}, 0), Error);
}

TEST_CASE("tree depth and thresholds") {
  auto d = synthetic::noisy_task(200, 0.15, 4);
  for (int depth = 1; depth <= 6; ++depth) {
    TreeParams p;
    p.max_depth = depth;
    auto t = fit_tree(d.X, d.y, p, 0);
    CHECK(t.depth() <= depth);
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) continue;
      // Midpoints of values on a 0.01 grid end in 5 at the third decimal.
      double scaled = n.threshold * 200.0;
      CHECK(std::abs(scaled - std::round(scaled)) < 1e-6);
    }
  }
}

TEST_CASE("degenerate ensemble equals a single tree") {
  auto d = synthetic::noisy_task(200, 0.15, 8);
  auto test = synthetic::noisy_task(300, 0.0, 9);
  EnsembleParams p;
  p.n_trees = 1;
  p.bootstrap = false;
  p.seed = 3;
  auto e = fit_ensemble(d.X, d.y, p);
  TreeParams tp;
  auto t = fit_tree(d.X, d.y, tp, 3);
  CHECK(predict(Model{e}, test.X) == predict(Model{t}, test.X));
}

TEST_CASE("vote rule") {
  Tree yes, no;
  yes.dim = no.dim = 1;
  yes.nodes.push_back(TreeNode{});
  yes.nodes[0].label = 1;
  no.nodes.push_back(TreeNode{});
  Ensemble e;
  e.dim = 1;
  for (int i = 0; i < 13; ++i) e.trees.push_back(yes);
  for (int i = 0; i < 12; ++i) e.trees.push_back(no);
  CHECK(e.predict(sparse({0.0})) == 1);
  e.trees.push_back(no);
  CHECK(e.predict(sparse({0.0})) == 0);
}

TEST_CASE("bagging is at least as accurate as a tree on noisy data") {
  double bag = 0, single = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto train = synthetic::noisy_task(200, 0.15, 100 + seed);
    auto test = synthetic::noisy_task(500, 0.15, 200 + seed);
    EnsembleParams p;
    p.seed = seed;
    bag += accuracy(predict(Model{fit_ensemble(train.X, train.y, p)}, test.X), test.y);
    single += accuracy(predict(Model{fit_tree(train.X, train.y, {}, seed)}, test.X), test.y);
  }
  MESSAGE("bagging " << bag / 10 << ", tree " << single / 10);
  CHECK(bag >= single);
}

TEST_CASE("random forest samples ceil(sqrt F) features") {
  auto d = synthetic::noisy_task(100, 0.1, 1);
  EnsembleParams p;
  p.kind = EnsembleKind::random_forest;
  p.n_trees = 5;
  auto rf = fit_ensemble(d.X, d.y, p);
  CHECK(rf.features_per_split == 4);
  CHECK(rf.trees.size() == 5);
  p.kind = EnsembleKind::bagging;
  CHECK(fit_ensemble(d.X, d.y, p).features_per_split == 0);
}

TEST_CASE("fits are reproducible and thread-independent") {
  auto d = synthetic::noisy_task(200, 0.15, 12);
  for (auto kind : {EnsembleKind::bagging, EnsembleKind::random_forest}) {
    EnsembleParams p;
    p.kind = kind;
    p.seed = 77;
    auto a = to_json(Model{fit_ensemble(d.X, d.y, p)});
    CHECK(a == to_json(Model{fit_ensemble(d.X, d.y, p)}));
    p.exec = Exec::serial;
    CHECK(a == to_json(Model{fit_ensemble(d.X, d.y, p)}));
    p.seed = 78;
    CHECK(a != to_json(Model{fit_ensemble(d.X, d.y, p)}));
  }
}

TEST_CASE("serialisation round trip") {
  auto d = synthetic::noisy_task(150, 0.15, 13);
  auto test = synthetic::noisy_task(100, 0.0, 14);
  EnsembleParams p;
  p.kind = EnsembleKind::random_forest;
  p.n_trees = 7;
  std::vector<Model> models = {Model{fit_nb(d.X, d.y, 0.5)}, Model{fit_tree(d.X, d.y, {}, 1)},
                               Model{fit_ensemble(d.X, d.y, p)}};
  auto path = std::filesystem::temp_directory_path() / "sentikit_model.json";
  for (const auto& m : models) {
    save_model(m, path);
    auto back = load_model(path);
    CHECK(model_kind(back) == model_kind(m));
    CHECK(to_json(back) == to_json(m));
    CHECK(predict(back, test.X) == predict(m, test.X));
  }
  std::filesystem::remove(path);
}

TEST_CASE("dimension mismatch is a predict error") {
  auto d = synthetic::noisy_task(50, 0.1, 2);
  auto nb = fit_nb(d.X, d.y);
  try {
    predict(Model{nb}, {sparse({1.0, 2.0})});
    FAIL("expected predict error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::predict);
  }
  CHECK_THROWS_AS(predict(Model{fit_tree(d.X, d.y, {}, 0)}, {sparse({1.0})}), Error);
}
