#include <doctest.h>

#include <cmath>
#include <random>

#include "sentikit/error.hpp"
#include "sentikit/neural.hpp"
#include "oracles.hpp"
#include "synthetic_tasks.hpp"

using namespace sentikit;
using namespace sentikit::neural;

namespace {

BiLstmModel tiny(std::uint64_t seed) {
  // Wider init than the default so every gate is exercised away from zero.
  InitOptions opts;
  opts.embedding_stddev = 0.5;
  opts.weight_range = 0.5;
  return init_model({20, 4, 3, 16}, seed, opts);
}

std::vector<int> random_ids(std::mt19937_64& rng, int len, int vocab) {
  std::uniform_int_distribution<int> pick(0, vocab - 1);
  std::vector<int> ids(len);
  for (auto& id : ids) id = pick(rng);
  return ids;
}

}  // namespace

TEST_CASE("zero parameters give one half") {
  BiLstmModel m = init_model({10, 3, 2, 8}, 1);
  for (auto& t : tensors(m.params))
    for (std::size_t j = 0; j < t.size(); ++j) t.data[j] = 0.0;
  CHECK(forward(m, {1, 2, 3}) == 0.5);
  CHECK(forward(m, {9}) == 0.5);
}

TEST_CASE("loss values") {
  CHECK(loss(0.5, 1) == doctest::Approx(std::log(2.0)));
  CHECK(loss(0.5, 0) == doctest::Approx(std::log(2.0)));
  CHECK(loss(0.9, 0) == doctest::Approx(-std::log(0.1)));
  CHECK(loss(1.0, 1) < 1e-11);
  CHECK(std::isfinite(loss(0.0, 1)));
}

TEST_CASE("single token forward is finite and in range") {
  auto m = init_model({10, 4, 3, 8}, 3);
  double p = forward(m, {4});
  CHECK(p > 0.0);
  CHECK(p < 1.0);
  CHECK(forward(m, {4}) == p);
  CHECK(forward(init_model({10, 4, 3, 8}, 3), {4}) == p);
}

TEST_CASE("invalid sequences") {
  auto m = init_model({10, 4, 3, 8}, 3);
  CHECK_THROWS_AS(forward(m, {}), Error);
  CHECK_THROWS_AS(forward(m, {10}), Error);
  CHECK_THROWS_AS(forward(m, {-1}), Error);
}

TEST_CASE("long sequences are truncated") {
  auto m = init_model({10, 4, 3, 4}, 3);
  CHECK(forward(m, {1, 2, 3, 4, 5, 6}) == forward(m, {1, 2, 3, 4}));
}

TEST_CASE("analytic gradients match finite differences") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto groups = oracle::gradient_check(seed);
    CHECK(groups.size() == 9);
    for (const auto& [name, err] : groups) {
      INFO("seed " << seed << " " << name << " max relative error " << err);
      CHECK(err < 1e-4);
    }
  }
}

TEST_CASE("untouched embedding rows get no gradient") {
  auto m = tiny(4);
  auto g = backward(m, {2, 5, 2}, 1);
  CHECK(g.embedding.size() == 2);
  CHECK(g.embedding.count(2) == 1);
  CHECK(g.embedding.count(5) == 1);
}

TEST_CASE("duplicated example doubles its gradient") {
  auto m = tiny(6);
  std::vector<Example> data = {{{1, 2, 3}, 1}};
  auto once = batch_gradient(m, data, {0}, Exec::serial);
  auto twice = batch_gradient(m, data, {0, 0}, Exec::serial);
  once.scale(2.0);
  CHECK(std::fabs(once.squared_norm() - twice.squared_norm()) < 1e-12 * twice.squared_norm());
  CHECK((once.dense.forward.W - twice.dense.forward.W).norm() < 1e-14);
  CHECK((once.embedding.at(1) - twice.embedding.at(1)).norm() < 1e-14);
}

TEST_CASE("parallel and serial batch gradients are identical") {
  auto m = tiny(8);
  std::mt19937_64 rng(8);
  std::vector<Example> data;
  std::vector<std::size_t> batch;
  for (int k = 0; k < 24; ++k) {
    data.push_back({random_ids(rng, 1 + k % 7, 20), k % 2});
    batch.push_back(static_cast<std::size_t>(k));
  }
  auto a = batch_gradient(m, data, batch, Exec::serial);
  auto b = batch_gradient(m, data, batch, Exec::parallel);
  CHECK(a.loss == b.loss);
  CHECK(a.dense.forward.W == b.dense.forward.W);
  CHECK(a.dense.backward.U == b.dense.backward.U);
  CHECK(a.dense.head_w == b.dense.head_w);
  REQUIRE(a.embedding.size() == b.embedding.size());
  for (const auto& [id, v] : a.embedding) CHECK(v == b.embedding.at(id));
}

TEST_CASE("reversal symmetry") {
  auto m = tiny(9);
  std::vector<int> ids = {3, 7, 1, 12, 5};
  std::vector<int> rev(ids.rbegin(), ids.rend());
  BiLstmModel swapped = m;
  std::swap(swapped.params.forward, swapped.params.backward);
  const int h = m.dims.hidden;
  swapped.params.head_w << m.params.head_w.segment(h, h), m.params.head_w.segment(0, h);

  Vec a = neural::features(m, ids);
  Vec b = neural::features(swapped, rev);
  CHECK((a.segment(0, h) - b.segment(h, h)).norm() == 0.0);
  CHECK((a.segment(h, h) - b.segment(0, h)).norm() == 0.0);
  CHECK(forward(m, ids) == doctest::Approx(forward(swapped, rev)).epsilon(1e-15));
}

std::vector<Example> separable(int n, std::uint64_t seed) {
  return synthetic::separable_sequences(static_cast<std::size_t>(n), 12, seed);
}

TEST_CASE("learning rate zero leaves parameters unchanged") {
  auto m = init_model({12, 8, 8, 16}, 2);
  auto before = m.params;
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 2;
  train(m, separable(40, 1), cfg);
  CHECK(m.params.embedding == before.embedding);
  CHECK(m.params.forward.W == before.forward.W);
  CHECK(m.params.head_w == before.head_w);
}

TEST_CASE("training is deterministic") {
  auto data = separable(60, 5);
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.seed = 11;
  auto a = init_model({12, 8, 8, 16}, 11);
  auto b = init_model({12, 8, 8, 16}, 11);
  train(a, data, cfg);
  cfg.exec = Exec::serial;
  train(b, data, cfg);
  CHECK(a.params.forward.U == b.params.forward.U);
  CHECK(a.params.embedding == b.params.embedding);
}

TEST_CASE("first epoch lowers the loss on the separable task") {
  auto data = separable(200, 3);
  for (double lr : {1e-3, 1e-2, 1e-1}) {
    auto m = init_model({12, 16, 16, 32}, 7);
    std::vector<std::size_t> all(data.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    double before = batch_gradient(m, data, all, Exec::parallel).loss;
    TrainConfig cfg;
    cfg.learning_rate = lr;
    cfg.epochs = 1;
    cfg.validation_fraction = 0.0;
    train(m, data, cfg);
    double after = batch_gradient(m, data, all, Exec::parallel).loss;
    INFO("lr " << lr);
    CHECK(after < before);
  }
}

TEST_CASE("checkpoint round trip") {
  auto m = init_model({15, 4, 3, 9}, 21);
  m.vocab_hash = 0xdeadbeefcafef00dULL;
  auto path = std::filesystem::temp_directory_path() / "sentikit_ckpt_test.json";
  save_checkpoint(m, path);
  auto back = load_checkpoint(path);
  CHECK(back.vocab_hash == m.vocab_hash);
  CHECK(back.dims.max_seq_len == 9);
  CHECK(back.params.embedding == m.params.embedding);
  CHECK(back.params.backward.b == m.params.backward.b);
  CHECK(back.params.head_b == m.params.head_b);
  std::filesystem::remove(path);
}

TEST_CASE("probability threshold") {
  CHECK(classify(0.73).label == 1);
  CHECK(classify(0.5).label == 1);
  CHECK(classify(0.49).label == 0);
}
