#include "sentikit/neural.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "sentikit/error.hpp"
#include "sentikit/util.hpp"

namespace sentikit::neural {

std::vector<Tensor> tensors(Params& p) {
  auto t = [](std::string name, auto& m) {
    return Tensor{std::move(name), m.data(), static_cast<int>(m.rows()), static_cast<int>(m.cols())};
  };
  return {t("embedding", p.embedding), t("forward.W", p.forward.W), t("forward.U", p.forward.U),
          t("forward.b", p.forward.b), t("backward.W", p.backward.W), t("backward.U", p.backward.U),
          t("backward.b", p.backward.b), t("head.w", p.head_w), t("head.b", p.head_b)};
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

LstmCell zero_cell(int d, int h) {
  return {Mat::Zero(4 * h, d), Mat::Zero(4 * h, h), Vec::Zero(4 * h)};
}

void check_ids(const BiLstmModel& model, const std::vector<int>& ids) {
  if (ids.empty()) fail(ErrorKind::parameter, "empty token sequence");
  for (int id : ids)
    if (id < 0 || id >= model.dims.vocab_size)
      fail(ErrorKind::parameter, "token id " + std::to_string(id) + " outside the vocabulary");
}

std::size_t used_length(const BiLstmModel& model, const std::vector<int>& ids) {
  return std::min(ids.size(), static_cast<std::size_t>(model.dims.max_seq_len));
}

// Per-step activations of one direction, kept for the backward pass.
struct Trace {
  std::vector<int> ids;  // in processing order
  std::vector<Vec> i, f, g, o, c, h;
};

Trace run(const LstmCell& cell, const Mat& emb, std::vector<int> ids, int hidden) {
  Trace tr;
  tr.ids = std::move(ids);
  Vec h = Vec::Zero(hidden), c = Vec::Zero(hidden);
  for (int id : tr.ids) {
    Vec z = cell.W * emb.row(id).transpose() + cell.U * h + cell.b;
    Vec i = z.segment(0, hidden).unaryExpr(&sigmoid);
    Vec f = z.segment(hidden, hidden).unaryExpr(&sigmoid);
    Vec g = z.segment(2 * hidden, hidden).array().tanh();
    Vec o = z.segment(3 * hidden, hidden).unaryExpr(&sigmoid);
    c = f.cwiseProduct(c) + i.cwiseProduct(g);
    h = o.cwiseProduct(c.array().tanh().matrix());
    tr.i.push_back(i);
    tr.f.push_back(f);
    tr.g.push_back(g);
    tr.o.push_back(o);
    tr.c.push_back(c);
    tr.h.push_back(h);
  }
  return tr;
}

void run_backward(const LstmCell& cell, const Mat& emb, const Trace& tr, const Vec& dh_final,
                  LstmCell& grad, std::map<int, Vec>& demb) {
  const int hidden = static_cast<int>(dh_final.size());
  Vec dh = dh_final, dc = Vec::Zero(hidden);
  Vec dz(4 * hidden);
  for (int t = static_cast<int>(tr.ids.size()) - 1; t >= 0; --t) {
    const Vec& i = tr.i[t];
    const Vec& f = tr.f[t];
    const Vec& g = tr.g[t];
    const Vec& o = tr.o[t];
    Vec c_prev = t > 0 ? tr.c[t - 1] : Vec::Zero(hidden);
    Vec h_prev = t > 0 ? tr.h[t - 1] : Vec::Zero(hidden);
    Vec tc = tr.c[t].array().tanh();

    Vec d_o = dh.cwiseProduct(tc);
    dc += dh.cwiseProduct(o).cwiseProduct((1.0 - tc.array().square()).matrix());
    Vec d_i = dc.cwiseProduct(g);
    Vec d_g = dc.cwiseProduct(i);
    Vec d_f = dc.cwiseProduct(c_prev);

    dz.segment(0, hidden) = d_i.array() * i.array() * (1.0 - i.array());
    dz.segment(hidden, hidden) = d_f.array() * f.array() * (1.0 - f.array());
    dz.segment(2 * hidden, hidden) = d_g.array() * (1.0 - g.array().square());
    dz.segment(3 * hidden, hidden) = d_o.array() * o.array() * (1.0 - o.array());

    int id = tr.ids[t];
    grad.W.noalias() += dz * emb.row(id);
    grad.U.noalias() += dz * h_prev.transpose();
    grad.b += dz;

    Vec dx = cell.W.transpose() * dz;
    auto [it, fresh] = demb.try_emplace(id, dx);
    if (!fresh) it->second += dx;

    dh = cell.U.transpose() * dz;
    dc = dc.cwiseProduct(f);
  }
}

struct Pass {
  Trace fwd, bwd;
  Vec concat;
  double p = 0.5;
};

Pass full_forward(const BiLstmModel& model, const std::vector<int>& ids) {
  check_ids(model, ids);
  const int h = model.dims.hidden;
  const auto& P = model.params;
  std::vector<int> seq(ids.begin(), ids.begin() + static_cast<long>(used_length(model, ids)));
  std::vector<int> rev(seq.rbegin(), seq.rend());
  Pass pass;
  pass.fwd = run(P.forward, P.embedding, std::move(seq), h);
  pass.bwd = run(P.backward, P.embedding, std::move(rev), h);
  pass.concat.resize(2 * h);
  pass.concat << pass.fwd.h.back(), pass.bwd.h.back();
  pass.p = sigmoid(P.head_w.dot(pass.concat) + P.head_b(0));
  return pass;
}

}  // namespace

BiLstmModel init_model(const Dims& dims, std::uint64_t seed, const InitOptions& opts) {
  if (dims.vocab_size < 1 || dims.d_embed < 1 || dims.hidden < 1 || dims.max_seq_len < 1)
    fail(ErrorKind::parameter, "model dimensions must be positive");
  BiLstmModel m;
  m.dims = dims;
  const int d = dims.d_embed, h = dims.hidden;
  std::mt19937_64 rng(derive_seed(seed, "bilstm-init"));
  std::normal_distribution<double> normal(0.0, opts.embedding_stddev);
  std::uniform_real_distribution<double> uni(-opts.weight_range, opts.weight_range);

  auto& P = m.params;
  P.embedding = Mat(dims.vocab_size, d);
  for (Eigen::Index k = 0; k < P.embedding.size(); ++k) P.embedding.data()[k] = normal(rng);
  for (LstmCell* cell : {&P.forward, &P.backward}) {
    *cell = zero_cell(d, h);
    for (Eigen::Index k = 0; k < cell->W.size(); ++k) cell->W.data()[k] = uni(rng);
    for (Eigen::Index k = 0; k < cell->U.size(); ++k) cell->U.data()[k] = uni(rng);
    cell->b.segment(h, h).setConstant(opts.forget_bias);
  }
  P.head_w = Vec(2 * h);
  for (Eigen::Index k = 0; k < P.head_w.size(); ++k) P.head_w(k) = uni(rng);
  P.head_b = Vec::Zero(1);
  return m;
}

Params zeros_like(const Params& p, bool with_embedding) {
  Params z;
  const int d = static_cast<int>(p.forward.W.cols()), h = static_cast<int>(p.forward.U.cols());
  z.embedding = with_embedding ? Mat::Zero(p.embedding.rows(), p.embedding.cols()) : Mat(0, 0);
  z.forward = zero_cell(d, h);
  z.backward = zero_cell(d, h);
  z.head_w = Vec::Zero(2 * h);
  z.head_b = Vec::Zero(1);
  return z;
}

double forward(const BiLstmModel& model, const std::vector<int>& ids) {
  return full_forward(model, ids).p;
}

Vec features(const BiLstmModel& model, const std::vector<int>& ids) {
  return full_forward(model, ids).concat;
}

double loss(double p, int y) {
  double q = std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor);
  return y == 1 ? -std::log(q) : -std::log(1.0 - q);
}

Gradients zero_gradients(const BiLstmModel& model) {
  Gradients g;
  g.dense = zeros_like(model.params, false);
  return g;
}

Gradients& Gradients::operator+=(const Gradients& o) {
  for (const auto& [id, v] : o.embedding) {
    auto [it, fresh] = embedding.try_emplace(id, v);
    if (!fresh) it->second += v;
  }
  for (auto [a, b] : {std::pair{&dense.forward, &o.dense.forward}, std::pair{&dense.backward, &o.dense.backward}}) {
    a->W += b->W;
    a->U += b->U;
    a->b += b->b;
  }
  dense.head_w += o.dense.head_w;
  dense.head_b += o.dense.head_b;
  loss += o.loss;
  correct += o.correct;
  return *this;
}

void Gradients::scale(double s) {
  for (auto& [id, v] : embedding) v *= s;
  for (auto* c : {&dense.forward, &dense.backward}) {
    c->W *= s;
    c->U *= s;
    c->b *= s;
  }
  dense.head_w *= s;
  dense.head_b *= s;
}

double Gradients::squared_norm() const {
  double s = 0.0;
  for (const auto& [id, v] : embedding) s += v.squaredNorm();
  for (const auto* c : {&dense.forward, &dense.backward})
    s += c->W.squaredNorm() + c->U.squaredNorm() + c->b.squaredNorm();
  return s + dense.head_w.squaredNorm() + dense.head_b.squaredNorm();
}

Gradients backward(const BiLstmModel& model, const std::vector<int>& ids, int y) {
  if (y != 0 && y != 1) fail(ErrorKind::parameter, "label must be 0 or 1");
  Pass pass = full_forward(model, ids);
  const int h = model.dims.hidden;
  const auto& P = model.params;

  Gradients g = zero_gradients(model);
  g.loss = loss(pass.p, y);
  g.correct = (pass.p >= 0.5 ? 1 : 0) == y ? 1 : 0;

  double dz = pass.p - y;
  g.dense.head_w = dz * pass.concat;
  g.dense.head_b(0) = dz;
  Vec dh_f = dz * P.head_w.segment(0, h);
  Vec dh_b = dz * P.head_w.segment(h, h);
  run_backward(P.forward, P.embedding, pass.fwd, dh_f, g.dense.forward, g.embedding);
  run_backward(P.backward, P.embedding, pass.bwd, dh_b, g.dense.backward, g.embedding);
  return g;
}

Gradients batch_gradient(const BiLstmModel& model, const std::vector<Example>& data,
                         const std::vector<std::size_t>& batch, Exec exec) {
  Gradients total = zero_gradients(model);
  if (exec == Exec::serial) {
    for (auto k : batch) total += backward(model, data[k].first, data[k].second);
    return total;
  }
  std::vector<Gradients> per(batch.size());
  std::vector<std::string> errors(batch.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t j = 0; j < batch.size(); ++j) {
    try {
      per[j] = backward(model, data[batch[j]].first, data[batch[j]].second);
    } catch (const std::exception& e) {
      errors[j] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) fail(ErrorKind::parameter, e);
  for (const auto& g : per) total += g;
  return total;
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    fail(ErrorKind::parameter, "learning rate must be finite and nonnegative");
  if (epochs < 1) fail(ErrorKind::parameter, "epochs must be at least 1");
  if (batch_size < 1) fail(ErrorKind::parameter, "batch size must be at least 1");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    fail(ErrorKind::parameter, "validation fraction must lie in [0, 1)");
  if (optimizer == Optimizer::adam && !(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1 && epsilon > 0))
    fail(ErrorKind::parameter, "adam needs 0 <= beta < 1 and epsilon > 0");
}

namespace {

class Optim {
 public:
  Optim(const TrainConfig& cfg, const Params& p) : cfg_(cfg) {
    if (cfg.optimizer == Optimizer::adam) {
      m_ = zeros_like(p);
      v_ = zeros_like(p);
    }
  }

  void step(Params& p, const Gradients& g) {
    Params dense = g.dense;
    dense.embedding = Mat::Zero(p.embedding.rows(), p.embedding.cols());
    for (const auto& [id, row] : g.embedding) dense.embedding.row(id) = row.transpose();

    auto params = tensors(p);
    auto grads = tensors(dense);
    const double lr = cfg_.learning_rate;
    if (cfg_.optimizer == Optimizer::sgd) {
      for (std::size_t k = 0; k < params.size(); ++k)
        for (std::size_t j = 0; j < params[k].size(); ++j) params[k].data[j] -= lr * grads[k].data[j];
      return;
    }
    ++t_;
    auto ms = tensors(m_), vs = tensors(v_);
    const double b1 = cfg_.beta1, b2 = cfg_.beta2;
    const double c1 = 1.0 - std::pow(b1, t_), c2 = 1.0 - std::pow(b2, t_);
    for (std::size_t k = 0; k < params.size(); ++k) {
      for (std::size_t j = 0; j < params[k].size(); ++j) {
        double gj = grads[k].data[j];
        double& m = ms[k].data[j];
        double& v = vs[k].data[j];
        m = b1 * m + (1.0 - b1) * gj;
        v = b2 * v + (1.0 - b2) * gj * gj;
        params[k].data[j] -= lr * (m / c1) / (std::sqrt(v / c2) + cfg_.epsilon);
      }
    }
  }

 private:
  const TrainConfig& cfg_;
  Params m_, v_;
  long t_ = 0;
};

template <class Rng>
void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(v[i - 1], v[pick(rng)]);
  }
}

std::pair<double, double> evaluate(const BiLstmModel& model, const std::vector<Example>& data,
                                   const std::vector<std::size_t>& idx, Exec exec) {
  std::vector<double> losses(idx.size());
  std::vector<int> hits(idx.size());
  auto one = [&](std::size_t j) {
    double p = forward(model, data[idx[j]].first);
    losses[j] = loss(p, data[idx[j]].second);
    hits[j] = (p >= 0.5 ? 1 : 0) == data[idx[j]].second;
  };
  if (exec == Exec::serial) {
    for (std::size_t j = 0; j < idx.size(); ++j) one(j);
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t j = 0; j < idx.size(); ++j) one(j);
  }
  double l = 0.0;
  int h = 0;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    l += losses[j];
    h += hits[j];
  }
  double n = static_cast<double>(idx.size());
  return {l / n, h / n};
}

}  // namespace

TrainResult train(BiLstmModel& model, const std::vector<Example>& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.empty()) fail(ErrorKind::parameter, "training set is empty");
  TrainResult result;
  for (const auto& [ids, y] : data) {
    check_ids(model, ids);
    if (y != 0 && y != 1) fail(ErrorKind::parameter, "labels must be 0 or 1");
    if (ids.size() > static_cast<std::size_t>(model.dims.max_seq_len)) ++result.truncated_sequences;
  }

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 split_rng(derive_seed(cfg.seed, "bilstm-split"));
  shuffle(order, split_rng);
  auto n_val = static_cast<std::size_t>(std::floor(cfg.validation_fraction * static_cast<double>(data.size())));
  std::vector<std::size_t> val(order.begin(), order.begin() + static_cast<long>(n_val));
  std::vector<std::size_t> tr(order.begin() + static_cast<long>(n_val), order.end());
  if (tr.empty()) fail(ErrorKind::parameter, "validation fraction leaves no training examples");
  result.train_size = tr.size();
  result.validation_size = val.size();

  Optim opt(cfg, model.params);
  std::mt19937_64 rng(derive_seed(cfg.seed, "bilstm-shuffle"));
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle(tr, rng);
    double loss_sum = 0.0;
    int correct = 0;
    for (std::size_t start = 0; start < tr.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      std::vector<std::size_t> batch(tr.begin() + static_cast<long>(start),
                                     tr.begin() + static_cast<long>(std::min(tr.size(), start + cfg.batch_size)));
      Gradients g = batch_gradient(model, data, batch, cfg.exec);
      if (!std::isfinite(g.loss))
        fail(ErrorKind::divergence, "loss became " + format_double(g.loss) + " in epoch " +
                                        std::to_string(epoch) + " at example " + std::to_string(start));
      loss_sum += g.loss;
      correct += g.correct;
      g.scale(1.0 / static_cast<double>(batch.size()));
      if (cfg.gradient_clip_norm > 0) {
        double norm = std::sqrt(g.squared_norm());
        if (norm > cfg.gradient_clip_norm) g.scale(cfg.gradient_clip_norm / norm);
      }
      opt.step(model.params, g);
    }
    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / static_cast<double>(tr.size());
    m.train_accuracy = correct / static_cast<double>(tr.size());
    if (!val.empty()) {
      auto [vl, va] = evaluate(model, data, val, cfg.exec);
      if (!std::isfinite(vl)) fail(ErrorKind::divergence, "validation loss is not finite");
      m.validation_loss = vl;
      m.validation_accuracy = va;
    }
    result.epochs.push_back(m);
  }
  return result;
}

std::uint64_t vocab_hash(const tokenize::WordPieceModel& tokenizer) {
  std::uint64_t h = fnv1a("");
  for (const auto& t : tokenizer.vocab()) {
    h = fnv1a(t, h);
    h = fnv1a("\n", h);
  }
  return h;
}

Prediction classify(double probability) {
  Prediction p;
  p.probability = probability;
  p.label = probability >= 0.5 ? 1 : 0;
  return p;
}

Prediction predict_sentiment(const BiLstmModel& model, const tokenize::WordPieceModel& tokenizer,
                             std::string_view text, const corpus::PreprocessConfig& cfg) {
  if (static_cast<int>(tokenizer.size()) != model.dims.vocab_size || vocab_hash(tokenizer) != model.vocab_hash)
    fail(ErrorKind::predict, "tokenizer vocabulary does not match the model");
  auto ids = tokenize::encode_ids(tokenizer, tokenize::word_tokenize(corpus::clean_text(text, cfg)));
  const int unk = tokenizer.unk_id();
  if (std::all_of(ids.begin(), ids.end(), [&](int id) { return id == unk; })) {
    Prediction none;
    none.no_signal = true;
    return none;
  }
  return classify(forward(model, ids));
}

void save_checkpoint(const BiLstmModel& model, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["format"] = "sentikit-bilstm";
  j["version"] = 1;
  j["dims"] = {{"vocab_size", model.dims.vocab_size},
               {"d_embed", model.dims.d_embed},
               {"hidden", model.dims.hidden},
               {"max_seq_len", model.dims.max_seq_len}};
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(model.vocab_hash));
  j["vocab_hash"] = hash;
  Params copy = model.params;
  j["tensors"] = nlohmann::ordered_json::array();
  for (const auto& t : tensors(copy)) {
    j["tensors"].push_back({{"name", t.name},
                            {"shape", {t.rows, t.cols}},
                            {"data", std::vector<double>(t.data, t.data + t.size())}});
  }
  write_file(path, j.dump() + "\n");
}

BiLstmModel load_checkpoint(const std::filesystem::path& path) {
  try {
    auto j = nlohmann::json::parse(read_file(path));
    if (j.at("format") != "sentikit-bilstm") fail(ErrorKind::parse, path.string() + ": not a bilstm checkpoint");
    Dims dims;
    dims.vocab_size = j.at("dims").at("vocab_size").get<int>();
    dims.d_embed = j.at("dims").at("d_embed").get<int>();
    dims.hidden = j.at("dims").at("hidden").get<int>();
    dims.max_seq_len = j.at("dims").at("max_seq_len").get<int>();
    BiLstmModel m = init_model(dims, 0);
    m.vocab_hash = std::stoull(j.at("vocab_hash").get<std::string>(), nullptr, 16);
    auto ts = tensors(m.params);
    const auto& stored = j.at("tensors");
    if (stored.size() != ts.size()) fail(ErrorKind::parse, path.string() + ": wrong tensor count");
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const auto& s = stored[k];
      auto shape = s.at("shape").get<std::array<int, 2>>();
      if (s.at("name") != ts[k].name || shape[0] != ts[k].rows || shape[1] != ts[k].cols)
        fail(ErrorKind::parse, path.string() + ": tensor " + ts[k].name + " has the wrong name or shape");
      auto data = s.at("data").get<std::vector<double>>();
      if (data.size() != ts[k].size()) fail(ErrorKind::parse, path.string() + ": tensor size mismatch");
      std::copy(data.begin(), data.end(), ts[k].data);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, path.string() + ": " + e.what());
  } catch (const std::invalid_argument&) {
    fail(ErrorKind::parse, path.string() + ": bad vocab hash");
  }
}

}  // namespace sentikit::neural
