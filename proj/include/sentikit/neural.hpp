#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sentikit/corpus.hpp"
#include "sentikit/parallel.hpp"
#include "sentikit/tokenize.hpp"

// Embedding -> bidirectional LSTM -> sigmoid head, trained with binary
// cross-entropy.
namespace sentikit::neural {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

// Gate blocks are stacked input, forget, candidate, output.
struct LstmCell {
  Mat W;  // 4h x d_embed
  Mat U;  // 4h x h
  Vec b;  // 4h
};

struct Params {
  Mat embedding;  // vocab x d_embed
  LstmCell forward, backward;
  Vec head_w;  // 2h: forward block then backward block
  Vec head_b;  // size 1
};

// Flat view of one parameter tensor, row-major.
struct Tensor {
  std::string name;
  double* data;
  int rows, cols;
  std::size_t size() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
};
std::vector<Tensor> tensors(Params& p);

struct Dims {
  int vocab_size = 0;
  int d_embed = 64;
  int hidden = 64;
  int max_seq_len = 256;
};

struct BiLstmModel {
  Dims dims;
  std::uint64_t vocab_hash = 0;
  Params params;
};

struct InitOptions {
  double embedding_stddev = 0.01;
  double weight_range = 0.08;  // uniform(-r, r) for W, U and the head
  double forget_bias = 1.0;
};

BiLstmModel init_model(const Dims& dims, std::uint64_t seed, const InitOptions& opts = {});
Params zeros_like(const Params& p, bool with_embedding = true);

// Sequences longer than max_seq_len are cut to their first max_seq_len ids.
double forward(const BiLstmModel& model, const std::vector<int>& ids);
// [final forward hidden; final backward hidden], before the head.
Vec features(const BiLstmModel& model, const std::vector<int>& ids);

inline constexpr double kProbabilityFloor = 1e-12;
double loss(double p, int y);

struct Gradients {
  std::map<int, Vec> embedding;  // touched rows only
  Params dense;                  // embedding member stays empty
  double loss = 0.0;
  int correct = 0;  // examples whose thresholded prediction matched

  Gradients& operator+=(const Gradients& other);
  void scale(double s);
  double squared_norm() const;
};

Gradients zero_gradients(const BiLstmModel& model);

// Exact gradients of loss(forward(ids), y) by backpropagation through time.
Gradients backward(const BiLstmModel& model, const std::vector<int>& ids, int y);

using Example = std::pair<std::vector<int>, int>;

// Sum of per-example gradients, reduced in example order whatever the
// worker count.
Gradients batch_gradient(const BiLstmModel& model, const std::vector<Example>& data,
                         const std::vector<std::size_t>& batch, Exec exec);

enum class Optimizer { sgd, adam };

struct TrainConfig {
  double learning_rate = 1e-3;
  int epochs = 10;
  int batch_size = 32;
  std::uint64_t seed = 0;
  double gradient_clip_norm = 5.0;  // <= 0 disables clipping
  Optimizer optimizer = Optimizer::adam;
  double beta1 = 0.9, beta2 = 0.999, epsilon = 1e-8;
  double validation_fraction = 0.1;
  Exec exec = Exec::parallel;

  void validate() const;
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0, train_accuracy = 0.0;
  std::optional<double> validation_loss, validation_accuracy;
};

struct TrainResult {
  std::vector<EpochMetrics> epochs;
  std::size_t truncated_sequences = 0;
  std::size_t train_size = 0, validation_size = 0;
};

// Trains in place. Throws Error(divergence) as soon as a batch loss is NaN.
TrainResult train(BiLstmModel& model, const std::vector<Example>& data, const TrainConfig& cfg);

std::uint64_t vocab_hash(const tokenize::WordPieceModel& tokenizer);

struct Prediction {
  int label = 0;  // 1 when probability >= 0.5
  double probability = 0.5;
  bool no_signal = false;
};

Prediction classify(double probability);
// clean -> whitespace split -> wordpiece ids -> forward. Empty or all-unk
// input has no signal.
Prediction predict_sentiment(const BiLstmModel& model, const tokenize::WordPieceModel& tokenizer,
                             std::string_view text, const corpus::PreprocessConfig& cfg);

// JSON checkpoint: dims, vocab hash and every tensor with its shape.
void save_checkpoint(const BiLstmModel& model, const std::filesystem::path& path);
BiLstmModel load_checkpoint(const std::filesystem::path& path);

}  // namespace sentikit::neural
