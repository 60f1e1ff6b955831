#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sentikit/features.hpp"
#include "sentikit/parallel.hpp"

// Classifiers over TF-IDF rows. Labels are 0 (negative) and 1 (positive).
namespace sentikit::classical {

using features::SparseVector;
using Matrix = std::vector<SparseVector>;
using Labels = std::vector<int>;

// Multinomial naive bayes; feature values act as nonnegative pseudo-counts.
struct NaiveBayes {
  double alpha = 1.0;
  int dim = 0;
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_likelihood;

  // log P(c) + sum_f x_f log P(f | c), for both classes.
  std::array<double, 2> joint_log(const SparseVector& x) const;
  double posterior_positive(const SparseVector& x) const;
  int predict(const SparseVector& x) const;  // ties go to negative
};

NaiveBayes fit_nb(const Matrix& X, const Labels& y, double alpha = 1.0);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] <= threshold goes left
  int left = -1, right = -1;
  int label = 0;
  std::array<std::int64_t, 2> counts{};

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int dim = 0;

  int depth() const;
  int predict(const SparseVector& x) const;
};

struct TreeParams {
  int max_depth = 5;
  int min_samples_split = 2;
  // Candidate features examined per split; unset means all of them.
  std::optional<int> features_per_split;
  Exec exec = Exec::parallel;
};

// Greedy CART on Gini impurity. `weights` are integer sample multiplicities
// (bootstrap counts); null means every row once.
Tree fit_tree(const Matrix& X, const Labels& y, const TreeParams& params, std::uint64_t seed,
              const std::vector<std::int64_t>* weights = nullptr);

// Column-major copy of X used by the split search.
struct ColumnMatrix {
  int rows = 0;
  std::vector<std::vector<std::pair<int, double>>> columns;
  static ColumnMatrix from_rows(const Matrix& X, int dim);
};

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  // Split quality S_L/w_L + S_R/w_R kept as an exact fraction, where S is
  // the sum of squared class weights and w the total weight of a side.
  __int128 numerator = 0;
  __int128 denominator = 1;

  bool valid() const { return feature >= 0; }
};

// Higher quality first, then lower feature index, then lower threshold.
bool better_split(const SplitCandidate& a, const SplitCandidate& b);

// Best split of the rows with weight > 0 over the listed features.
SplitCandidate best_split(const ColumnMatrix& cols, const Labels& y,
                          const std::vector<std::int64_t>& weight,
                          const std::vector<int>& features, Exec exec);

enum class EnsembleKind { bagging, random_forest };
std::string_view to_string(EnsembleKind k);

struct EnsembleParams {
  EnsembleKind kind = EnsembleKind::bagging;
  int n_trees = 25;
  int max_depth = 5;
  int min_samples_split = 2;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  Exec exec = Exec::parallel;
};

struct Ensemble {
  EnsembleKind kind = EnsembleKind::bagging;
  int features_per_split = 0;  // 0 for bagging (all features)
  std::uint64_t seed = 0;
  int dim = 0;
  std::vector<Tree> trees;

  std::array<int, 2> votes(const SparseVector& x) const;
  int predict(const SparseVector& x) const;  // vote ties go to negative
};

Ensemble fit_ensemble(const Matrix& X, const Labels& y, const EnsembleParams& params);

using Model = std::variant<NaiveBayes, Tree, Ensemble>;

std::vector<int> predict(const Model& model, const Matrix& X);
std::string model_kind(const Model& model);

// JSON with nested node records.
std::string to_json(const Model& model);
Model model_from_json(std::string_view text);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace sentikit::classical
