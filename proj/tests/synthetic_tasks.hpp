#pragma once

// Small generated datasets shared by the unit tests and the acceptance gate.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sentikit/features.hpp"

namespace synthetic {

inline sentikit::features::SparseVector sparse(const std::vector<double>& dense) {
  sentikit::features::SparseVector v;
  v.dim = static_cast<int>(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0.0) {
      v.indices.push_back(static_cast<int>(i));
      v.values.push_back(dense[i]);
    }
  return v;
}

struct Dataset {
  std::vector<sentikit::features::SparseVector> X;
  std::vector<int> y;
};

// Four XOR corners, each repeated `copies` times.
inline Dataset xor_data(int copies = 1) {
  Dataset d;
  for (int c = 0; c < copies; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        d.X.push_back(sparse({double(a), double(b)}));
        d.y.push_back(a ^ b);
      }
  return d;
}

// Label = [x0 + x1 > 1] over ten uniform features, each label flipped with
// probability `noise`.
inline Dataset noisy_task(std::size_t n, double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(10);
    for (auto& v : x) v = std::round(u(rng) * 100.0) / 100.0;
    int label = x[0] + x[1] > 1.0;
    if (u(rng) < noise) label = 1 - label;
    d.X.push_back(sparse(x));
    d.y.push_back(label);
  }
  return d;
}

// Token sequences over a vocabulary of `vocab` ids; ids 1 ("up") and 2
// ("down") decide the label, every other position is filler from 3 up.
inline std::vector<std::pair<std::vector<int>, int>> separable_sequences(std::size_t n, int vocab,
                                                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> filler(3, vocab - 1), len(3, 12);
  std::vector<std::pair<std::vector<int>, int>> out;
  for (std::size_t i = 0; i < n; ++i) {
    int label = static_cast<int>(i % 2);
    std::vector<int> seq(static_cast<std::size_t>(len(rng)));
    for (auto& t : seq) t = filler(rng);
    seq[std::uniform_int_distribution<std::size_t>(0, seq.size() - 1)(rng)] = label ? 1 : 2;
    out.emplace_back(std::move(seq), label);
  }
  return out;
}

}  // namespace synthetic
