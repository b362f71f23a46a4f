// Copyright 2026 The OIL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OIL_DISTRIBUTION_HPP
#define OIL_DISTRIBUTION_HPP

#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "oil/alphabet.hpp"
#include "oil/errors.hpp"

namespace oil {

inline constexpr double kProbTolerance = 1e-9;

// A probability vector over a finite alphabet. Entries are non-negative and
// sum to one within kProbTolerance.
class Distribution {
 public:
  Distribution(Alphabet alphabet, std::vector<double> probs)
      : alphabet_(std::move(alphabet)), probs_(std::move(probs)) {
    if (probs_.size() != alphabet_.size())
      throw ShapeError("probability vector length does not match alphabet size");
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw DomainError("probabilities must be non-negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTolerance)
      throw DomainError("probabilities must sum to 1, got " + std::to_string(sum));
  }

  static Distribution uniform(Alphabet alphabet) {
    std::vector<double> p(alphabet.size(), 1.0 / static_cast<double>(alphabet.size()));
    return Distribution(std::move(alphabet), std::move(p));
  }

  static Distribution point_mass(Alphabet alphabet, std::size_t index) {
    std::vector<double> p(alphabet.size(), 0.0);
    p.at(index) = 1.0;
    return Distribution(std::move(alphabet), std::move(p));
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  Alphabet alphabet_;
  std::vector<double> probs_;
};

// Scales a non-negative weight vector to a distribution.
inline Distribution normalize(const std::vector<double>& weights, const Alphabet& alphabet) {
  if (weights.size() != alphabet.size())
    throw ShapeError("weight vector length does not match alphabet size");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DomainError("weights must be non-negative");
    sum += w;
  }
  if (sum <= 0.0) throw DegenerateInputError("cannot normalize an all-zero weight vector");
  std::vector<double> probs(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) probs[i] = weights[i] / sum;
  return Distribution(alphabet, std::move(probs));
}

inline double total_variation(const Distribution& p, const Distribution& q) {
  if (p.alphabet() != q.alphabet())
    throw ShapeError("total variation requires a common alphabet");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

}  // namespace oil

#endif  // OIL_DISTRIBUTION_HPP
