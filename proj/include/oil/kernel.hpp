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

#ifndef OIL_KERNEL_HPP
#define OIL_KERNEL_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "oil/alphabet.hpp"
#include "oil/distribution.hpp"
#include "oil/errors.hpp"

namespace oil {

// A conditional probability assignment p(out | in) between finite alphabets,
// stored as a column-stochastic matrix: entry (o, i) = p(out = o | in = i),
// so column i is the conditional distribution given input symbol i.
class Kernel {
 public:
  Kernel(Alphabet input, Alphabet output, std::vector<std::vector<double>> matrix)
      : input_(std::move(input)), output_(std::move(output)) {
    const std::size_t no = output_.size();
    const std::size_t ni = input_.size();
    if (matrix.size() != no)
      throw ShapeError("kernel matrix row count does not match output alphabet");
    data_.resize(no * ni);
    for (std::size_t o = 0; o < no; ++o) {
      if (matrix[o].size() != ni)
        throw ShapeError("kernel matrix column count does not match input alphabet");
      for (std::size_t i = 0; i < ni; ++i) data_[o * ni + i] = matrix[o][i];
    }
    validate();
  }

  // Takes ownership of a row-major [out][in] flat buffer.
  Kernel(Alphabet input, Alphabet output, std::vector<double> flat)
      : input_(std::move(input)), output_(std::move(output)), data_(std::move(flat)) {
    if (data_.size() != input_.size() * output_.size())
      throw ShapeError("kernel buffer size does not match alphabets");
    validate();
  }

  // Identity kernel on one alphabet.
  static Kernel identity(const Alphabet& alphabet) {
    const std::size_t n = alphabet.size();
    std::vector<double> flat(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) flat[i * n + i] = 1.0;
    return Kernel(alphabet, alphabet, std::move(flat));
  }

  // Kernel whose every column equals the given distribution; the output is
  // independent of the input.
  static Kernel constant_columns(const Alphabet& input, const Distribution& column) {
    const std::size_t ni = input.size();
    const std::size_t no = column.size();
    std::vector<double> flat(no * ni);
    for (std::size_t o = 0; o < no; ++o)
      for (std::size_t i = 0; i < ni; ++i) flat[o * ni + i] = column[o];
    return Kernel(input, column.alphabet(), std::move(flat));
  }

  // Uniform kernel: every column is the uniform distribution on the output.
  static Kernel uniform(const Alphabet& input, const Alphabet& output) {
    return constant_columns(input, Distribution::uniform(output));
  }

  const Alphabet& input_alphabet() const { return input_; }
  const Alphabet& output_alphabet() const { return output_; }
  std::size_t n_in() const { return input_.size(); }
  std::size_t n_out() const { return output_.size(); }

  double operator()(std::size_t out, std::size_t in) const {
    return data_[out * input_.size() + in];
  }

  Distribution column(std::size_t in) const {
    std::vector<double> c(n_out());
    for (std::size_t o = 0; o < n_out(); ++o) c[o] = (*this)(o, in);
    return Distribution(output_, std::move(c));
  }

  const std::vector<double>& flat() const { return data_; }

  double mean_diagonal() const {
    if (input_.size() != output_.size())
      throw ShapeError("mean diagonal requires a square kernel");
    double s = 0.0;
    for (std::size_t i = 0; i < input_.size(); ++i) s += (*this)(i, i);
    return s / static_cast<double>(input_.size());
  }

 private:
  void validate() const {
    const std::size_t ni = input_.size();
    const std::size_t no = output_.size();
    for (std::size_t i = 0; i < ni; ++i) {
      double colsum = 0.0;
      for (std::size_t o = 0; o < no; ++o) {
        double v = data_[o * ni + i];
        if (!(v >= 0.0)) throw DomainError("kernel entries must be non-negative");
        colsum += v;
      }
      if (std::abs(colsum - 1.0) > kProbTolerance)
        throw DomainError("kernel column " + std::to_string(i) +
                          " must sum to 1, got " + std::to_string(colsum));
    }
  }

  Alphabet input_;
  Alphabet output_;
  std::vector<double> data_;  // row-major [out][in]
};

// A hard-output model: one output symbol per input symbol.
class DeterministicModel {
 public:
  DeterministicModel(Alphabet input, Alphabet output, std::vector<int> map)
      : input_(std::move(input)), output_(std::move(output)), map_(std::move(map)) {
    if (map_.size() != input_.size())
      throw ShapeError("model map length does not match input alphabet");
    for (int o : map_) {
      if (o < 0 || static_cast<std::size_t>(o) >= output_.size())
        throw DomainError("model map entry out of output-alphabet range");
    }
  }

  const Alphabet& input_alphabet() const { return input_; }
  const Alphabet& output_alphabet() const { return output_; }
  int operator()(std::size_t in) const { return map_.at(in); }
  const std::vector<int>& map() const { return map_; }

 private:
  Alphabet input_;
  Alphabet output_;
  std::vector<int> map_;
};

// The kernel representation of a deterministic model: column i is the point
// mass at f(i).
inline Kernel one_hot_kernel(const DeterministicModel& f) {
  const std::size_t ni = f.input_alphabet().size();
  const std::size_t no = f.output_alphabet().size();
  std::vector<double> flat(no * ni, 0.0);
  for (std::size_t i = 0; i < ni; ++i)
    flat[static_cast<std::size_t>(f(i)) * ni + i] = 1.0;
  return Kernel(f.input_alphabet(), f.output_alphabet(), std::move(flat));
}

// Marginal distribution induced on the kernel output: probs = matrix * probs.
inline Distribution pushforward(const Distribution& input, const Kernel& k) {
  if (input.alphabet() != k.input_alphabet())
    throw ShapeError("pushforward: distribution alphabet does not match kernel input");
  std::vector<double> out(k.n_out(), 0.0);
  for (std::size_t o = 0; o < k.n_out(); ++o)
    for (std::size_t i = 0; i < k.n_in(); ++i) out[o] += k(o, i) * input[i];
  // Guard against accumulated round-off so downstream invariants hold.
  double s = 0.0;
  for (double v : out) s += v;
  for (double& v : out) v /= s;
  return Distribution(k.output_alphabet(), std::move(out));
}

// Composition in data-flow order: the result feeds `first`, then `second`.
// Matrix form: second.matrix * first.matrix.
inline Kernel cascade(const Kernel& first, const Kernel& second) {
  if (first.output_alphabet() != second.input_alphabet())
    throw ShapeError("cascade: inner alphabets do not match");
  const std::size_t ni = first.n_in();
  const std::size_t nm = first.n_out();
  const std::size_t no = second.n_out();
  std::vector<double> flat(no * ni, 0.0);
  for (std::size_t o = 0; o < no; ++o)
    for (std::size_t m = 0; m < nm; ++m) {
      const double s = second(o, m);
      if (s == 0.0) continue;
      for (std::size_t i = 0; i < ni; ++i) flat[o * ni + i] += s * first(m, i);
    }
  return Kernel(first.input_alphabet(), second.output_alphabet(), std::move(flat));
}

// Entrywise L1 distance between two same-shape kernels.
inline double l1_distance(const Kernel& a, const Kernel& b) {
  if (a.input_alphabet() != b.input_alphabet() || a.output_alphabet() != b.output_alphabet())
    throw ShapeError("l1_distance requires kernels of identical shape");
  double s = 0.0;
  for (std::size_t i = 0; i < a.flat().size(); ++i) s += std::abs(a.flat()[i] - b.flat()[i]);
  return s;
}

inline double max_abs_difference(const Kernel& a, const Kernel& b) {
  if (a.input_alphabet() != b.input_alphabet() || a.output_alphabet() != b.output_alphabet())
    throw ShapeError("max_abs_difference requires kernels of identical shape");
  double m = 0.0;
  for (std::size_t i = 0; i < a.flat().size(); ++i)
    m = std::max(m, std::abs(a.flat()[i] - b.flat()[i]));
  return m;
}

// Largest total-variation distance between any column of k and the reference.
inline double max_column_tv(const Kernel& k, const Distribution& reference) {
  if (k.output_alphabet() != reference.alphabet())
    throw ShapeError("max_column_tv: output alphabet does not match reference");
  double worst = 0.0;
  for (std::size_t i = 0; i < k.n_in(); ++i) {
    double s = 0.0;
    for (std::size_t o = 0; o < k.n_out(); ++o) s += std::abs(k(o, i) - reference[o]);
    worst = std::max(worst, 0.5 * s);
  }
  return worst;
}

}  // namespace oil

#endif  // OIL_KERNEL_HPP
