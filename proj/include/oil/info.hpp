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

#ifndef OIL_INFO_HPP
#define OIL_INFO_HPP

#include <cmath>
#include <limits>

#include "oil/distribution.hpp"
#include "oil/kernel.hpp"

namespace oil {

// All information quantities are in nats.

// KL(p || q) = sum_y p(y) log(p(y)/q(y)), with 0 log(0/q) = 0. Returns
// +infinity when p puts mass where q has none.
inline double kl_divergence(const Distribution& p, const Distribution& q) {
  if (p.alphabet() != q.alphabet())
    throw ShapeError("kl_divergence requires a common alphabet");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s < 0.0 ? 0.0 : s;  // clamp round-off on the p == q diagonal
}

inline double entropy(const Distribution& p) {
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
  return h;
}

// I(In; Out) for In ~ input_dist and Out | In given by the kernel:
//   sum_{i,o} p(i) k(o|i) log( k(o|i) / m(o) ),  m = pushforward(p, k).
inline double mutual_information(const Distribution& input_dist, const Kernel& k) {
  if (input_dist.alphabet() != k.input_alphabet())
    throw ShapeError("mutual_information: distribution does not match kernel input");
  const Distribution m = pushforward(input_dist, k);
  double s = 0.0;
  for (std::size_t i = 0; i < k.n_in(); ++i) {
    if (input_dist[i] == 0.0) continue;
    for (std::size_t o = 0; o < k.n_out(); ++o) {
      const double c = k(o, i);
      if (c == 0.0) continue;
      s += input_dist[i] * c * std::log(c / m[o]);
    }
  }
  return s < 0.0 ? 0.0 : s;
}

// E_{x ~ px} KL( kstar(.|x) || k(.|x) ): columnwise divergence between two
// kernels sharing both alphabets, averaged over the input distribution.
// Propagates the +infinity sentinel.
inline double expected_kl(const Distribution& px, const Kernel& kstar, const Kernel& k) {
  if (kstar.input_alphabet() != k.input_alphabet() ||
      kstar.output_alphabet() != k.output_alphabet())
    throw ShapeError("expected_kl requires kernels with identical alphabets");
  if (px.alphabet() != kstar.input_alphabet())
    throw ShapeError("expected_kl: distribution does not match kernel input");
  double s = 0.0;
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px[x] == 0.0) continue;
    for (std::size_t y = 0; y < kstar.n_out(); ++y) {
      const double a = kstar(y, x);
      if (a == 0.0) continue;
      const double b = k(y, x);
      if (b == 0.0) return std::numeric_limits<double>::infinity();
      s += px[x] * a * std::log(a / b);
    }
  }
  return s < 0.0 ? 0.0 : s;
}

}  // namespace oil

#endif  // OIL_INFO_HPP
