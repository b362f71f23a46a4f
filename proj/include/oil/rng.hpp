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

#ifndef OIL_RNG_HPP
#define OIL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "oil/distribution.hpp"
#include "oil/kernel.hpp"

namespace oil {

// Mixes a base seed with a stream index so derived streams are decorrelated.
// splitmix64 finalizer.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Explicit generator state threaded through every randomized operation.
// No ambient randomness anywhere in the library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Draws a symbol index from the distribution by inverse CDF over one uniform
// variate. Advances the generator exactly once.
inline std::size_t sample(const Distribution& dist, Rng& rng) {
  const double u = rng.next_double();
  double acc = 0.0;
  std::size_t last_positive = 0;
  bool seen = false;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] > 0.0) {
      last_positive = i;
      seen = true;
    }
    acc += dist[i];
    if (u < acc) return i;
  }
  // Round-off can leave acc marginally below 1; fall back to the last
  // positive-mass symbol.
  return seen ? last_positive : dist.size() - 1;
}

// Uniform draw from the probability simplex (normalized Exp(1) variates).
inline std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.next_double();
    if (u <= 0.0) u = 0x1.0p-53;
    w[i] = -std::log(u);
    sum += w[i];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Random strictly positive column-stochastic kernel; each column is a
// simplex draw.
inline Kernel random_kernel(const Alphabet& input, const Alphabet& output, Rng& rng) {
  const std::size_t ni = input.size();
  const std::size_t no = output.size();
  std::vector<double> flat(no * ni);
  for (std::size_t i = 0; i < ni; ++i) {
    std::vector<double> col = random_simplex(no, rng);
    for (std::size_t o = 0; o < no; ++o) flat[o * ni + i] = col[o];
  }
  return Kernel(input, output, std::move(flat));
}

}  // namespace oil

#endif  // OIL_RNG_HPP
