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

#ifndef OIL_ALPHABET_HPP
#define OIL_ALPHABET_HPP

#include <cstddef>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "oil/errors.hpp"

namespace oil {

// A finite, ordered set of distinct symbol labels. Distributions are vectors
// indexed by an alphabet; kernels map one alphabet to another.
class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw DomainError("alphabet must contain at least one symbol");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
      if (l.empty()) throw DomainError("alphabet labels must be non-empty");
      if (!seen.insert(l).second) throw DomainError("duplicate alphabet label: " + l);
    }
  }

  // Canonical alphabet {"0", "1", ..., "n-1"}.
  static Alphabet of_size(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    return Alphabet(std::move(labels));
  }

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }

  // Index of a label, or -1 if absent.
  int index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == label) return static_cast<int>(i);
    }
    return -1;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.labels_ == b.labels_;
  }
  friend bool operator!=(const Alphabet& a, const Alphabet& b) { return !(a == b); }

 private:
  std::vector<std::string> labels_;
};

}  // namespace oil

#endif  // OIL_ALPHABET_HPP
