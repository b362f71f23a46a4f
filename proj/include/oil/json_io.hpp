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

#ifndef OIL_JSON_IO_HPP
#define OIL_JSON_IO_HPP

#include <cmath>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "oil/bench.hpp"
#include "oil/engine.hpp"
#include "oil/kernel.hpp"

namespace oil {

using json = nlohmann::json;

// Loader tolerance for externally produced files; rows are renormalized to
// the internal 1e-9 invariant.
inline constexpr double kLoaderTolerance = 1e-6;

namespace detail {

inline json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

template <typename T>
T get_field(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key)) throw IoError(context + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(context + ": bad field '" + key + "': " + e.what());
  }
}

}  // namespace detail

inline json distribution_to_json(const Distribution& d) {
  return json{{"labels", d.alphabet().labels()}, {"probs", d.probs()}};
}

inline Distribution distribution_from_json(const json& j, const std::string& context) {
  auto labels = detail::get_field<std::vector<std::string>>(j, "labels", context);
  auto probs = detail::get_field<std::vector<double>>(j, "probs", context);
  Alphabet alphabet(std::move(labels));
  if (probs.size() != alphabet.size())
    throw IoError(context + ": probs length does not match labels");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw IoError(context + ": negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kLoaderTolerance)
    throw IoError(context + ": probabilities sum to " + std::to_string(sum));
  for (double& p : probs) p /= sum;
  return Distribution(std::move(alphabet), std::move(probs));
}

inline json kernel_to_json(const Kernel& k) {
  std::vector<std::vector<double>> matrix(k.n_out(), std::vector<double>(k.n_in()));
  for (std::size_t o = 0; o < k.n_out(); ++o)
    for (std::size_t i = 0; i < k.n_in(); ++i) matrix[o][i] = k(o, i);
  return json{{"input_labels", k.input_alphabet().labels()},
              {"output_labels", k.output_alphabet().labels()},
              {"matrix", matrix}};
}

inline Kernel kernel_from_json(const json& j, const std::string& context) {
  Alphabet input(detail::get_field<std::vector<std::string>>(j, "input_labels", context));
  Alphabet output(detail::get_field<std::vector<std::string>>(j, "output_labels", context));
  auto matrix = detail::get_field<std::vector<std::vector<double>>>(j, "matrix", context);
  if (matrix.size() != output.size())
    throw IoError(context + ": matrix row count does not match output labels");
  for (const auto& row : matrix)
    if (row.size() != input.size())
      throw IoError(context + ": matrix column count does not match input labels");
  for (std::size_t i = 0; i < input.size(); ++i) {
    double colsum = 0.0;
    for (std::size_t o = 0; o < output.size(); ++o) {
      if (matrix[o][i] < 0.0) throw IoError(context + ": negative kernel entry");
      colsum += matrix[o][i];
    }
    if (std::abs(colsum - 1.0) > kLoaderTolerance)
      throw IoError(context + ": kernel column " + std::to_string(i) + " sums to " +
                    std::to_string(colsum));
    for (std::size_t o = 0; o < output.size(); ++o) matrix[o][i] /= colsum;
  }
  return Kernel(std::move(input), std::move(output), std::move(matrix));
}

inline json model_to_json(const DeterministicModel& m) {
  return json{{"input_labels", m.input_alphabet().labels()},
              {"output_labels", m.output_alphabet().labels()},
              {"map", m.map()}};
}

inline DeterministicModel model_from_json(const json& j, const std::string& context) {
  Alphabet input(detail::get_field<std::vector<std::string>>(j, "input_labels", context));
  Alphabet output(detail::get_field<std::vector<std::string>>(j, "output_labels", context));
  auto map = detail::get_field<std::vector<int>>(j, "map", context);
  try {
    return DeterministicModel(std::move(input), std::move(output), std::move(map));
  } catch (const Error& e) {
    throw IoError(context + ": " + e.what());
  }
}

inline Distribution load_distribution(const std::string& path) {
  return distribution_from_json(detail::parse_file(path), path);
}

inline void save_distribution(const Distribution& d, const std::string& path) {
  detail::write_file(path, distribution_to_json(d));
}

inline Kernel load_kernel(const std::string& path) {
  return kernel_from_json(detail::parse_file(path), path);
}

inline void save_kernel(const Kernel& k, const std::string& path) {
  detail::write_file(path, kernel_to_json(k));
}

inline DeterministicModel load_model(const std::string& path) {
  return model_from_json(detail::parse_file(path), path);
}

inline void save_model(const DeterministicModel& m, const std::string& path) {
  detail::write_file(path, model_to_json(m));
}

// A model file holds either a kernel ("matrix") or a deterministic map
// ("map"); both are exposed uniformly as a kernel.
inline Kernel load_model_as_kernel(const std::string& path) {
  json j = detail::parse_file(path);
  if (j.contains("map")) return one_hot_kernel(model_from_json(j, path));
  if (j.contains("matrix")) return kernel_from_json(j, path);
  throw IoError(path + ": expected a kernel ('matrix') or deterministic model ('map')");
}

struct SolutionEnvelope {
  std::string mode = "joint";
  OilConfig config;
  OilSolution solution;
};

inline json solution_to_json(const SolutionEnvelope& env) {
  const OilConfig& c = env.config;
  const OilSolution& s = env.solution;
  return json{{"config",
               {{"mode", env.mode},
                {"beta1", c.beta1},
                {"beta2", c.beta2},
                {"max_iters", c.max_iters},
                {"tol", c.tol},
                {"restarts", c.restarts},
                {"init", c.init == InitScheme::kUniform ? "uniform" : "random"},
                {"seed", c.seed}}},
              {"k1", kernel_to_json(s.k1)},
              {"k2", kernel_to_json(s.k2)},
              {"effective", kernel_to_json(s.effective)},
              {"objective", s.objective},
              {"objective_trace", s.objective_trace},
              {"delta_trace", s.delta_trace},
              {"residual", s.residual},
              {"converged", s.converged},
              {"iterations", s.iterations}};
}

inline void save_solution(const SolutionEnvelope& env, const std::string& path) {
  detail::write_file(path, solution_to_json(env));
}

// Loads the pieces needed to serve or evaluate a laundered model.
struct LoadedSolution {
  Kernel k1;
  Kernel k2;
};

inline LoadedSolution load_solution(const std::string& path) {
  json j = detail::parse_file(path);
  if (!j.contains("k1") || !j.contains("k2"))
    throw IoError(path + ": not a solution file (missing kernels)");
  return LoadedSolution{kernel_from_json(j.at("k1"), path + ":k1"),
                        kernel_from_json(j.at("k2"), path + ":k2")};
}

inline QuantizerConfig quantizer_config_from_json(const json& j, const std::string& context) {
  QuantizerConfig c;
  c.mu = detail::get_field<double>(j, "mu", context);
  c.sigma = detail::get_field<double>(j, "sigma", context);
  c.n_points = detail::get_field<std::size_t>(j, "n_points", context);
  try {
    c.validate();
  } catch (const Error& e) {
    throw IoError(context + ": " + e.what());
  }
  return c;
}

inline QuantizerConfig load_quantizer_config(const std::string& path) {
  return quantizer_config_from_json(detail::parse_file(path), path);
}

}  // namespace oil

#endif  // OIL_JSON_IO_HPP
