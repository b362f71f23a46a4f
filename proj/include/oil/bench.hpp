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
//
// Evaluation machinery: Dirichlet random-kernel baseline, privacy-utility
// sweeps, Monte Carlo agreement, a surrogate model-extraction estimator,
// output quantization, and frequency estimation.

#ifndef OIL_BENCH_HPP
#define OIL_BENCH_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oil/engine.hpp"
#include "oil/rng.hpp"
#include "oil/special.hpp"

namespace oil {

// Column-wise Dirichlet random kernel: concentration a_param on the
// matching symbol, b_param elsewhere. A larger a_param/b_param ratio favors
// mass on the diagonal.
struct DirichletSpec {
  double a_param = 1.0;
  double b_param = 1.0;
  std::size_t alphabet_size = 2;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(a_param > 0.0) || !(b_param > 0.0))
      throw DomainError("Dirichlet concentrations must be positive");
    if (alphabet_size < 1) throw DomainError("alphabet size must be positive");
  }
};

// Sampled via normalized independent Gamma draws from the seeded generator.
inline Kernel dirichlet_kernel(const DirichletSpec& spec) {
  spec.validate();
  const std::size_t a = spec.alphabet_size;
  const Alphabet alphabet = Alphabet::of_size(a);
  Rng rng(spec.seed);
  std::vector<double> flat(a * a);
  for (std::size_t yt = 0; yt < a; ++yt) {
    double sum = 0.0;
    std::vector<double> col(a);
    for (std::size_t y = 0; y < a; ++y) {
      std::gamma_distribution<double> gamma(y == yt ? spec.a_param : spec.b_param, 1.0);
      col[y] = gamma(rng.engine());
      sum += col[y];
    }
    for (std::size_t y = 0; y < a; ++y) flat[y * a + yt] = col[y] / sum;
  }
  return Kernel(alphabet, alphabet, std::move(flat));
}

// Fraction of queries for which the laundered response equals an authentic
// draw from the model. Samples, per query: x, authentic y*, then the
// laundered path xt -> yt -> y.
inline double monte_carlo_agreement(const Kernel& kstar, const Kernel& k1, const Kernel& k2,
                                    const Distribution& px, std::size_t n_samples,
                                    std::uint64_t seed) {
  if (n_samples < 1) throw DomainError("agreement estimation needs at least one sample");
  check_chain(px, kstar, k1, k2);
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const std::size_t x = sample(px, rng);
    const std::size_t y_star = sample(kstar.column(x), rng);
    const std::size_t xt = sample(k1.column(x), rng);
    const std::size_t yt = sample(kstar.column(xt), rng);
    const std::size_t y = sample(k2.column(yt), rng);
    if (y == y_star) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n_samples);
}

// Simulates an adversary fitting an empirical conditional kernel from
// laundered query-response pairs, with add-one smoothing. Fidelity is the
// expected divergence of the authentic model from the estimate; laundering
// succeeds when it stays bounded away from zero as queries grow.
inline std::pair<Kernel, double> surrogate_extraction(const Kernel& kstar, const Kernel& k1,
                                                      const Kernel& k2, const Distribution& px,
                                                      std::size_t n_queries,
                                                      std::uint64_t seed) {
  if (n_queries < 1) throw DomainError("extraction needs at least one query");
  check_chain(px, kstar, k1, k2);
  const std::size_t nx = px.size();
  const std::size_t ny = k2.n_out();
  std::vector<std::size_t> counts(ny * nx, 0);
  std::vector<std::size_t> col_totals(nx, 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < n_queries; ++i) {
    const std::size_t x = sample(px, rng);
    const std::size_t xt = sample(k1.column(x), rng);
    const std::size_t yt = sample(kstar.column(xt), rng);
    const std::size_t y = sample(k2.column(yt), rng);
    ++counts[y * nx + x];
    ++col_totals[x];
  }
  std::vector<double> flat(ny * nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      flat[y * nx + x] = (static_cast<double>(counts[y * nx + x]) + 1.0) /
                         (static_cast<double>(col_totals[x]) + static_cast<double>(ny));
  Kernel estimate(kstar.input_alphabet(), kstar.output_alphabet(), std::move(flat));
  const double fidelity = expected_kl(px, kstar, estimate);
  return {std::move(estimate), fidelity};
}

// Empirical frequency of observed output symbols.
inline Distribution estimate_r(const std::vector<std::size_t>& observed_outputs,
                               const Alphabet& alphabet) {
  if (observed_outputs.empty())
    throw DegenerateInputError("cannot estimate frequencies from an empty stream");
  std::vector<double> counts(alphabet.size(), 0.0);
  for (std::size_t s : observed_outputs) {
    if (s >= alphabet.size()) throw DomainError("observed symbol outside the alphabet");
    counts[s] += 1.0;
  }
  return normalize(counts, alphabet);
}

// Equally spaced quantization grid on [mu - 3 sigma, mu + 3 sigma].
struct QuantizerConfig {
  double mu = 0.0;
  double sigma = 1.0;
  std::size_t n_points = 30;

  void validate() const {
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive");
    if (n_points < 2) throw DomainError("quantizer needs at least two grid points");
    if (!std::isfinite(mu)) throw DomainError("mu must be finite");
  }

  double lo() const { return mu - 3.0 * sigma; }
  double hi() const { return mu + 3.0 * sigma; }

  std::vector<double> grid() const {
    validate();
    std::vector<double> g(n_points);
    const double span = hi() - lo();
    for (std::size_t i = 0; i < n_points; ++i)
      g[i] = lo() + span * static_cast<double>(i) / static_cast<double>(n_points - 1);
    return g;
  }
};

// Index of the nearest grid point; values beyond the grid clamp to the
// endpoints and exact midpoints round down.
inline std::size_t quantize(double value, const QuantizerConfig& config) {
  config.validate();
  if (!std::isfinite(value)) throw DomainError("cannot quantize a non-finite value");
  const double t =
      (value - config.lo()) * static_cast<double>(config.n_points - 1) / (config.hi() - config.lo());
  const double idx = std::ceil(t - 0.5);
  if (idx < 0.0) return 0;
  if (idx >= static_cast<double>(config.n_points)) return config.n_points - 1;
  return static_cast<std::size_t>(idx);
}

inline std::vector<std::size_t> quantize(const std::vector<double>& values,
                                         const QuantizerConfig& config) {
  std::vector<std::size_t> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(quantize(v, config));
  return out;
}

enum class SweepMode { kJoint, kOutputOnly, kInputOnly };

struct TradeoffPoint {
  double beta = 0.0;
  double utility_kl = 0.0;
  double mi_input = 0.0;
  double mi_output = 0.0;
  double objective = 0.0;
  double empirical_agreement = 0.0;
};

struct TradeoffCurve {
  std::vector<TradeoffPoint> points;
};

struct SweepControls {
  int max_iters = 2000;
  double tol = 1e-10;
  int restarts = 0;
  std::size_t samples = 10000;
};

namespace detail {

inline TradeoffPoint evaluate_point(const Distribution& px, const Kernel& kstar,
                                    const Kernel& k1, const Kernel& k2, double beta,
                                    SweepMode mode, std::size_t samples, std::uint64_t seed) {
  TradeoffPoint p;
  p.beta = beta;
  const Kernel k = cascade(cascade(k1, kstar), k2);
  p.utility_kl = expected_kl(px, kstar, k);
  p.mi_input = mutual_information(px, k1);
  const Distribution pyt = pushforward(pushforward(px, k1), kstar);
  p.mi_output = mutual_information(pyt, k2);
  switch (mode) {
    case SweepMode::kJoint:
      p.objective = p.utility_kl + beta * (p.mi_input + p.mi_output);
      break;
    case SweepMode::kOutputOnly:
      p.objective = p.utility_kl + beta * p.mi_output;
      break;
    case SweepMode::kInputOnly:
      p.objective = p.utility_kl + beta * p.mi_input;
      break;
  }
  p.empirical_agreement = monte_carlo_agreement(kstar, k1, k2, px, samples, seed);
  return p;
}

}  // namespace detail

// Runs the mode's solver at every beta and records exact information
// quantities plus a Monte Carlo agreement estimate. beta = 0 takes the
// closed-form identity path.
inline TradeoffCurve sweep(const Distribution& px, const Kernel& kstar,
                           const std::vector<double>& betas, SweepMode mode,
                           const SweepControls& controls, std::uint64_t seed) {
  if (betas.empty()) throw DomainError("beta list must be non-empty");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (betas[i] < 0.0) throw DomainError("beta values must be non-negative");
    if (i > 0 && betas[i] <= betas[i - 1])
      throw DomainError("beta values must be strictly increasing");
  }
  TradeoffCurve curve;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double beta = betas[i];
    const std::uint64_t point_seed = derive_seed(seed, i);
    Kernel k1 = Kernel::identity(kstar.input_alphabet());
    Kernel k2 = Kernel::identity(kstar.output_alphabet());
    if (beta > 0.0) {
      switch (mode) {
        case SweepMode::kJoint: {
          OilConfig config;
          config.beta1 = beta;
          config.beta2 = beta;
          config.max_iters = controls.max_iters;
          config.tol = controls.tol;
          config.restarts = controls.restarts;
          config.seed = point_seed;
          OilSolution sol = oil_optimize(px, kstar, config);
          k1 = sol.k1;
          k2 = sol.k2;
          break;
        }
        case SweepMode::kOutputOnly:
          k2 = oil_y_general(px, kstar, beta, controls.max_iters, controls.tol).kernel;
          break;
        case SweepMode::kInputOnly:
          k1 = oil_x(px, kstar, beta, controls.max_iters, controls.tol).kernel;
          break;
      }
    }
    curve.points.push_back(
        detail::evaluate_point(px, kstar, k1, k2, beta, mode, controls.samples, point_seed));
  }
  return curve;
}

inline constexpr char kCurveCsvHeader[] =
    "beta,utility_kl,mi_input,mi_output,objective,empirical_agreement";

namespace detail {

inline std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

inline void emit_curve_csv(const TradeoffCurve& curve, std::ostream& os) {
  os << kCurveCsvHeader << '\n';
  for (const auto& p : curve.points) {
    os << detail::format_g6(p.beta) << ',' << detail::format_g6(p.utility_kl) << ','
       << detail::format_g6(p.mi_input) << ',' << detail::format_g6(p.mi_output) << ','
       << detail::format_g6(p.objective) << ',' << detail::format_g6(p.empirical_agreement)
       << '\n';
  }
}

inline TradeoffCurve parse_curve_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCurveCsvHeader)
    throw IoError("tradeoff CSV header mismatch");
  TradeoffCurve curve;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    TradeoffPoint p;
    char comma;
    if (!(ls >> p.beta >> comma >> p.utility_kl >> comma >> p.mi_input >> comma >> p.mi_output >>
          comma >> p.objective >> comma >> p.empirical_agreement))
      throw IoError("malformed tradeoff CSV row: " + line);
    curve.points.push_back(p);
  }
  return curve;
}

// One row of the Dirichlet random-kernel baseline: metrics averaged over
// seeded replications of a random output perturbation (input untouched).
struct DirichletBaselineRow {
  double a_param = 0.0;
  double b_param = 0.0;
  int replications = 0;
  double utility_kl = 0.0;
  double mi_input = 0.0;
  double mi_output = 0.0;
  double empirical_agreement = 0.0;
};

inline DirichletBaselineRow dirichlet_baseline(const Distribution& px, const Kernel& kstar,
                                               double a_param, double b_param, int replications,
                                               std::size_t samples, std::uint64_t seed) {
  if (replications < 1) throw DomainError("replications must be at least 1");
  if (kstar.output_alphabet().size() != kstar.n_out())
    throw ShapeError("model output alphabet inconsistent");
  DirichletBaselineRow row{a_param, b_param, replications};
  const Kernel k1 = Kernel::identity(kstar.input_alphabet());
  for (int rep = 0; rep < replications; ++rep) {
    DirichletSpec spec{a_param, b_param, kstar.n_out(), derive_seed(seed, rep)};
    Kernel raw = dirichlet_kernel(spec);
    // rebuild on the model's output alphabet (dirichlet_kernel uses canonical labels)
    Kernel k2(kstar.output_alphabet(), kstar.output_alphabet(),
              std::vector<double>(raw.flat()));
    const Kernel k = cascade(kstar, k2);
    row.utility_kl += expected_kl(px, kstar, k);
    row.mi_input += mutual_information(px, k1);
    const Distribution pyt = pushforward(px, kstar);
    row.mi_output += mutual_information(pyt, k2);
    row.empirical_agreement +=
        monte_carlo_agreement(kstar, k1, k2, px, samples, derive_seed(seed, 1000003 + rep));
  }
  const double n = static_cast<double>(replications);
  row.utility_kl /= n;
  row.mi_input /= n;
  row.mi_output /= n;
  row.empirical_agreement /= n;
  return row;
}

inline constexpr char kBaselineCsvHeader[] =
    "beta,utility_kl,mi_input,mi_output,objective,empirical_agreement,a_param,b_param,"
    "replications";

// Baseline rows reuse the tradeoff schema; they carry no tradeoff weight, so
// beta is written as 0 and the objective is the bare divergence term.
inline void emit_baseline_csv(const std::vector<DirichletBaselineRow>& rows, std::ostream& os) {
  os << kBaselineCsvHeader << '\n';
  for (const auto& r : rows) {
    os << "0," << detail::format_g6(r.utility_kl) << ',' << detail::format_g6(r.mi_input) << ','
       << detail::format_g6(r.mi_output) << ',' << detail::format_g6(r.utility_kl) << ','
       << detail::format_g6(r.empirical_agreement) << ',' << detail::format_g6(r.a_param) << ','
       << detail::format_g6(r.b_param) << ',' << r.replications << '\n';
  }
}

}  // namespace oil

#endif  // OIL_BENCH_HPP
