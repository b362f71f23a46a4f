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
// Joint optimizer for information-laundering kernels. The objective
//
//   L(K1, K2) = E_{X~px} KL( kstar(.|X) || K(.|X) )
//             + beta1 * I(X; Xt) + beta2 * I(Yt; Y),     K = K1 . kstar . K2
//
// is minimized by alternating multiplicative fixed-point updates of K1 and
// K2 with marginal refreshes in between. Each update is computed in the log
// domain with per-column max subtraction.

#ifndef OIL_ENGINE_HPP
#define OIL_ENGINE_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oil/distribution.hpp"
#include "oil/errors.hpp"
#include "oil/info.hpp"
#include "oil/kernel.hpp"
#include "oil/rng.hpp"

namespace oil {

// Entries of kernel iterates are kept at or above this floor so that log,
// ratio, and marginal computations stay finite. The perturbation is far
// below every tolerance in use.
inline constexpr double kPositivityFloor = 1e-30;

// Relative slack when deciding whether a candidate step decreased the
// objective, and the smallest relaxation factor tried before giving up.
inline constexpr double kDescentSlack = 1e-14;
inline constexpr double kMinRelaxation = 0x1p-16;

enum class InitScheme { kUniform, kRandom };

struct OilConfig {
  double beta1 = 1.0;
  double beta2 = 1.0;
  int max_iters = 1000;
  double tol = 1e-10;
  int restarts = 0;
  InitScheme init = InitScheme::kUniform;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(beta1 >= 0.0) || !(beta2 >= 0.0))
      throw DomainError("tradeoff weights must be non-negative");
    if (max_iters < 1) throw DomainError("max_iters must be at least 1");
    if (!(tol > 0.0)) throw DomainError("tol must be positive");
    if (restarts < 0) throw DomainError("restarts must be non-negative");
  }
};

// Iteration state: current kernels plus the lagged marginals they induced.
// marg_ytilde is always the pushforward of marg_xtilde through the model.
struct AlgorithmState {
  Kernel k1;                  // X -> Xt
  Kernel k2;                  // Yt -> Y
  Distribution marg_xtilde;   // p_Xt
  Distribution marg_ytilde;   // p_Yt
  Distribution marg_y;        // p_Y
  int iter = 0;
};

struct OilSolution {
  OilSolution(Kernel k1_in, Kernel k2_in, Kernel effective_in)
      : k1(std::move(k1_in)), k2(std::move(k2_in)), effective(std::move(effective_in)) {}

  Kernel k1;
  Kernel k2;
  Kernel effective;                    // cascade K1 . kstar . K2
  std::vector<double> objective_trace; // objective before iterating, then per iteration
  std::vector<double> delta_trace;     // mean-L1 kernel change per iteration
  double objective = 0.0;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

namespace detail {

// Normalizes a column of log-scores in place into a strictly positive
// probability column.
inline void softmax_column(std::vector<double>& scores) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double s : scores) mx = std::max(mx, s);
  if (!std::isfinite(mx))
    throw NumericalError("no finite score in an update column");
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - mx);
    sum += s;
  }
  for (double& s : scores) {
    s /= sum;
    if (s < kPositivityFloor) s = kPositivityFloor;
  }
  sum = 0.0;
  for (double s : scores) sum += s;
  for (double& s : scores) s /= sum;
}

inline double safe_ratio(double numerator, double denominator, const char* where) {
  if (numerator == 0.0) return 0.0;
  if (denominator == 0.0)
    throw NumericalError(std::string("positivity violation in ") + where +
                         ": zero denominator under positive numerator");
  return numerator / denominator;
}

// Geometric interpolation between kernel columns in log space:
// col ~ old^(1-alpha) * proposed^alpha, renormalized. alpha = 1 returns the
// proposal unchanged; every alpha preserves the update's fixed points.
inline Kernel relax(const Kernel& current, const Kernel& proposed, double alpha) {
  if (alpha == 1.0) return proposed;
  const std::size_t ni = current.n_in();
  const std::size_t no = current.n_out();
  std::vector<double> flat(no * ni);
  std::vector<double> scores(no);
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t o = 0; o < no; ++o)
      scores[o] = (1.0 - alpha) * std::log(current(o, i)) + alpha * std::log(proposed(o, i));
    softmax_column(scores);
    for (std::size_t o = 0; o < no; ++o) flat[o * ni + i] = scores[o];
  }
  return Kernel(current.input_alphabet(), current.output_alphabet(), std::move(flat));
}

}  // namespace detail

// Requires the chain px -> k1 -> kstar -> k2 with matching alphabets, plus
// the comparability conditions Xt = X and Y = Yt that make the divergence
// between kstar and the cascade well defined.
inline void check_chain(const Distribution& px, const Kernel& kstar, const Kernel& k1,
                        const Kernel& k2) {
  if (k1.input_alphabet() != px.alphabet())
    throw ShapeError("input kernel does not accept the query alphabet");
  if (k1.output_alphabet() != k1.input_alphabet())
    throw ShapeError("input kernel must map the query alphabet to itself");
  if (kstar.input_alphabet() != k1.output_alphabet())
    throw ShapeError("model input alphabet does not match the input kernel");
  if (k2.input_alphabet() != kstar.output_alphabet())
    throw ShapeError("output kernel does not accept the model output alphabet");
  if (k2.output_alphabet() != k2.input_alphabet())
    throw ShapeError("output kernel must map the response alphabet to itself");
}

// The tradeoff objective. Returns +infinity when the cascade lacks support
// where the model has mass.
inline double objective(const Distribution& px, const Kernel& kstar, const Kernel& k1,
                        const Kernel& k2, double beta1, double beta2) {
  check_chain(px, kstar, k1, k2);
  const Kernel k = cascade(cascade(k1, kstar), k2);
  double value = expected_kl(px, kstar, k);
  if (beta1 != 0.0) value += beta1 * mutual_information(px, k1);
  if (beta2 != 0.0) {
    const Distribution pyt = pushforward(pushforward(px, k1), kstar);
    value += beta2 * mutual_information(pyt, k2);
  }
  return value;
}

// Four-variable surrogate of the objective. Coincides with objective() when
// h1 and h2 are the marginals induced by (k1, k2); dominates it otherwise,
// with gap beta1*KL(p_Xt || h1) + beta2*KL(p_Y || h2).
inline double j_functional(const Distribution& px, const Kernel& kstar, const Kernel& k1,
                           const Kernel& k2, const Distribution& h1, const Distribution& h2,
                           double beta1, double beta2) {
  check_chain(px, kstar, k1, k2);
  if (h1.alphabet() != k1.output_alphabet())
    throw ShapeError("h1 must live on the perturbed-input alphabet");
  if (h2.alphabet() != k2.output_alphabet())
    throw ShapeError("h2 must live on the response alphabet");
  const Kernel k = cascade(cascade(k1, kstar), k2);
  double value = expected_kl(px, kstar, k);
  if (!std::isfinite(value)) return value;
  for (std::size_t x = 0; x < px.size(); ++x) {
    if (px[x] == 0.0) continue;
    for (std::size_t xt = 0; xt < k1.n_out(); ++xt) {
      const double c = k1(xt, x);
      if (c == 0.0) continue;
      if (h1[xt] == 0.0) return std::numeric_limits<double>::infinity();
      value += beta1 * px[x] * c * std::log(c / h1[xt]);
    }
  }
  const Distribution pyt = pushforward(pushforward(px, k1), kstar);
  for (std::size_t yt = 0; yt < k2.n_in(); ++yt) {
    if (pyt[yt] == 0.0) continue;
    for (std::size_t y = 0; y < k2.n_out(); ++y) {
      const double c = k2(y, yt);
      if (c == 0.0) continue;
      if (h2[y] == 0.0) return std::numeric_limits<double>::infinity();
      value += beta2 * pyt[yt] * c * std::log(c / h2[y]);
    }
  }
  return value;
}

// One multiplicative update of the input kernel. For every input x the new
// column is proportional to
//   p_Xt(xt) * exp{ A(x, xt)/beta1 - (beta2/beta1) * B(xt) }
// where A averages the likelihood ratio of the model-plus-output cascade
// against the current effective kernel, and B is the output-leakage term.
// Uses the lagged marginals and kernels carried by the state.
inline Kernel update_k1(const AlgorithmState& state, const Distribution& px,
                        const Kernel& kstar, double beta1, double beta2) {
  if (!(beta1 > 0.0)) throw DomainError("update_k1 requires beta1 > 0");
  check_chain(px, kstar, state.k1, state.k2);
  const Kernel ks_k2 = cascade(kstar, state.k2);   // (y | xt)
  const Kernel k = cascade(state.k1, ks_k2);       // (y | x)
  const std::size_t nx = state.k1.n_in();
  const std::size_t nxt = state.k1.n_out();
  const std::size_t ny = state.k2.n_out();
  const std::size_t nyt = kstar.n_out();

  // B(xt) = sum_{yt,y} kstar(yt|xt) k2(y|yt) log( k2(y|yt) / p_Y(y) )
  std::vector<double> b_term(nxt, 0.0);
  for (std::size_t xt = 0; xt < nxt; ++xt) {
    double outer = 0.0;
    for (std::size_t yt = 0; yt < nyt; ++yt) {
      const double w = kstar(yt, xt);
      if (w == 0.0) continue;
      double inner = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        const double c = state.k2(y, yt);
        if (c == 0.0) continue;
        if (state.marg_y[y] == 0.0)
          throw NumericalError("zero response marginal under positive kernel mass");
        inner += c * std::log(c / state.marg_y[y]);
      }
      outer += w * inner;
    }
    b_term[xt] = outer;
  }

  std::vector<double> flat(nxt * nx);
  std::vector<double> scores(nxt);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t xt = 0; xt < nxt; ++xt) {
      double a_term = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        const double w = kstar(y, x);
        if (w == 0.0) continue;
        a_term += w * detail::safe_ratio(ks_k2(y, xt), k(y, x), "update_k1");
      }
      const double base = state.marg_xtilde[xt];
      scores[xt] = (base > 0.0 ? std::log(base) : -std::numeric_limits<double>::infinity()) +
                   a_term / beta1 - (beta2 / beta1) * b_term[xt];
    }
    detail::softmax_column(scores);
    for (std::size_t xt = 0; xt < nxt; ++xt) flat[xt * nx + x] = scores[xt];
  }
  return Kernel(state.k1.input_alphabet(), state.k1.output_alphabet(), std::move(flat));
}

// One multiplicative update of the output kernel. For every yt the new
// column is proportional to
//   p_Y(y) * exp{ C(yt, y) / (beta2 * p_Yt(yt)) }
// with C the model-weighted likelihood ratio taken through the mixed-step
// cascade built from the state's k1 (already advanced) and k2 (previous).
inline Kernel update_k2(const AlgorithmState& state, const Distribution& px,
                        const Kernel& kstar, double beta2) {
  if (!(beta2 > 0.0)) throw DomainError("update_k2 requires beta2 > 0");
  check_chain(px, kstar, state.k1, state.k2);
  const Kernel k1_ks = cascade(state.k1, kstar);   // (yt | x)
  const Kernel k_mix = cascade(k1_ks, state.k2);   // (y | x)
  const std::size_t nx = px.size();
  const std::size_t ny = state.k2.n_out();
  const std::size_t nyt = state.k2.n_in();

  std::vector<double> flat(ny * nyt);
  std::vector<double> scores(ny);
  for (std::size_t yt = 0; yt < nyt; ++yt) {
    const double pyt = state.marg_ytilde[yt];
    if (pyt == 0.0)
      throw DegenerateInputError("degenerate marginal: intermediate symbol has zero mass");
    for (std::size_t y = 0; y < ny; ++y) {
      double c_term = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        const double w = px[x] * kstar(y, x) * k1_ks(yt, x);
        if (w == 0.0) continue;
        c_term += detail::safe_ratio(w, k_mix(y, x), "update_k2");
      }
      const double base = state.marg_y[y];
      scores[y] = (base > 0.0 ? std::log(base) : -std::numeric_limits<double>::infinity()) +
                  c_term / (beta2 * pyt);
    }
    detail::softmax_column(scores);
    for (std::size_t y = 0; y < ny; ++y) flat[y * nyt + yt] = scores[y];
  }
  return Kernel(state.k2.input_alphabet(), state.k2.output_alphabet(), std::move(flat));
}

namespace detail {

inline AlgorithmState make_state(const Distribution& px, const Kernel& kstar, Kernel k1,
                                 Kernel k2, int iter) {
  Distribution pxt = pushforward(px, k1);
  Distribution pyt = pushforward(pxt, kstar);
  Distribution py = pushforward(pyt, k2);
  return AlgorithmState{std::move(k1), std::move(k2), std::move(pxt), std::move(pyt),
                        std::move(py), iter};
}

// Largest-acceptable-step search: tries the sticky relaxation factor and
// halves it until the candidate stops increasing the objective. The factor
// stays reduced for the remainder of the run.
inline Kernel accept_step(const Kernel& current, const Kernel& proposed, double& alpha,
                          double& objective_now,
                          const std::function<double(const Kernel&)>& objective_of) {
  while (true) {
    Kernel candidate = relax(current, proposed, alpha);
    const double value = objective_of(candidate);
    if (value <= objective_now + kDescentSlack * std::max(1.0, std::abs(objective_now)) ||
        alpha <= kMinRelaxation) {
      objective_now = value;
      return candidate;
    }
    alpha *= 0.5;
  }
}

// Residual of the stationarity equations restricted to the active kernels.
inline double partial_residual(const Distribution& px, const Kernel& kstar, const Kernel& k1,
                               const Kernel& k2, double beta1, double beta2, bool update1,
                               bool update2) {
  AlgorithmState state = make_state(px, kstar, k1, k2, 0);
  double r = 0.0;
  if (update1) r = std::max(r, max_abs_difference(update_k1(state, px, kstar, beta1, beta2), k1));
  if (update2) r = std::max(r, max_abs_difference(update_k2(state, px, kstar, beta2), k2));
  return r;
}

}  // namespace detail

// Elementwise distance between (k1, k2) and the right-hand sides of the
// stationarity equations, evaluated with self-consistent marginals. Zero at
// a fixed point of the alternating iteration.
inline double fixed_point_residual(const Distribution& px, const Kernel& kstar,
                                   const Kernel& k1, const Kernel& k2, double beta1,
                                   double beta2) {
  if (!(beta1 > 0.0) || !(beta2 > 0.0))
    throw DomainError("fixed_point_residual requires positive tradeoff weights");
  return detail::partial_residual(px, kstar, k1, k2, beta1, beta2, true, true);
}

namespace detail {

inline OilSolution run_alternation(const Distribution& px, const Kernel& kstar,
                                   Kernel k1, Kernel k2, const OilConfig& config,
                                   bool pin_k1, bool pin_k2) {
  const double b1 = config.beta1;
  const double b2 = config.beta2;
  const std::size_t nxt = k1.n_out();
  const std::size_t ny = k2.n_out();

  OilSolution out{k1, k2, cascade(cascade(k1, kstar), k2)};
  double current = objective(px, kstar, k1, k2, b1, b2);
  out.objective_trace.push_back(current);

  double alpha1 = 1.0;
  double alpha2 = 1.0;
  Distribution pxt = pushforward(px, k1);
  Distribution pyt = pushforward(pxt, kstar);
  Distribution py = pushforward(pyt, k2);

  for (int t = 0; t < config.max_iters; ++t) {
    Kernel next_k1 = k1;
    if (!pin_k1) {
      AlgorithmState state{k1, k2, pxt, pyt, py, t};
      Kernel proposal = update_k1(state, px, kstar, b1, b2);
      next_k1 = accept_step(k1, proposal, alpha1, current, [&](const Kernel& cand) {
        return objective(px, kstar, cand, k2, b1, b2);
      });
    }
    Kernel next_k2 = k2;
    if (!pin_k2) {
      AlgorithmState state{next_k1, k2, pxt, pyt, py, t};
      Kernel proposal = update_k2(state, px, kstar, b2);
      next_k2 = accept_step(k2, proposal, alpha2, current, [&](const Kernel& cand) {
        return objective(px, kstar, next_k1, cand, b1, b2);
      });
    }
    const double delta =
        (l1_distance(next_k1, k1) + l1_distance(next_k2, k2)) / static_cast<double>(nxt + ny);
    k1 = std::move(next_k1);
    k2 = std::move(next_k2);
    pxt = pushforward(px, k1);
    pyt = pushforward(pxt, kstar);
    py = pushforward(pyt, k2);
    if (!std::isfinite(current))
      throw NumericalError("non-finite objective at iteration " + std::to_string(t));
    out.objective_trace.push_back(current);
    out.delta_trace.push_back(delta);
    out.iterations = t + 1;
    if (delta < config.tol) {
      out.converged = true;
      break;
    }
  }

  out.k1 = k1;
  out.k2 = k2;
  out.effective = cascade(cascade(k1, kstar), k2);
  out.objective = current;
  out.residual = partial_residual(px, kstar, k1, k2, b1, b2, !pin_k1, !pin_k2);
  return out;
}

}  // namespace detail

// Alternating minimization of the tradeoff objective. beta = 0 weights pin
// the corresponding kernel to the identity (the closed-form limit); both
// zero returns the identity pair outright. With restarts > 0 the best of
// several seeded random initializations is returned.
inline OilSolution oil_optimize(const Distribution& px, const Kernel& kstar,
                                const OilConfig& config) {
  config.validate();
  const Alphabet& x_alpha = kstar.input_alphabet();
  const Alphabet& y_alpha = kstar.output_alphabet();
  if (px.alphabet() != x_alpha)
    throw ShapeError("query distribution does not match the model input alphabet");

  const bool pin_k1 = config.beta1 == 0.0;
  const bool pin_k2 = config.beta2 == 0.0;

  if (pin_k1 && pin_k2) {
    OilSolution out{Kernel::identity(x_alpha), Kernel::identity(y_alpha), kstar};
    out.objective = 0.0;
    out.objective_trace = {0.0};
    out.converged = true;
    return out;
  }

  const int runs = 1 + config.restarts;
  std::optional<OilSolution> best;
  for (int run = 0; run < runs; ++run) {
    Kernel k1 = Kernel::identity(x_alpha);
    Kernel k2 = Kernel::identity(y_alpha);
    const bool random_init = config.init == InitScheme::kRandom || run > 0;
    if (!pin_k1)
      k1 = random_init ? [&] {
        Rng rng(derive_seed(config.seed, 2 * static_cast<std::uint64_t>(run)));
        return random_kernel(x_alpha, x_alpha, rng);
      }()
                       : Kernel::uniform(x_alpha, x_alpha);
    if (!pin_k2)
      k2 = random_init ? [&] {
        Rng rng(derive_seed(config.seed, 2 * static_cast<std::uint64_t>(run) + 1));
        return random_kernel(y_alpha, y_alpha, rng);
      }()
                       : Kernel::uniform(y_alpha, y_alpha);
    OilSolution sol =
        detail::run_alternation(px, kstar, std::move(k1), std::move(k2), config, pin_k1, pin_k2);
    if (!best || sol.objective < best->objective) best = std::move(sol);
  }
  return *std::move(best);
}

}  // namespace oil

#endif  // OIL_ENGINE_HPP
