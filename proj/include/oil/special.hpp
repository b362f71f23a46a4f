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
// Closed-form limits and fast-path solvers for the one-sided laundering
// problems: output-only (from observed output frequencies or a full model),
// input-only, and the simplified joint updates for deterministic models.

#ifndef OIL_SPECIAL_HPP
#define OIL_SPECIAL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "oil/engine.hpp"

namespace oil {

// beta -> 0 limit: no laundering at all.
inline Kernel beta_zero_kernel(const Alphabet& alphabet) { return Kernel::identity(alphabet); }

// beta -> infinity limit: output independent of input, every column equals
// the marginal.
inline Kernel beta_infinity_kernel(const Distribution& marginal) {
  return Kernel::constant_columns(marginal.alphabet(), marginal);
}

// Output-only problem stated purely in terms of the frequency vector r of
// authentic model outputs.
struct OilYInput {
  Distribution r;
  double beta2 = 1.0;
  int max_iters = 1000;
  double tol = 1e-10;

  void validate() const {
    if (beta2 < 0.0) throw DomainError("beta2 must be non-negative");
    if (max_iters < 1) throw DomainError("max_iters must be at least 1");
    if (!(tol > 0.0)) throw DomainError("tol must be positive");
  }
};

struct OilYResult {
  explicit OilYResult(Kernel kernel_in) : kernel(std::move(kernel_in)) {}

  Kernel kernel;                        // Y -> Y output perturbation
  std::vector<double> delta_trace;      // ||P(t+1) - P(t)||_1 / a per iteration
  std::vector<double> objective_trace;  // objective before iterating, then per iteration
  double objective = 0.0;
  double residual = 0.0;                // max |final - stationarity RHS(final)|
  bool converged = false;
  int iterations = 0;
};

// Output-only objective evaluated from the frequency vector:
//   -sum_y r(y) log P(y|y) + beta2 * I(Yt; Y).
// This equals the full objective for a deterministic model whose output
// frequencies are r and an identity input kernel.
inline double oil_y_objective(const Distribution& r, const Kernel& p, double beta2) {
  if (p.input_alphabet() != r.alphabet() || p.output_alphabet() != r.alphabet())
    throw ShapeError("oil_y_objective requires a square kernel on the alphabet of r");
  double value = 0.0;
  for (std::size_t y = 0; y < r.size(); ++y) {
    if (r[y] == 0.0) continue;
    const double d = p(y, y);
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    value -= r[y] * std::log(d);
  }
  return value + beta2 * mutual_information(r, p);
}

namespace detail {

// Indices with positive mass; the solvers iterate on this subalphabet and
// reinsert dropped symbols as identity columns afterwards.
inline std::vector<std::size_t> support_of(const Distribution& d) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (d[i] > 0.0) idx.push_back(i);
  return idx;
}

inline Kernel embed_active(const Alphabet& full, const std::vector<std::size_t>& active,
                           const Kernel& reduced) {
  const std::size_t n = full.size();
  std::vector<double> flat(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) flat[i * n + i] = 1.0;
  for (std::size_t cj = 0; cj < active.size(); ++cj) {
    const std::size_t j = active[cj];
    flat[j * n + j] = 0.0;
    for (std::size_t ci = 0; ci < active.size(); ++ci)
      flat[active[ci] * n + j] = reduced(ci, cj);
  }
  return Kernel(full, full, std::move(flat));
}

}  // namespace detail

// Output-only solver driven by observed output frequencies. Iterates the
// diagonal-boost recursion in matrix form: every column of the proposal is
// the current response marginal q, the diagonal is multiplied by
// exp{ 1 / (beta2 * diag(P_prev)) }, columns are renormalized, and
// q <- P r. A backtracked relaxation factor keeps the objective monotone
// when the plain step overshoots.
inline OilYResult oil_y(const OilYInput& input, const Kernel* initial = nullptr) {
  input.validate();
  const Alphabet& full = input.r.alphabet();
  const std::size_t a_full = full.size();

  if (input.beta2 == 0.0) {
    OilYResult out{beta_zero_kernel(full)};
    out.objective = 0.0;
    out.objective_trace = {0.0};
    out.converged = true;
    return out;
  }

  const std::vector<std::size_t> active = detail::support_of(input.r);
  if (active.empty()) throw DegenerateInputError("frequency vector has no positive mass");
  const std::size_t a = active.size();
  const Alphabet sub = [&] {
    std::vector<std::string> labels;
    for (std::size_t i : active) labels.push_back(full.label(i));
    return Alphabet(std::move(labels));
  }();
  std::vector<double> rsub(a);
  for (std::size_t i = 0; i < a; ++i) rsub[i] = input.r[active[i]];
  const Distribution r(sub, rsub);

  Kernel p = Kernel::uniform(sub, sub);
  if (initial != nullptr) {
    if (initial->input_alphabet() != full || initial->output_alphabet() != full)
      throw ShapeError("initial kernel must be square on the alphabet of r");
    std::vector<double> flat(a * a);
    for (std::size_t j = 0; j < a; ++j) {
      double colsum = 0.0;
      for (std::size_t i = 0; i < a; ++i) colsum += (*initial)(active[i], active[j]);
      if (colsum <= 0.0)
        throw DomainError("initial kernel has no mass on the active subalphabet");
      for (std::size_t i = 0; i < a; ++i)
        flat[i * a + j] = std::max((*initial)(active[i], active[j]) / colsum, kPositivityFloor);
    }
    p = Kernel(sub, sub, std::move(flat));
  }
  Distribution q = initial ? pushforward(r, p) : Distribution::uniform(sub);

  OilYResult out{p};
  double current = oil_y_objective(r, p, input.beta2);
  out.objective_trace.push_back(current);
  double alpha = 1.0;

  const auto make_proposal = [&](const Kernel& pk, const Distribution& qk) {
    std::vector<double> flat(a * a);
    std::vector<double> scores(a);
    for (std::size_t yt = 0; yt < a; ++yt) {
      const double boost = 1.0 / (input.beta2 * pk(yt, yt));
      if (!std::isfinite(boost)) throw NumericalError("non-finite diagonal boost");
      for (std::size_t y = 0; y < a; ++y) {
        scores[y] = (qk[y] > 0.0 ? std::log(qk[y]) : -std::numeric_limits<double>::infinity());
        if (y == yt) scores[y] += boost;
      }
      detail::softmax_column(scores);
      for (std::size_t y = 0; y < a; ++y) flat[y * a + yt] = scores[y];
    }
    return Kernel(sub, sub, std::move(flat));
  };

  for (int t = 0; t < input.max_iters; ++t) {
    Kernel proposal = make_proposal(p, q);
    Kernel next = detail::accept_step(p, proposal, alpha, current, [&](const Kernel& cand) {
      return oil_y_objective(r, cand, input.beta2);
    });
    const double delta = l1_distance(next, p) / static_cast<double>(a_full);
    p = std::move(next);
    q = pushforward(r, p);
    if (!std::isfinite(current))
      throw NumericalError("non-finite objective at iteration " + std::to_string(t));
    out.objective_trace.push_back(current);
    out.delta_trace.push_back(delta);
    out.iterations = t + 1;
    if (delta < input.tol) {
      out.converged = true;
      break;
    }
  }

  out.residual = max_abs_difference(make_proposal(p, q), p);
  out.kernel = a == a_full ? p : detail::embed_active(full, active, p);
  out.objective = current;
  return out;
}

// Output-only solver for an arbitrary (possibly stochastic) model: the
// fixed-point iteration of the output stationarity equation with a marginal
// refresh each step. Equivalent to the joint alternation with the input
// kernel pinned to the identity.
inline OilYResult oil_y_general(const Distribution& px, const Kernel& kstar, double beta2,
                                int max_iters = 1000, double tol = 1e-10) {
  if (beta2 < 0.0) throw DomainError("beta2 must be non-negative");
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (px.alphabet() != kstar.input_alphabet())
    throw ShapeError("query distribution does not match the model input alphabet");
  const Alphabet& full = kstar.output_alphabet();
  const std::size_t ny_full = full.size();

  if (beta2 == 0.0) {
    OilYResult out{beta_zero_kernel(full)};
    out.objective = 0.0;
    out.objective_trace = {0.0};
    out.converged = true;
    return out;
  }

  const Distribution pyt_full = pushforward(px, kstar);
  const std::vector<std::size_t> active = detail::support_of(pyt_full);
  const std::size_t m = active.size();
  std::vector<double> pyt_sub(m);
  for (std::size_t i = 0; i < m; ++i) pyt_sub[i] = pyt_full[active[i]];

  const std::size_t nx = px.size();
  // Model restricted to active output rows, as seen from inputs with mass.
  auto kstar_at = [&](std::size_t row, std::size_t x) { return kstar(active[row], x); };

  std::vector<double> p(m * m, 1.0 / static_cast<double>(m));  // reduced kernel [y][yt]
  std::vector<double> py(m, 1.0 / static_cast<double>(m));     // response marginal

  auto objective_of = [&](const std::vector<double>& pm) {
    // expected KL + beta2 * I(Yt; Y) on the reduced support
    double value = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      if (px[x] == 0.0) continue;
      for (std::size_t y = 0; y < m; ++y) {
        const double w = kstar_at(y, x);
        if (w == 0.0) continue;
        double kc = 0.0;  // cascade (y | x)
        for (std::size_t yt = 0; yt < m; ++yt) kc += pm[y * m + yt] * kstar_at(yt, x);
        if (kc == 0.0) return std::numeric_limits<double>::infinity();
        value += px[x] * w * std::log(w / kc);
      }
    }
    std::vector<double> marg(m, 0.0);
    for (std::size_t y = 0; y < m; ++y)
      for (std::size_t yt = 0; yt < m; ++yt) marg[y] += pm[y * m + yt] * pyt_sub[yt];
    double mi = 0.0;
    for (std::size_t yt = 0; yt < m; ++yt)
      for (std::size_t y = 0; y < m; ++y) {
        const double c = pm[y * m + yt];
        if (c > 0.0 && marg[y] > 0.0) mi += pyt_sub[yt] * c * std::log(c / marg[y]);
      }
    return value + beta2 * mi;
  };

  OilYResult out{Kernel::uniform(full, full)};
  double current = objective_of(p);
  out.objective_trace.push_back(current);
  double alpha = 1.0;

  std::vector<double> kc(m * nx);  // cascade (y | x) under the previous kernel
  const auto make_proposal = [&](const std::vector<double>& pm, const std::vector<double>& pym) {
    for (std::size_t y = 0; y < m; ++y)
      for (std::size_t x = 0; x < nx; ++x) {
        double acc = 0.0;
        for (std::size_t yt = 0; yt < m; ++yt) acc += pm[y * m + yt] * kstar_at(yt, x);
        kc[y * nx + x] = acc;
      }
    std::vector<double> proposal(m * m);
    std::vector<double> scores(m);
    for (std::size_t yt = 0; yt < m; ++yt) {
      for (std::size_t y = 0; y < m; ++y) {
        double c_term = 0.0;
        for (std::size_t x = 0; x < nx; ++x) {
          const double w = px[x] * kstar_at(y, x) * kstar_at(yt, x);
          if (w == 0.0) continue;
          c_term += detail::safe_ratio(w, kc[y * nx + x], "oil_y_general");
        }
        scores[y] = (pym[y] > 0.0 ? std::log(pym[y]) : -std::numeric_limits<double>::infinity()) +
                    c_term / (beta2 * pyt_sub[yt]);
      }
      detail::softmax_column(scores);
      for (std::size_t y = 0; y < m; ++y) proposal[y * m + yt] = scores[y];
    }
    return proposal;
  };

  for (int t = 0; t < max_iters; ++t) {
    std::vector<double> proposal = make_proposal(p, py);
    // backtracked acceptance in the flat representation
    double step = alpha;
    std::vector<double> next;
    while (true) {
      if (step == 1.0) {
        next = proposal;
      } else {
        next.assign(m * m, 0.0);
        std::vector<double> col(m);
        for (std::size_t yt = 0; yt < m; ++yt) {
          for (std::size_t y = 0; y < m; ++y)
            col[y] = (1.0 - step) * std::log(p[y * m + yt]) + step * std::log(proposal[y * m + yt]);
          detail::softmax_column(col);
          for (std::size_t y = 0; y < m; ++y) next[y * m + yt] = col[y];
        }
      }
      const double value = objective_of(next);
      if (value <= current + kDescentSlack * std::max(1.0, std::abs(current)) ||
          step <= kMinRelaxation) {
        current = value;
        alpha = step;
        break;
      }
      step *= 0.5;
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < m * m; ++i) delta += std::abs(next[i] - p[i]);
    delta /= static_cast<double>(ny_full);
    p = std::move(next);
    for (std::size_t y = 0; y < m; ++y) {
      double acc = 0.0;
      for (std::size_t yt = 0; yt < m; ++yt) acc += p[y * m + yt] * pyt_sub[yt];
      py[y] = acc;
    }
    if (!std::isfinite(current))
      throw NumericalError("non-finite objective at iteration " + std::to_string(t));
    out.objective_trace.push_back(current);
    out.delta_trace.push_back(delta);
    out.iterations = t + 1;
    if (delta < tol) {
      out.converged = true;
      break;
    }
  }

  {
    const std::vector<double> final_proposal = make_proposal(p, py);
    double r = 0.0;
    for (std::size_t i = 0; i < m * m; ++i) r = std::max(r, std::abs(final_proposal[i] - p[i]));
    out.residual = r;
  }
  const Alphabet sub = [&] {
    std::vector<std::string> labels;
    for (std::size_t i : active) labels.push_back(full.label(i));
    return Alphabet(std::move(labels));
  }();
  Kernel reduced(sub, sub, std::move(p));
  out.kernel = m == ny_full ? std::move(reduced) : detail::embed_active(full, active, reduced);
  out.objective = current;
  return out;
}

// Input-only solver: fixed-point iteration of the input stationarity
// equation with the output kernel pinned to the identity. For deterministic
// models the exponent collapses to an indicator over the fibers of f.
inline OilYResult oil_x(const Distribution& px, const Kernel& kstar, double beta1,
                        int max_iters = 1000, double tol = 1e-10) {
  if (beta1 < 0.0) throw DomainError("beta1 must be non-negative");
  if (max_iters < 1) throw DomainError("max_iters must be at least 1");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (px.alphabet() != kstar.input_alphabet())
    throw ShapeError("query distribution does not match the model input alphabet");
  const Alphabet& xa = kstar.input_alphabet();
  const std::size_t nx = xa.size();
  const std::size_t ny = kstar.n_out();

  if (beta1 == 0.0) {
    OilYResult out{beta_zero_kernel(xa)};
    out.objective = 0.0;
    out.objective_trace = {0.0};
    out.converged = true;
    return out;
  }

  Kernel k1 = Kernel::uniform(xa, xa);
  Distribution pxt = pushforward(px, k1);
  auto objective_of = [&](const Kernel& cand) {
    return expected_kl(px, kstar, cascade(cand, kstar)) + beta1 * mutual_information(px, cand);
  };

  OilYResult out{k1};
  double current = objective_of(k1);
  out.objective_trace.push_back(current);
  double alpha = 1.0;

  const auto make_proposal = [&](const Kernel& cand, const Distribution& pxt_now) {
    const Kernel k = cascade(cand, kstar);  // (y | x)
    std::vector<double> flat(nx * nx);
    std::vector<double> scores(nx);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t xt = 0; xt < nx; ++xt) {
        double a_term = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
          const double w = kstar(y, x) * kstar(y, xt);
          if (w == 0.0) continue;
          a_term += detail::safe_ratio(w, k(y, x), "oil_x");
        }
        scores[xt] =
            (pxt_now[xt] > 0.0 ? std::log(pxt_now[xt]) : -std::numeric_limits<double>::infinity()) +
            a_term / beta1;
      }
      detail::softmax_column(scores);
      for (std::size_t xt = 0; xt < nx; ++xt) flat[xt * nx + x] = scores[xt];
    }
    return Kernel(xa, xa, std::move(flat));
  };

  for (int t = 0; t < max_iters; ++t) {
    Kernel proposal = make_proposal(k1, pxt);
    Kernel next = detail::accept_step(k1, proposal, alpha, current, objective_of);
    const double delta = l1_distance(next, k1) / static_cast<double>(nx);
    k1 = std::move(next);
    pxt = pushforward(px, k1);
    if (!std::isfinite(current))
      throw NumericalError("non-finite objective at iteration " + std::to_string(t));
    out.objective_trace.push_back(current);
    out.delta_trace.push_back(delta);
    out.iterations = t + 1;
    if (delta < tol) {
      out.converged = true;
      break;
    }
  }
  out.residual = max_abs_difference(make_proposal(k1, pxt), k1);
  out.kernel = k1;
  out.objective = current;
  return out;
}

// One step of the simplified joint updates for a deterministic model. The
// sums over the output collapse to sums over the fibers of f. Must agree
// elementwise with the general updates applied to one_hot_kernel(f); the
// general path is the cross-check, this is the fast path.
inline std::pair<Kernel, Kernel> joint_deterministic_updates(const AlgorithmState& state,
                                                             const Distribution& px,
                                                             const DeterministicModel& f,
                                                             double beta1, double beta2) {
  if (!(beta1 > 0.0) || !(beta2 > 0.0))
    throw DomainError("joint updates require positive tradeoff weights");
  const std::size_t nx = f.input_alphabet().size();
  const std::size_t ny = f.output_alphabet().size();
  if (state.k1.n_in() != nx || state.k2.n_in() != ny)
    throw ShapeError("state kernels do not match the model alphabets");

  const Kernel& k1 = state.k1;
  const Kernel& k2 = state.k2;
  const Distribution& pxt = state.marg_xtilde;
  const Distribution& pyt = state.marg_ytilde;
  const Distribution& py = state.marg_y;

  // B(xt) = sum_y k2(y | f(xt)) log( k2(y | f(xt)) / p_Y(y) )
  std::vector<double> b_by_output(ny, 0.0);
  for (std::size_t yt = 0; yt < ny; ++yt) {
    double inner = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      const double c = k2(y, yt);
      if (c == 0.0) continue;
      if (py[y] == 0.0)
        throw NumericalError("zero response marginal under positive kernel mass");
      inner += c * std::log(c / py[y]);
    }
    b_by_output[yt] = inner;
  }

  // p_K(f(x) | x) = sum_xt' k1(xt' | x) k2(f(x) | f(xt'))
  std::vector<double> flat1(nx * nx);
  std::vector<double> scores(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    const std::size_t fx = static_cast<std::size_t>(f(x));
    double k_fx = 0.0;
    for (std::size_t xt = 0; xt < nx; ++xt)
      k_fx += k2(fx, static_cast<std::size_t>(f(xt))) * k1(xt, x);
    for (std::size_t xt = 0; xt < nx; ++xt) {
      const std::size_t fxt = static_cast<std::size_t>(f(xt));
      const double a_term = detail::safe_ratio(k2(fx, fxt), k_fx, "joint update k1");
      scores[xt] = (pxt[xt] > 0.0 ? std::log(pxt[xt]) : -std::numeric_limits<double>::infinity()) +
                   a_term / beta1 - (beta2 / beta1) * b_by_output[fxt];
    }
    detail::softmax_column(scores);
    for (std::size_t xt = 0; xt < nx; ++xt) flat1[xt * nx + x] = scores[xt];
  }
  Kernel next_k1(f.input_alphabet(), f.input_alphabet(), std::move(flat1));

  // k1_ks(yt | x) = sum over the f-fiber of yt of k1(xt | x)
  std::vector<double> k1_ks(ny * nx, 0.0);
  for (std::size_t yt = 0; yt < ny; ++yt)
    for (std::size_t xt = 0; xt < nx; ++xt) {
      if (static_cast<std::size_t>(f(xt)) != yt) continue;
      for (std::size_t x = 0; x < nx; ++x) k1_ks[yt * nx + x] += k1(xt, x) * 1.0;
    }
  // k_mix(y | x) = sum_xt k2(y | f(xt)) k1(xt | x), with the state's k1
  std::vector<double> k_mix(ny * nx, 0.0);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t yt = 0; yt < ny; ++yt) {
      const double s = k2(y, yt);
      if (s == 0.0) continue;
      for (std::size_t x = 0; x < nx; ++x) k_mix[y * nx + x] += s * k1_ks[yt * nx + x];
    }

  std::vector<double> flat2(ny * ny);
  std::vector<double> scores2(ny);
  for (std::size_t yt = 0; yt < ny; ++yt) {
    if (pyt[yt] == 0.0)
      throw DegenerateInputError("degenerate marginal: intermediate symbol has zero mass");
    for (std::size_t y = 0; y < ny; ++y) {
      double c_term = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        if (static_cast<std::size_t>(f(x)) != y) continue;
        const double w = px[x] * 1.0 * k1_ks[yt * nx + x];
        if (w == 0.0) continue;
        c_term += detail::safe_ratio(w, k_mix[y * nx + x], "joint update k2");
      }
      scores2[y] = (py[y] > 0.0 ? std::log(py[y]) : -std::numeric_limits<double>::infinity()) +
                   c_term / (beta2 * pyt[yt]);
    }
    detail::softmax_column(scores2);
    for (std::size_t y = 0; y < ny; ++y) flat2[y * ny + yt] = scores2[y];
  }
  Kernel next_k2(f.output_alphabet(), f.output_alphabet(), std::move(flat2));

  return {std::move(next_k1), std::move(next_k2)};
}

}  // namespace oil

#endif  // OIL_SPECIAL_HPP
