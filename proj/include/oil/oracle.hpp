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
// Brute-force global minimizers over discretized column-stochastic kernels.
// Ground truth for tiny instances; deterministic, lexicographic tie-break.

#ifndef OIL_ORACLE_HPP
#define OIL_ORACLE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "oil/engine.hpp"
#include "oil/kernel.hpp"

namespace oil {

struct GridSpec {
  double step = 1e-3;          // resolution on the probability simplex
  std::size_t max_dims = 3;    // largest alphabet accepted
  double max_evals = 1e7;      // enumeration budget

  void validate() const {
    if (!(step > 0.0) || step > 0.5) throw DomainError("grid step must lie in (0, 0.5]");
    if (max_dims < 1) throw DomainError("max_dims must be at least 1");
    if (!(max_evals >= 1.0)) throw DomainError("max_evals must be at least 1");
  }
};

namespace detail {

inline void simplex_grid_rec(std::size_t dim, std::size_t m, std::size_t level,
                             std::size_t remaining, std::vector<std::size_t>& c,
                             std::vector<std::vector<double>>& out) {
  if (level + 1 == dim) {
    c[level] = remaining;
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < dim; ++i)
      p[i] = static_cast<double>(c[i]) / static_cast<double>(m);
    out.push_back(std::move(p));
    return;
  }
  for (std::size_t v = 0; v <= remaining; ++v) {
    c[level] = v;
    simplex_grid_rec(dim, m, level + 1, remaining - v, c, out);
  }
}

// All points of the simplex grid with denominator m, one row per point, in
// lexicographic order of the integer compositions.
inline std::vector<std::vector<double>> simplex_grid(std::size_t dim, std::size_t m) {
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> c(dim, 0);
  simplex_grid_rec(dim, m, 0, m, c, points);
  return points;
}

inline double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

inline std::size_t grid_denominator(double step) {
  return static_cast<std::size_t>(std::llround(1.0 / step));
}

inline void check_budget(double total, const GridSpec& grid) {
  if (total > grid.max_evals)
    throw BudgetError("grid enumeration needs " + std::to_string(total) +
                      " evaluations, budget is " + std::to_string(grid.max_evals));
}

// Advances a mixed-radix odometer; returns false after the last state.
inline bool advance(std::vector<std::size_t>& digits, std::size_t radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix) return true;
    digits[i] = 0;
  }
  return false;
}

}  // namespace detail

// Global minimizer of the output-only objective over all column-stochastic
// matrices on the step grid. Optional dump (a = 2 only) writes one CSV row
// per grid point: flattened kernel entries then the objective.
inline std::pair<Kernel, double> grid_search_oil_y(const Distribution& r, double beta2,
                                                   const GridSpec& grid,
                                                   std::ostream* dump = nullptr) {
  grid.validate();
  const std::size_t a = r.size();
  if (a > grid.max_dims)
    throw BudgetError("alphabet size " + std::to_string(a) + " exceeds max_dims " +
                      std::to_string(grid.max_dims));
  if (dump != nullptr && a != 2) throw DomainError("grid dump is only supported for a = 2");
  const std::size_t m = detail::grid_denominator(grid.step);
  const double per_column = detail::binomial(m + a - 1, a - 1);
  detail::check_budget(std::pow(per_column, static_cast<double>(a)), grid);

  const auto points = detail::simplex_grid(a, m);
  std::vector<std::size_t> choice(a, 0);  // column -> grid point index
  std::vector<double> marg(a);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_choice;

  if (dump != nullptr) *dump << "p00,p10,p01,p11,objective\n";
  do {
    // objective = -sum_y r(y) log P(y|y) + beta2 * I(r, P)
    double value = 0.0;
    bool infinite = false;
    for (std::size_t y = 0; y < a && !infinite; ++y) {
      if (r[y] == 0.0) continue;
      const double d = points[choice[y]][y];
      if (d == 0.0) infinite = true;
      else value -= r[y] * std::log(d);
    }
    if (!infinite) {
      for (std::size_t y = 0; y < a; ++y) {
        double acc = 0.0;
        for (std::size_t yt = 0; yt < a; ++yt) acc += points[choice[yt]][y] * r[yt];
        marg[y] = acc;
      }
      double mi = 0.0;
      for (std::size_t yt = 0; yt < a; ++yt) {
        if (r[yt] == 0.0) continue;
        for (std::size_t y = 0; y < a; ++y) {
          const double c = points[choice[yt]][y];
          if (c > 0.0 && marg[y] > 0.0) mi += r[yt] * c * std::log(c / marg[y]);
        }
      }
      value += beta2 * mi;
      if (dump != nullptr) {
        const auto& c0 = points[choice[0]];
        const auto& c1 = points[choice[1]];
        *dump << c0[0] << ',' << c0[1] << ',' << c1[0] << ',' << c1[1] << ',' << value << '\n';
      }
      if (value < best) {
        best = value;
        best_choice = choice;
      }
    } else if (dump != nullptr) {
      const auto& c0 = points[choice[0]];
      const auto& c1 = points[choice[1]];
      *dump << c0[0] << ',' << c0[1] << ',' << c1[0] << ',' << c1[1] << ",inf\n";
    }
  } while (detail::advance(choice, points.size()));

  std::vector<double> flat(a * a);
  for (std::size_t yt = 0; yt < a; ++yt)
    for (std::size_t y = 0; y < a; ++y) flat[y * a + yt] = points[best_choice[yt]][y];
  return {Kernel(r.alphabet(), r.alphabet(), std::move(flat)), best};
}

// Global minimizer of the input-only objective for a deterministic model.
inline std::pair<Kernel, double> grid_search_oil_x(const Distribution& px,
                                                   const DeterministicModel& f, double beta1,
                                                   const GridSpec& grid) {
  grid.validate();
  if (px.alphabet() != f.input_alphabet())
    throw ShapeError("query distribution does not match the model input alphabet");
  const std::size_t nx = px.size();
  if (nx > grid.max_dims)
    throw BudgetError("alphabet size " + std::to_string(nx) + " exceeds max_dims " +
                      std::to_string(grid.max_dims));
  const std::size_t m = detail::grid_denominator(grid.step);
  const double per_column = detail::binomial(m + nx - 1, nx - 1);
  detail::check_budget(std::pow(per_column, static_cast<double>(nx)), grid);

  const auto points = detail::simplex_grid(nx, m);
  std::vector<std::size_t> choice(nx, 0);
  std::vector<double> marg(nx);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_choice;

  do {
    double value = 0.0;
    bool infinite = false;
    for (std::size_t x = 0; x < nx && !infinite; ++x) {
      if (px[x] == 0.0) continue;
      double fiber = 0.0;  // cascade mass landing on f(x)
      for (std::size_t xt = 0; xt < nx; ++xt)
        if (f(xt) == f(x)) fiber += points[choice[x]][xt];
      if (fiber == 0.0) infinite = true;
      else value -= px[x] * std::log(fiber);
    }
    if (!infinite) {
      for (std::size_t xt = 0; xt < nx; ++xt) {
        double acc = 0.0;
        for (std::size_t x = 0; x < nx; ++x) acc += points[choice[x]][xt] * px[x];
        marg[xt] = acc;
      }
      double mi = 0.0;
      for (std::size_t x = 0; x < nx; ++x) {
        if (px[x] == 0.0) continue;
        for (std::size_t xt = 0; xt < nx; ++xt) {
          const double c = points[choice[x]][xt];
          if (c > 0.0 && marg[xt] > 0.0) mi += px[x] * c * std::log(c / marg[xt]);
        }
      }
      value += beta1 * mi;
      if (value < best) {
        best = value;
        best_choice = choice;
      }
    }
  } while (detail::advance(choice, points.size()));

  std::vector<double> flat(nx * nx);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t xt = 0; xt < nx; ++xt) flat[xt * nx + x] = points[best_choice[x]][xt];
  return {Kernel(px.alphabet(), px.alphabet(), std::move(flat)), best};
}

// Joint enumeration over (K1, K2) pairs; practical only for two-symbol
// alphabets. Returns the global minimizer pair and its objective.
inline std::tuple<Kernel, Kernel, double> exhaustive_objective_scan(const Distribution& px,
                                                                    const Kernel& kstar,
                                                                    double beta1, double beta2,
                                                                    const GridSpec& grid) {
  grid.validate();
  const std::size_t nx = px.size();
  const std::size_t ny = kstar.n_out();
  if (px.alphabet() != kstar.input_alphabet())
    throw ShapeError("query distribution does not match the model input alphabet");
  if (nx > grid.max_dims || ny > grid.max_dims)
    throw BudgetError("alphabet size exceeds max_dims " + std::to_string(grid.max_dims));
  const std::size_t m = detail::grid_denominator(grid.step);
  const double cx = detail::binomial(m + nx - 1, nx - 1);
  const double cy = detail::binomial(m + ny - 1, ny - 1);
  detail::check_budget(std::pow(cx, static_cast<double>(nx)) *
                           std::pow(cy, static_cast<double>(ny)),
                       grid);

  const auto xpoints = detail::simplex_grid(nx, m);
  const auto ypoints = detail::simplex_grid(ny, m);
  std::vector<std::size_t> k1_choice(nx, 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_k1, best_k2;

  std::vector<double> kc(ny * nx);     // kstar . K2 then K1, as (y | x)
  std::vector<double> ks_k2(ny * nx);  // (y | xt)
  std::vector<double> pxt(nx), pyt(ny), py(ny);
  do {
    for (std::size_t xt = 0; xt < nx; ++xt) {
      double acc = 0.0;
      for (std::size_t x = 0; x < nx; ++x) acc += xpoints[k1_choice[x]][xt] * px[x];
      pxt[xt] = acc;
    }
    for (std::size_t yt = 0; yt < ny; ++yt) {
      double acc = 0.0;
      for (std::size_t xt = 0; xt < nx; ++xt) acc += kstar(yt, xt) * pxt[xt];
      pyt[yt] = acc;
    }
    double mi1 = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      if (px[x] == 0.0) continue;
      for (std::size_t xt = 0; xt < nx; ++xt) {
        const double c = xpoints[k1_choice[x]][xt];
        if (c > 0.0 && pxt[xt] > 0.0) mi1 += px[x] * c * std::log(c / pxt[xt]);
      }
    }
    std::vector<std::size_t> k2_choice(ny, 0);
    do {
      double value = beta1 * mi1;
      // ks_k2(y | xt) = sum_yt K2(y | yt) kstar(yt | xt)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t xt = 0; xt < nx; ++xt) {
          double acc = 0.0;
          for (std::size_t yt = 0; yt < ny; ++yt)
            acc += ypoints[k2_choice[yt]][y] * kstar(yt, xt);
          ks_k2[y * nx + xt] = acc;
        }
      bool infinite = false;
      for (std::size_t x = 0; x < nx && !infinite; ++x) {
        for (std::size_t y = 0; y < ny; ++y) {
          double acc = 0.0;
          for (std::size_t xt = 0; xt < nx; ++xt)
            acc += ks_k2[y * nx + xt] * xpoints[k1_choice[x]][xt];
          kc[y * nx + x] = acc;
          const double w = kstar(y, x);
          if (w == 0.0 || px[x] == 0.0) continue;
          if (acc == 0.0) {
            infinite = true;
            break;
          }
          value += px[x] * w * std::log(w / acc);
        }
      }
      if (!infinite) {
        for (std::size_t y = 0; y < ny; ++y) {
          double acc = 0.0;
          for (std::size_t yt = 0; yt < ny; ++yt) acc += ypoints[k2_choice[yt]][y] * pyt[yt];
          py[y] = acc;
        }
        double mi2 = 0.0;
        for (std::size_t yt = 0; yt < ny; ++yt) {
          if (pyt[yt] == 0.0) continue;
          for (std::size_t y = 0; y < ny; ++y) {
            const double c = ypoints[k2_choice[yt]][y];
            if (c > 0.0 && py[y] > 0.0) mi2 += pyt[yt] * c * std::log(c / py[y]);
          }
        }
        value += beta2 * mi2;
        if (value < best) {
          best = value;
          best_k1 = k1_choice;
          best_k2 = k2_choice;
        }
      }
    } while (detail::advance(k2_choice, ypoints.size()));
  } while (detail::advance(k1_choice, xpoints.size()));

  std::vector<double> f1(nx * nx), f2(ny * ny);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t xt = 0; xt < nx; ++xt) f1[xt * nx + x] = xpoints[best_k1[x]][xt];
  for (std::size_t yt = 0; yt < ny; ++yt)
    for (std::size_t y = 0; y < ny; ++y) f2[y * ny + yt] = ypoints[best_k2[yt]][y];
  return {Kernel(px.alphabet(), px.alphabet(), std::move(f1)),
          Kernel(kstar.output_alphabet(), kstar.output_alphabet(), std::move(f2)), best};
}

}  // namespace oil

#endif  // OIL_ORACLE_HPP
