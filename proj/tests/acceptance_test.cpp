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
// Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "oil/oil.hpp"

namespace oil {
namespace {

namespace fs = std::filesystem;

class Acceptance : public ::testing::Test {
 protected:
  void TearDown() override {
    std::cout << "[ACCEPTANCE] " << label_ << ": " << (HasFailure() ? "FAIL" : "PASS")
              << " (" << elapsed() << " s)" << std::endl;
  }
  void begin(const std::string& label) {
    label_ = label;
    start_ = std::chrono::steady_clock::now();
  }
  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  std::string label_;
  std::chrono::steady_clock::time_point start_;
};

Alphabet ab(std::size_t n) { return Alphabet::of_size(n); }

struct RandomInstance {
  Distribution px;
  Kernel kstar;
  double beta1;
  double beta2;
};

RandomInstance make_instance(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t nx = 2 + rng.next_u64() % 9;  // 2..10
  const std::size_t ny = 2 + rng.next_u64() % 9;
  Distribution px(ab(nx), random_simplex(nx, rng));
  Kernel kstar = random_kernel(ab(nx), ab(ny), rng);
  const double grid[3] = {0.5, 1.0, 5.0};
  const double b1 = grid[rng.next_u64() % 3];
  const double b2 = grid[rng.next_u64() % 3];
  return {std::move(px), std::move(kstar), b1, b2};
}

TEST_F(Acceptance, C1MonotoneDescent) {
  begin("C1 monotone-descent");
  for (int inst = 0; inst < 20; ++inst) {
    const RandomInstance in = make_instance(derive_seed(1001, inst));
    OilConfig config;
    config.beta1 = in.beta1;
    config.beta2 = in.beta2;
    config.max_iters = 5000;
    config.tol = 1e-10;
    const OilSolution sol = oil_optimize(in.px, in.kstar, config);
    for (std::size_t t = 1; t < sol.objective_trace.size(); ++t)
      EXPECT_LE(sol.objective_trace[t], sol.objective_trace[t - 1] + 1e-9)
          << "instance " << inst << " iteration " << t;
  }
  EXPECT_LT(elapsed(), 30.0);
}

TEST_F(Acceptance, C2FixedPointSatisfaction) {
  begin("C2 fixed-point-residual");
  for (int inst = 0; inst < 20; ++inst) {
    const RandomInstance in = make_instance(derive_seed(1001, inst));
    OilConfig config;
    config.beta1 = in.beta1;
    config.beta2 = in.beta2;
    config.max_iters = 5000;
    config.tol = 1e-10;
    const OilSolution sol = oil_optimize(in.px, in.kstar, config);
    ASSERT_TRUE(sol.converged) << "instance " << inst;
    EXPECT_LT(fixed_point_residual(in.px, in.kstar, sol.k1, sol.k2, in.beta1, in.beta2), 1e-6)
        << "instance " << inst;
  }
  EXPECT_LT(elapsed(), 30.0);
}

TEST_F(Acceptance, C3OutputOnlyGlobalMinimum) {
  begin("C3 output-only-global-minimum");
  GridSpec grid;
  grid.step = 1e-3;
  grid.max_evals = 2e6;
  for (const std::vector<double>& rv :
       {std::vector<double>{0.5, 0.5}, std::vector<double>{0.3, 0.7}}) {
    const Distribution r(ab(2), rv);
    for (double beta2 : {0.5, 1.0, 5.0}) {
      OilYInput input{r, beta2, 20000, 1e-13};
      const OilYResult res = oil_y(input);
      ASSERT_TRUE(res.converged);
      const auto [kernel, oracle_value] = grid_search_oil_y(r, beta2, grid);
      (void)kernel;
      EXPECT_NEAR(res.objective, oracle_value, 1e-4 + 1e-3)
          << "r = (" << rv[0] << ", " << rv[1] << ") beta2 = " << beta2;
    }
  }
  // restart consistency on a = 5
  Rng rng(2002);
  const Distribution r5(ab(5), random_simplex(5, rng));
  for (double beta2 : {0.5, 1.0, 5.0}) {
    std::vector<double> objectives;
    for (int restart = 0; restart < 10; ++restart) {
      const Kernel init = random_kernel(ab(5), ab(5), rng);
      OilYInput input{r5, beta2, 20000, 1e-12};
      objectives.push_back(oil_y(input, &init).objective);
    }
    const auto [lo, hi] = std::minmax_element(objectives.begin(), objectives.end());
    EXPECT_LT(*hi - *lo, 1e-6) << "beta2 " << beta2;
  }
  EXPECT_LT(elapsed(), 120.0);
}

TEST_F(Acceptance, C4SpecialCaseConsistency) {
  begin("C4 special-case-consistency");
  // (i) frequency-driven solver equals the general output-only solver on
  // deterministic models, iteration by iteration
  Rng rng(3003);
  for (int trial = 0; trial < 3; ++trial) {
    const std::size_t nx = 4 + trial, ny = 3;
    std::vector<int> map(nx);
    for (std::size_t x = 0; x < nx; ++x) map[x] = static_cast<int>(x % ny);
    const DeterministicModel f(ab(nx), ab(ny), map);
    const Kernel kstar = one_hot_kernel(f);
    const Distribution px(ab(nx), random_simplex(nx, rng));
    const double beta2 = 0.5 + trial;
    const int iters = 80;
    OilYInput input{pushforward(px, kstar), beta2, iters, 1e-13};
    const OilYResult from_r = oil_y(input);
    const OilYResult from_model = oil_y_general(px, kstar, beta2, iters, 1e-13);
    ASSERT_EQ(from_r.delta_trace.size(), from_model.delta_trace.size());
    EXPECT_LT(max_abs_difference(from_r.kernel, from_model.kernel), 1e-9);
    for (std::size_t t = 0; t < from_r.objective_trace.size(); ++t)
      EXPECT_NEAR(from_r.objective_trace[t], from_model.objective_trace[t], 1e-9);
  }
  // (ii) simplified deterministic-model updates equal the general updates
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t nx = 2 + trial % 5;
    const std::size_t ny =
        2 + trial % std::max<std::size_t>(1, std::min<std::size_t>(nx - 1, 3));
    std::vector<int> map(nx);
    for (std::size_t x = 0; x < nx; ++x) map[x] = static_cast<int>(x % ny);
    const DeterministicModel f(ab(nx), ab(ny), map);
    const Kernel kstar = one_hot_kernel(f);
    const Distribution px(ab(nx), random_simplex(nx, rng));
    const Kernel k1 = random_kernel(ab(nx), ab(nx), rng);
    const Kernel k2 = random_kernel(ab(ny), ab(ny), rng);
    const AlgorithmState s = detail::make_state(px, kstar, k1, k2, 0);
    const double b1 = 0.5 + 0.25 * trial, b2 = 0.75 + 0.2 * trial;
    const auto [fast_k1, fast_k2] = joint_deterministic_updates(s, px, f, b1, b2);
    EXPECT_LT(max_abs_difference(fast_k1, update_k1(s, px, kstar, b1, b2)), 1e-12);
    EXPECT_LT(max_abs_difference(fast_k2, update_k2(s, px, kstar, b2)), 1e-12);
  }
  // (iii) the output-only solver equals the engine with the input kernel
  // pinned to the identity
  const Distribution px3(ab(3), {0.3, 0.3, 0.4});
  const Kernel kstar3(ab(3), ab(3),
                      std::vector<std::vector<double>>{
                          {0.7, 0.2, 0.1}, {0.2, 0.6, 0.2}, {0.1, 0.2, 0.7}});
  for (double beta2 : {0.5, 1.0, 5.0}) {
    const OilYResult direct = oil_y_general(px3, kstar3, beta2, 20000, 1e-12);
    OilConfig config;
    config.beta1 = 0.0;
    config.beta2 = beta2;
    config.max_iters = 20000;
    config.tol = 1e-12;
    const OilSolution pinned = oil_optimize(px3, kstar3, config);
    EXPECT_LT(max_abs_difference(direct.kernel, pinned.k2), 1e-6) << "beta2 " << beta2;
  }
  EXPECT_LT(elapsed(), 30.0);
}

// Known-red checks, kept as documentation of the gap between the idealized
// expectations below and the actual dynamics:
//  - (a) demands the change metric shed 99% of its first-step value within
//    30 iterations for every beta. That holds at beta2 = 1 (ratio ~2e-3) but
//    not at beta2 = 10 (~3e-2) or 100 (~1.4e-1): from the uniform start the
//    response marginal drifts toward its fixed point at a geometric rate of
//    only ~0.93-0.994 per iteration, under the plain alternation, the exact
//    per-column solve, and the damped solver alike. The plain alternation is
//    strictly worse: at beta2 in {10, 1} it cycles with period 2 and never
//    converges at all.
//  - (b) expects a mean diagonal above 0.5 at beta2 = 1. The global minimum
//    there has mean diagonal ~0.25 (confirmed by the per-column convex solve,
//    by restart agreement, and by the symmetric fixed point of
//    d(99 + e^{1/d}) = e^{1/d}, d* ~ 0.275). A solver with diagonal > 0.5
//    would be sitting at a non-optimal near-identity point (objective 4.19
//    vs 1.84) and would fail the grid-oracle checks of C3.
TEST_F(Acceptance, C5LargeAlphabetToy) {
  begin("C5 large-alphabet-toy");
  const std::size_t a = 100;
  const int iters = 30;
  const int replications = 5;
  for (double beta2 : {100.0, 10.0, 1.0}) {
    double delta_first = 0.0, delta_last = 0.0, mean_diag = 0.0, worst_tv = 0.0;
    for (int rep = 0; rep < replications; ++rep) {
      Rng rng(derive_seed(5005, rep));
      const Distribution r(ab(a), random_simplex(a, rng));
      OilYInput input{r, beta2, iters, 1e-300};
      const OilYResult res = oil_y(input);
      ASSERT_EQ(res.delta_trace.size(), static_cast<std::size_t>(iters));
      delta_first += res.delta_trace.front();
      delta_last += res.delta_trace.back();
      mean_diag += res.kernel.mean_diagonal();
      const Distribution q = pushforward(r, res.kernel);
      worst_tv = std::max(worst_tv, max_column_tv(res.kernel, q));
    }
    delta_first /= replications;
    delta_last /= replications;
    mean_diag /= replications;
    // (a) the change metric at iteration 30 has fallen below 1% of its
    // iteration-1 value
    EXPECT_LT(delta_last, 0.01 * delta_first) << "beta2 " << beta2;
    // (b) strong diagonal at the small tradeoff weight
    if (beta2 == 1.0) {
      EXPECT_GT(mean_diag, 0.5);
    }
    // (c) near-independence at the large tradeoff weight
    if (beta2 == 100.0) {
      EXPECT_LT(worst_tv, 0.05);
    }
  }
  EXPECT_LT(elapsed(), 60.0);
}

TEST_F(Acceptance, C6TradeoffTrend) {
  begin("C6 tradeoff-trend");
  const Distribution r(ab(4), {0.22, 0.27, 0.21, 0.30});
  const Kernel kstar = one_hot_kernel(DeterministicModel(ab(4), ab(4), {0, 1, 2, 3}));
  SweepControls controls;
  controls.max_iters = 20000;
  controls.tol = 1e-12;
  controls.samples = 10000;
  const TradeoffCurve curve =
      sweep(r, kstar, {0.0, 1.0, 2.0, 5.0, 20.0, 50.0}, SweepMode::kOutputOnly, controls, 6006);
  ASSERT_EQ(curve.points.size(), 6u);
  EXPECT_DOUBLE_EQ(curve.points[0].empirical_agreement, 1.0);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    EXPECT_GE(curve.points[i].utility_kl, curve.points[i - 1].utility_kl - 1e-6);
    EXPECT_LE(curve.points[i].mi_output, curve.points[i - 1].mi_output + 1e-6);
  }
  EXPECT_LT(elapsed(), 30.0);
}

TEST_F(Acceptance, C7DirichletBaselineSanity) {
  begin("C7 dirichlet-baseline");
  const std::vector<std::pair<double, double>> pairs = {
      {10.0, 10.0}, {5.0, 2.0}, {10.0, 1.0}, {100.0, 1.0}};
  const int seeds = 30;
  double prev_upper = -1.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::vector<double> diags;
    for (int s = 0; s < seeds; ++s) {
      DirichletSpec spec{pairs[i].first, pairs[i].second, 4,
                         derive_seed(7007, i * 100 + static_cast<std::size_t>(s))};
      diags.push_back(dirichlet_kernel(spec).mean_diagonal());
    }
    double mean = 0.0;
    for (double d : diags) mean += d;
    mean /= seeds;
    double var = 0.0;
    for (double d : diags) var += (d - mean) * (d - mean);
    var /= (seeds - 1);
    const double band = 3.0 * std::sqrt(var / seeds);
    EXPECT_GT(mean - band, prev_upper) << "pair " << i;
    prev_upper = mean + band;
  }
  EXPECT_LT(elapsed(), 10.0);
}

TEST_F(Acceptance, C8Limits) {
  begin("C8 limits");
  Rng rng(8008);
  const Distribution r(ab(4), random_simplex(4, rng));
  OilYInput heavy{r, 1e4, 20000, 1e-12};
  const OilYResult res = oil_y(heavy);
  const Distribution q = pushforward(r, res.kernel);
  // every column of the independence kernel is q
  const Kernel independence = beta_infinity_kernel(q);
  EXPECT_LT(max_column_tv(res.kernel, independence.column(0)), 0.02);
  OilYInput zero{r, 0.0, 100, 1e-12};
  EXPECT_EQ(max_abs_difference(oil_y(zero).kernel, Kernel::identity(ab(4))), 0.0);
  EXPECT_LT(elapsed(), 5.0);
}

TEST_F(Acceptance, C9NumericsSuite) {
  begin("C9 numerics-suite");
  Rng rng(9009);
  const Distribution p(ab(4), random_simplex(4, rng));
  EXPECT_DOUBLE_EQ(kl_divergence(p, p), 0.0);
  const Kernel constant = Kernel::constant_columns(ab(4), p);
  EXPECT_DOUBLE_EQ(mutual_information(Distribution::uniform(ab(4)), constant), 0.0);
  EXPECT_NEAR(mutual_information(p, Kernel::identity(ab(4))), entropy(p), 1e-14);
  const Kernel a = random_kernel(ab(3), ab(4), rng);
  const Kernel b = random_kernel(ab(4), ab(2), rng);
  const Distribution p3(ab(3), random_simplex(3, rng));
  const Distribution lhs = pushforward(p3, cascade(a, b));
  const Distribution rhs = pushforward(pushforward(p3, a), b);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_NEAR(lhs[i], rhs[i], 1e-12);
  const Kernel composed = cascade(a, b);
  for (std::size_t i = 0; i < 3; ++i) {
    double colsum = 0.0;
    for (std::size_t o = 0; o < 2; ++o) colsum += composed(o, i);
    EXPECT_NEAR(colsum, 1.0, 1e-9);
  }
  QuantizerConfig quant;  // mu 0, sigma 1, 30 points
  EXPECT_EQ(quantize(-3.0, quant), 0u);
  EXPECT_EQ(quantize(10.0, quant), 29u);
  EXPECT_EQ(quantize(0.0, quant), 14u);
  EXPECT_LT(elapsed(), 5.0);
}

TEST_F(Acceptance, C10CliDeterminism) {
  begin("C10 cli-determinism");
  const fs::path dir = fs::temp_directory_path() / "oil_acceptance";
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "model.json");
    f << R"({"input_labels":["a","b","c","d"],"output_labels":["a","b","c","d"],)"
      << R"("map":[0,1,2,3]})";
  }
  {
    std::ofstream f(dir / "r.json");
    f << R"({"labels":["a","b","c","d"],"probs":[0.22,0.27,0.21,0.30]})";
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(OIL_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  const std::string opt_base = "optimize --model " + (dir / "model.json").string() +
                               " --input-dist " + (dir / "r.json").string() +
                               " --mode joint --beta1 1 --beta2 1 --restarts 1 --seed 17 --out ";
  ASSERT_EQ(run(opt_base + (dir / "sol_a.json").string()), 0);
  ASSERT_EQ(run(opt_base + (dir / "sol_b.json").string()), 0);
  EXPECT_EQ(slurp(dir / "sol_a.json"), slurp(dir / "sol_b.json"));
  EXPECT_FALSE(slurp(dir / "sol_a.json").empty());

  const std::string sweep_base = "sweep --model " + (dir / "model.json").string() +
                                 " --input-dist " + (dir / "r.json").string() +
                                 " --betas 0,1,5 --mode output-only --samples 2000 --seed 23"
                                 " --out-csv ";
  ASSERT_EQ(run(sweep_base + (dir / "curve_a.csv").string()), 0);
  ASSERT_EQ(run(sweep_base + (dir / "curve_b.csv").string()), 0);
  EXPECT_EQ(slurp(dir / "curve_a.csv"), slurp(dir / "curve_b.csv"));
  EXPECT_FALSE(slurp(dir / "curve_a.csv").empty());
  EXPECT_LT(elapsed(), 10.0);
}

}  // namespace
}  // namespace oil
