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
// Command-line front end. Exit codes: 0 success, 1 usage error, 2 numerical
// failure, 3 I/O error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oil/oil.hpp"

namespace {

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw oil::DomainError("cannot parse number: " + item);
    }
  }
  return out;
}

oil::SweepMode parse_mode(const std::string& mode) {
  if (mode == "joint") return oil::SweepMode::kJoint;
  if (mode == "output-only") return oil::SweepMode::kOutputOnly;
  if (mode == "input-only") return oil::SweepMode::kInputOnly;
  throw oil::DomainError("unknown mode: " + mode + " (expected joint|output-only|input-only)");
}

void print_solution_summary(const oil::OilSolution& s) {
  const double delta_first = s.delta_trace.empty() ? 0.0 : s.delta_trace.front();
  const double delta_last = s.delta_trace.empty() ? 0.0 : s.delta_trace.back();
  std::cout << "objective=" << g12(s.objective) << " residual=" << g6(s.residual)
            << " iters=" << s.iterations << " converged=" << (s.converged ? 1 : 0)
            << " delta_first=" << g6(delta_first) << " delta_last=" << g6(delta_last)
            << " mean_diag_k1=" << g6(s.k1.mean_diagonal())
            << " mean_diag_k2=" << g6(s.k2.mean_diagonal()) << "\n";
}

struct OptimizeArgs {
  std::string model_path;
  std::string dist_path;
  std::string mode = "joint";
  double beta1 = 0.0;
  double beta2 = 0.0;
  int iters = 1000;
  double tol = 1e-10;
  int restarts = 0;
  std::string init = "uniform";
  std::uint64_t seed = 0;
  std::string out_path;
};

oil::OilSolution wrap_one_sided(oil::Kernel k1, oil::Kernel k2, oil::Kernel effective,
                                oil::OilYResult r) {
  oil::OilSolution s{std::move(k1), std::move(k2), std::move(effective)};
  s.objective_trace = std::move(r.objective_trace);
  s.delta_trace = std::move(r.delta_trace);
  s.objective = r.objective;
  s.residual = r.residual;
  s.converged = r.converged;
  s.iterations = r.iterations;
  return s;
}

oil::SolutionEnvelope solve(const OptimizeArgs& a) {
  const oil::Kernel kstar = oil::load_model_as_kernel(a.model_path);
  const oil::Distribution px = oil::load_distribution(a.dist_path);
  const oil::SweepMode mode = parse_mode(a.mode);

  oil::OilConfig config;
  config.beta1 = a.beta1;
  config.beta2 = a.beta2;
  config.max_iters = a.iters;
  config.tol = a.tol;
  config.restarts = a.restarts;
  config.seed = a.seed;
  if (a.init == "uniform") {
    config.init = oil::InitScheme::kUniform;
  } else if (a.init == "random") {
    config.init = oil::InitScheme::kRandom;
  } else {
    throw oil::DomainError("unknown init scheme: " + a.init);
  }
  config.validate();

  switch (mode) {
    case oil::SweepMode::kOutputOnly: {
      if (a.beta1 != 0.0)
        throw oil::DomainError("output-only mode does not take a beta1 weight");
      oil::OilYResult r = oil::oil_y_general(px, kstar, a.beta2, a.iters, a.tol);
      oil::Kernel k2 = r.kernel;
      return oil::SolutionEnvelope{
          a.mode, config,
          wrap_one_sided(oil::Kernel::identity(kstar.input_alphabet()), k2,
                         oil::cascade(kstar, k2), std::move(r))};
    }
    case oil::SweepMode::kInputOnly: {
      if (a.beta2 != 0.0)
        throw oil::DomainError("input-only mode does not take a beta2 weight");
      oil::OilYResult r = oil::oil_x(px, kstar, a.beta1, a.iters, a.tol);
      oil::Kernel k1 = r.kernel;
      return oil::SolutionEnvelope{
          a.mode, config,
          wrap_one_sided(k1, oil::Kernel::identity(kstar.output_alphabet()),
                         oil::cascade(k1, kstar), std::move(r))};
    }
    case oil::SweepMode::kJoint:
      break;
  }
  return oil::SolutionEnvelope{a.mode, config, oil::oil_optimize(px, kstar, config)};
}

std::vector<double> read_values(const std::string& source) {
  if (std::filesystem::exists(source)) {
    std::ifstream in(source);
    if (!in) throw oil::IoError("cannot open values file: " + source);
    std::vector<double> out;
    std::string token;
    while (in >> token) {
      for (char& c : token)
        if (c == ',') c = ' ';
      std::stringstream ss(token);
      double v;
      while (ss >> v) out.push_back(v);
    }
    return out;
  }
  return parse_double_list(source);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"optimal information laundering for finite-alphabet models"};
  app.require_subcommand(1);

  OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "solve for laundering kernels");
  optimize->add_option("--model", opt.model_path, "model file (kernel or deterministic map JSON)")
      ->required();
  optimize->add_option("--input-dist", opt.dist_path, "query distribution JSON")->required();
  optimize->add_option("--beta1", opt.beta1, "input-leakage weight");
  optimize->add_option("--beta2", opt.beta2, "output-leakage weight");
  optimize->add_option("--mode", opt.mode, "joint|output-only|input-only");
  optimize->add_option("--iters", opt.iters, "iteration cap");
  optimize->add_option("--tol", opt.tol, "mean-L1 kernel change threshold");
  optimize->add_option("--restarts", opt.restarts, "extra random-initialization runs");
  optimize->add_option("--init", opt.init, "uniform|random initialization");
  optimize->add_option("--seed", opt.seed, "random seed");
  optimize->add_option("--out", opt.out_path, "solution output file")->required();

  struct {
    OptimizeArgs base;
    std::string betas;
    std::size_t samples = 10000;
    std::string out_csv;
    std::string out_svg;
  } sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "tradeoff curve over a beta grid");
  sweep_cmd->add_option("--model", sw.base.model_path, "model file")->required();
  sweep_cmd->add_option("--input-dist", sw.base.dist_path, "query distribution JSON")->required();
  sweep_cmd->add_option("--betas", sw.betas, "comma-separated beta grid")->required();
  sweep_cmd->add_option("--mode", sw.base.mode, "joint|output-only|input-only");
  sweep_cmd->add_option("--samples", sw.samples, "Monte Carlo samples per point");
  sweep_cmd->add_option("--iters", sw.base.iters, "iteration cap");
  sweep_cmd->add_option("--tol", sw.base.tol, "convergence threshold");
  sweep_cmd->add_option("--restarts", sw.base.restarts, "restarts per point (joint mode)");
  sweep_cmd->add_option("--seed", sw.base.seed, "random seed");
  sweep_cmd->add_option("--out-csv", sw.out_csv, "curve CSV output")->required();
  sweep_cmd->add_option("--out-svg", sw.out_svg, "optional SVG chart output");

  struct {
    std::string model_path;
    std::string dist_path;
    std::string pairs;
    int replications = 50;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    std::string out_csv;
  } bm;
  auto* bench_cmd = app.add_subcommand("benchmark", "Dirichlet random-kernel baseline");
  bench_cmd->add_option("--model", bm.model_path, "model file")->required();
  bench_cmd->add_option("--input-dist", bm.dist_path, "query distribution JSON")->required();
  bench_cmd->add_option("--dirichlet", bm.pairs, "a:b concentration pairs, comma-separated")
      ->required();
  bench_cmd->add_option("--replications", bm.replications, "replications per pair");
  bench_cmd->add_option("--samples", bm.samples, "Monte Carlo samples per replication");
  bench_cmd->add_option("--seed", bm.seed, "random seed");
  bench_cmd->add_option("--out-csv", bm.out_csv, "baseline CSV output")->required();

  struct {
    std::string kernels_path;
    std::string model_path;
    std::string dist_path;
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
  } ev;
  auto* eval_cmd = app.add_subcommand("evaluate", "report utility and leakage of a solution");
  eval_cmd->add_option("--kernels", ev.kernels_path, "solution JSON")->required();
  eval_cmd->add_option("--model", ev.model_path, "model file")->required();
  eval_cmd->add_option("--input-dist", ev.dist_path, "query distribution JSON")->required();
  eval_cmd->add_option("--samples", ev.samples, "Monte Carlo samples");
  eval_cmd->add_option("--seed", ev.seed, "random seed");

  struct {
    double mu = 0.0;
    double sigma = 1.0;
    std::size_t n = 30;
    std::string config_path;
    std::string values;
  } qz;
  auto* quant_cmd = app.add_subcommand("quantize", "map continuous outputs onto the grid");
  quant_cmd->add_option("--mu", qz.mu, "grid center");
  quant_cmd->add_option("--sigma", qz.sigma, "grid scale");
  quant_cmd->add_option("--n", qz.n, "number of grid points");
  quant_cmd->add_option("--config", qz.config_path, "quantizer config JSON (overrides flags)");
  quant_cmd->add_option("--values", qz.values, "comma-separated values or a file of numbers")
      ->required();

  struct {
    std::string kernels_path;
    std::string model_path;
    std::string query;
    std::uint64_t seed = 0;
  } ap;
  auto* apply_cmd = app.add_subcommand("apply", "answer one query through the laundered model");
  apply_cmd->add_option("--kernels", ap.kernels_path, "solution JSON")->required();
  apply_cmd->add_option("--model", ap.model_path, "model file")->required();
  apply_cmd->add_option("--query", ap.query, "input symbol label")->required();
  apply_cmd->add_option("--seed", ap.seed, "random seed");

  try {
    app.parse(argc, argv);

    if (optimize->parsed()) {
      oil::SolutionEnvelope env = solve(opt);
      oil::save_solution(env, opt.out_path);
      print_solution_summary(env.solution);
      return 0;
    }

    if (sweep_cmd->parsed()) {
      const oil::Kernel kstar = oil::load_model_as_kernel(sw.base.model_path);
      const oil::Distribution px = oil::load_distribution(sw.base.dist_path);
      const std::vector<double> betas = parse_double_list(sw.betas);
      oil::SweepControls controls;
      controls.max_iters = sw.base.iters;
      controls.tol = sw.base.tol;
      controls.restarts = sw.base.restarts;
      controls.samples = sw.samples;
      const oil::TradeoffCurve curve =
          oil::sweep(px, kstar, betas, parse_mode(sw.base.mode), controls, sw.base.seed);
      std::ofstream csv(sw.out_csv);
      if (!csv) throw oil::IoError("cannot open file for writing: " + sw.out_csv);
      oil::emit_curve_csv(curve, csv);
      if (!csv) throw oil::IoError("write failed: " + sw.out_csv);
      if (!sw.out_svg.empty()) {
        std::ofstream svg(sw.out_svg);
        if (!svg) throw oil::IoError("cannot open file for writing: " + sw.out_svg);
        oil::write_sweep_svg(curve, svg);
      }
      std::cout << "points=" << curve.points.size() << " out_csv=" << sw.out_csv << "\n";
      return 0;
    }

    if (bench_cmd->parsed()) {
      const oil::Kernel kstar = oil::load_model_as_kernel(bm.model_path);
      const oil::Distribution px = oil::load_distribution(bm.dist_path);
      std::vector<oil::DirichletBaselineRow> rows;
      std::stringstream ss(bm.pairs);
      std::string pair;
      std::size_t index = 0;
      while (std::getline(ss, pair, ',')) {
        if (pair.empty()) continue;
        const auto colon = pair.find(':');
        if (colon == std::string::npos)
          throw oil::DomainError("expected a:b concentration pair, got: " + pair);
        const double a_param = std::stod(pair.substr(0, colon));
        const double b_param = std::stod(pair.substr(colon + 1));
        rows.push_back(oil::dirichlet_baseline(px, kstar, a_param, b_param, bm.replications,
                                               bm.samples, oil::derive_seed(bm.seed, index)));
        ++index;
      }
      if (rows.empty()) throw oil::DomainError("no concentration pairs given");
      std::ofstream csv(bm.out_csv);
      if (!csv) throw oil::IoError("cannot open file for writing: " + bm.out_csv);
      oil::emit_baseline_csv(rows, csv);
      std::cout << "pairs=" << rows.size() << " out_csv=" << bm.out_csv << "\n";
      return 0;
    }

    if (eval_cmd->parsed()) {
      const oil::Kernel kstar = oil::load_model_as_kernel(ev.model_path);
      const oil::Distribution px = oil::load_distribution(ev.dist_path);
      const oil::LoadedSolution sol = oil::load_solution(ev.kernels_path);
      const oil::Kernel k = oil::cascade(oil::cascade(sol.k1, kstar), sol.k2);
      const oil::Distribution pyt =
          oil::pushforward(oil::pushforward(px, sol.k1), kstar);
      std::cout << "utility_kl=" << g12(oil::expected_kl(px, kstar, k)) << "\n"
                << "mi_input=" << g12(oil::mutual_information(px, sol.k1)) << "\n"
                << "mi_output=" << g12(oil::mutual_information(pyt, sol.k2)) << "\n";
      const double agreement =
          oil::monte_carlo_agreement(kstar, sol.k1, sol.k2, px, ev.samples, ev.seed);
      const auto extraction = oil::surrogate_extraction(kstar, sol.k1, sol.k2, px, ev.samples,
                                                        oil::derive_seed(ev.seed, 1));
      std::cout << "agreement=" << g12(agreement) << "\n"
                << "extraction_fidelity=" << g12(extraction.second) << "\n";
      return 0;
    }

    if (quant_cmd->parsed()) {
      oil::QuantizerConfig config;
      if (!qz.config_path.empty()) {
        config = oil::load_quantizer_config(qz.config_path);
      } else {
        config.mu = qz.mu;
        config.sigma = qz.sigma;
        config.n_points = qz.n;
        config.validate();
      }
      const std::vector<std::size_t> indices = oil::quantize(read_values(qz.values), config);
      for (std::size_t i = 0; i < indices.size(); ++i)
        std::cout << indices[i] << (i + 1 < indices.size() ? " " : "");
      std::cout << "\n";
      return 0;
    }

    if (apply_cmd->parsed()) {
      const oil::Kernel kstar = oil::load_model_as_kernel(ap.model_path);
      const oil::LoadedSolution sol = oil::load_solution(ap.kernels_path);
      const int x = kstar.input_alphabet().index_of(ap.query);
      if (x < 0) throw oil::DomainError("unknown query label: " + ap.query);
      oil::Rng rng(ap.seed);
      const std::size_t xt = oil::sample(sol.k1.column(static_cast<std::size_t>(x)), rng);
      const std::size_t yt = oil::sample(kstar.column(xt), rng);
      const std::size_t y = oil::sample(sol.k2.column(yt), rng);
      std::cout << sol.k2.output_alphabet().label(y) << "\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const oil::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const oil::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const oil::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
