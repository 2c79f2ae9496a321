// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: forward / approx / inverse / ablate /
// plot-activation subcommands over JSON configs with flag overrides.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reactpinn/runner.hpp"

namespace {

using namespace reactpinn;

struct CliOptions {
  std::string config;
  std::string problem;
  std::string activation;
  std::string optimizer;
  double lr = 0;
  long iterations = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  bool quick = false;
  int log_stride = 0;
  std::vector<int> hidden;
  double sigma = -1;
};

void add_common_options(CLI::App* sub, CliOptions& o) {
  sub->add_option("--config", o.config, "JSON config file");
  sub->add_option("--problem", o.problem, "problem name");
  sub->add_option("--activation", o.activation,
                  "relu|sigmoid|tanh|sin|softplus|stan|abu|react");
  sub->add_option("--optimizer", o.optimizer, "adam|rmsprop");
  sub->add_option("--lr", o.lr, "learning rate");
  sub->add_option("--iterations", o.iterations, "training iterations");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--out", o.out, "output directory");
  sub->add_flag("--quick", o.quick, "iterations / 10 (smoke runs)");
  sub->add_option("--log-stride", o.log_stride, "loss logging stride");
  sub->add_option("--hidden", o.hidden, "hidden layer widths");
  sub->add_option("--sigma", o.sigma, "noise standard deviation (inverse)");
}

ExperimentConfig resolve(const CLI::App* sub, const CliOptions& o, Mode mode,
                         const std::string& fallback_problem) {
  ExperimentConfig cfg;
  std::string problem = fallback_problem;
  ActivationKind act = ActivationKind::REAct;
  if (!o.problem.empty()) problem = o.problem;
  if (!o.activation.empty()) act = parse_activation(o.activation);

  if (!o.config.empty()) {
    cfg = load_config_file(o.config);
    cfg.mode = mode;
    if (sub->count("--problem")) {
      cfg = default_config(mode, problem, act);
      // flags replace the file's problem entirely; reload shared fields below
    }
    if (sub->count("--activation")) {
      cfg.activation = act;
      cfg.network.activation = act;
    }
  } else {
    cfg = default_config(mode, problem, act);
  }
  cfg.mode = mode;

  if (sub->count("--optimizer")) cfg.optimizer = parse_optimizer(o.optimizer);
  if (sub->count("--lr")) cfg.lr = o.lr;
  if (sub->count("--iterations")) cfg.iterations = o.iterations;
  if (sub->count("--seed")) {
    cfg.seed = o.seed;
    cfg.network.seed = o.seed;
  }
  if (sub->count("--out")) cfg.output_dir = o.out;
  if (o.quick) cfg.quick = true;
  if (sub->count("--log-stride")) cfg.log_stride = o.log_stride;
  if (sub->count("--hidden")) cfg.network.hidden = o.hidden;
  if (sub->count("--sigma")) cfg.noise.sigma = o.sigma;
  return cfg;
}

void print_summary(const RunResult& r) {
  const MetricsReport& m = r.log.metrics;
  std::printf("%s %s seed=%llu iterations=%ld\n", r.cfg.problem.c_str(),
              activation_name(r.cfg.activation).c_str(),
              static_cast<unsigned long long>(r.cfg.seed), r.log.iterations_run);
  std::printf("  l2_rel=%.6g mse=%.6g mae=%.6g evs=%.6g (%lld points, %.1fs)\n",
              m.l2_rel, m.mse, m.mae, m.evs,
              static_cast<long long>(m.n_points), r.log.runtime_seconds);
  if (r.log.param_estimate) {
    std::printf("  parameter estimate=%.6g true=%.6g error=%.4g%%\n",
                *r.log.param_estimate, *r.log.param_true, *r.log.param_pct_error);
  }
  if (r.log.generalization) {
    std::printf("  fine-grid: l2_rel=%.6g mse=%.6g\n", r.log.generalization->l2_rel,
                r.log.generalization->mse);
  }
  if (r.log.diverged) std::printf("  WARNING: run diverged before completion\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PINN engine with the REAct learnable activation"};
  app.require_subcommand(1);

  CliOptions fwd_o, approx_o, inv_o, abl_o;
  CLI::App* fwd = app.add_subcommand("forward", "forward IBVP simulation");
  add_common_options(fwd, fwd_o);
  CLI::App* approx = app.add_subcommand("approx", "function approximation (f1..f3)");
  add_common_options(approx, approx_o);
  CLI::App* inv = app.add_subcommand("inverse", "inverse parameter estimation");
  add_common_options(inv, inv_o);
  CLI::App* abl = app.add_subcommand("ablate", "noise-level ablation sweep");
  add_common_options(abl, abl_o);
  std::vector<std::string> abl_acts;
  std::vector<double> abl_sigmas;
  abl->add_option("--activations", abl_acts, "subset of {stan,abu,react}");
  abl->add_option("--sigmas", abl_sigmas, "subset of the noise sweep");

  CLI::App* plot = app.add_subcommand("plot-activation", "emit activation samples");
  std::string plot_act = "react", plot_out = ".";
  std::vector<double> plot_params;
  double xmin = -5.0, xmax = 5.0;
  int samples = 400;
  plot->add_option("--activation", plot_act, "activation kind");
  plot->add_option("--params", plot_params, "shape parameters (defaults: init)");
  plot->add_option("--xmin", xmin);
  plot->add_option("--xmax", xmax);
  plot->add_option("--samples", samples);
  plot->add_option("--out", plot_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fwd->parsed()) {
      RunResult r = run_forward(resolve(fwd, fwd_o, Mode::Forward, "heat"));
      emit_outputs(r);
      print_summary(r);
    } else if (approx->parsed()) {
      RunResult r = run_approx(resolve(approx, approx_o, Mode::Approx, "f1"));
      emit_outputs(r);
      print_summary(r);
    } else if (inv->parsed()) {
      RunResult r = run_inverse(resolve(inv, inv_o, Mode::Inverse, "heat"));
      emit_outputs(r);
      print_summary(r);
    } else if (abl->parsed()) {
      ExperimentConfig cfg = resolve(abl, abl_o, Mode::Ablate, "wave");
      std::vector<ActivationKind> kinds;
      for (const std::string& a : abl_acts) kinds.push_back(parse_activation(a));
      const auto entries = run_ablation(cfg, kinds, abl_sigmas);
      for (const AblationEntry& e : entries) {
        if (e.result.log.param_pct_error) {
          std::printf("%s sigma=%g %s: error=%.4g%%\n", cfg.problem.c_str(), e.sigma,
                      activation_name(e.activation).c_str(),
                      *e.result.log.param_pct_error);
        } else {
          std::printf("%s sigma=%g %s: diverged\n", cfg.problem.c_str(), e.sigma,
                      activation_name(e.activation).c_str());
        }
      }
    } else if (plot->parsed()) {
      emit_activation_plot(parse_activation(plot_act), plot_params, xmin, xmax,
                           samples, plot_out);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
