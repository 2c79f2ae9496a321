// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/runner.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "reactpinn/batch.hpp"
#include "reactpinn/errors.hpp"
#include "reactpinn/oracle.hpp"

namespace reactpinn {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << contents;
}

/// Reference values on a test point set: closed form where available,
/// otherwise the cached finite-difference oracle at >= 4x the test
/// resolution per axis.
Eigen::VectorXd reference_values(const ProblemSpec& spec,
                                 const Eigen::MatrixXd& points) {
  Eigen::VectorXd truth(points.cols());
  if (spec.has_analytic) {
    std::vector<double> pt(static_cast<std::size_t>(points.rows()));
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
      for (Eigen::Index r = 0; r < points.rows(); ++r) pt[r] = points(r, i);
      truth[i] = *analytic_solution(spec, pt);
    }
    return truth;
  }
  int nx = 2049, nt = 2001;
  if (spec.name == ProblemName::AllenCahn) {
    nx = 4001;
    nt = 4001;
  }
  const FDGrid grid = fd_solve_cached(spec, nx, nt, default_cache_dir());
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    truth[i] = interpolate(grid, points(0, i), points(1, i));
  }
  return truth;
}

long effective_iterations(const ExperimentConfig& cfg) {
  return cfg.quick ? std::max(1L, cfg.iterations / 10) : cfg.iterations;
}

TrainOptions train_options(const ExperimentConfig& cfg) {
  TrainOptions opt;
  opt.optimizer = cfg.optimizer;
  opt.lr = cfg.lr;
  opt.iterations = effective_iterations(cfg);
  opt.weights = cfg.weights;
  opt.log_stride = cfg.log_stride;
  return opt;
}

ParameterView build_model(const ExperimentConfig& cfg, const ProblemSpec& spec) {
  NetworkConfig net = cfg.network;
  net.activation = cfg.activation;
  net.input_dim = spec.input_dim;
  ParameterView view = build_network(net);
  if (!spec.trainable_param.empty()) {
    view.add_physical(spec.trainable_param, init_physical_param(cfg.seed));
  }
  return view;
}

void fill_metadata(RunResult& r) {
  r.log.metrics.problem = r.cfg.problem;
  r.log.metrics.activation = activation_name(r.cfg.activation);
  r.log.metrics.seed = r.cfg.seed;
  r.log.metrics.iterations = r.log.iterations_run;
  r.log.metrics.runtime_seconds = r.log.runtime_seconds;
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "forward") return Mode::Forward;
  if (name == "approx") return Mode::Approx;
  if (name == "inverse") return Mode::Inverse;
  if (name == "ablate") return Mode::Ablate;
  if (name == "plot-activation") return Mode::PlotActivation;
  throw ConfigError("unknown mode: " + name);
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Forward: return "forward";
    case Mode::Approx: return "approx";
    case Mode::Inverse: return "inverse";
    case Mode::Ablate: return "ablate";
    case Mode::PlotActivation: return "plot-activation";
  }
  throw ConfigError("invalid mode");
}

ExperimentConfig default_config(Mode mode, const std::string& problem,
                                ActivationKind activation) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  cfg.problem = problem;
  cfg.activation = activation;
  cfg.network.output_dim = 1;
  cfg.network.seed = cfg.seed;

  const ProblemName name = parse_problem(problem);
  switch (name) {
    case ProblemName::AllenCahn:
      cfg.optimizer = OptimizerKind::RMSprop;
      cfg.lr = 1e-4;
      cfg.iterations = 50000;
      cfg.network.hidden = {32, 32, 32};
      break;
    case ProblemName::Burgers:
      cfg.optimizer = OptimizerKind::RMSprop;
      cfg.lr = 1e-4;
      cfg.iterations = 20000;
      cfg.network.hidden = {32, 32, 32};
      break;
    case ProblemName::Diffusion:
      cfg.optimizer = OptimizerKind::Adam;
      cfg.lr = 1e-3;
      cfg.iterations = 30000;
      cfg.network.hidden = {30, 30, 30, 30, 30, 30};
      break;
    case ProblemName::Heat:
      if (mode == Mode::Inverse || mode == Mode::Ablate) {
        cfg.optimizer = OptimizerKind::Adam;
        cfg.lr = 1e-3;
        cfg.iterations = 50000;
        cfg.network.hidden = {20, 20, 20};
      } else {
        cfg.optimizer = OptimizerKind::RMSprop;
        cfg.lr = 1e-4;
        cfg.iterations = 50000;
        cfg.network.hidden = {48, 48, 48};
      }
      break;
    case ProblemName::Vibration:
      cfg.optimizer = OptimizerKind::Adam;
      cfg.lr = 1e-3;
      cfg.iterations = 50000;
      cfg.network.hidden = {48, 48, 48};
      break;
    case ProblemName::Wave:
      if (mode == Mode::Inverse || mode == Mode::Ablate) {
        cfg.optimizer = OptimizerKind::RMSprop;
        cfg.lr = 1e-4;
        cfg.iterations = 75000;
        cfg.network.hidden = {20, 20, 20};
      } else {
        cfg.optimizer = OptimizerKind::RMSprop;
        cfg.lr = 1e-4;
        cfg.iterations = 50000;
        cfg.network.hidden = {32, 32, 32};
      }
      break;
    case ProblemName::F1:
    case ProblemName::F2:
    case ProblemName::F3:
      cfg.optimizer = OptimizerKind::Adam;
      cfg.lr = 1e-3;
      cfg.iterations = 20000;
      cfg.network.hidden = {48, 48, 48};
      break;
  }
  return cfg;
}

void apply_config_json(ExperimentConfig& cfg, const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (j.contains("mode")) cfg.mode = parse_mode(j["mode"]);
  if (j.contains("problem")) cfg.problem = j["problem"];
  if (j.contains("activation")) cfg.activation = parse_activation(j["activation"]);

  // re-derive per-problem defaults, then overlay the remaining fields
  ExperimentConfig base = default_config(cfg.mode, cfg.problem, cfg.activation);
  base.seed = cfg.seed;
  base.output_dir = cfg.output_dir;
  base.quick = cfg.quick;
  cfg = base;

  if (j.contains("optimizer")) cfg.optimizer = parse_optimizer(j["optimizer"]);
  if (j.contains("lr")) cfg.lr = j["lr"];
  if (j.contains("iterations")) cfg.iterations = j["iterations"];
  if (j.contains("seed")) {
    cfg.seed = j["seed"];
    cfg.network.seed = cfg.seed;
  }
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"];
  if (j.contains("log_stride")) cfg.log_stride = j["log_stride"];
  if (j.contains("quick")) cfg.quick = j["quick"];
  if (j.contains("network")) {
    const auto& n = j["network"];
    if (n.contains("hidden")) cfg.network.hidden = n["hidden"].get<std::vector<int>>();
    if (n.contains("input_dim")) cfg.network.input_dim = n["input_dim"];
    if (n.contains("output_dim")) cfg.network.output_dim = n["output_dim"];
    if (n.contains("seed")) cfg.network.seed = n["seed"];
  }
  if (j.contains("weights")) {
    const auto& w = j["weights"];
    if (w.contains("lambda_p")) cfg.weights.lambda_p = w["lambda_p"];
    if (w.contains("lambda_I")) cfg.weights.lambda_I = w["lambda_I"];
    if (w.contains("lambda_B")) cfg.weights.lambda_B = w["lambda_B"];
    if (w.contains("lambda_d")) cfg.weights.lambda_d = w["lambda_d"];
  }
  if (j.contains("noise")) {
    const auto& n = j["noise"];
    if (n.contains("sigma")) cfg.noise.sigma = n["sigma"];
    if (n.contains("n_data")) cfg.noise.n_data = n["n_data"];
    if (n.contains("n_total")) cfg.noise.n_total = n["n_total"];
    if (n.contains("seed")) cfg.noise.seed = n["seed"];
  }
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  ExperimentConfig cfg;
  apply_config_json(cfg, text);
  return cfg;
}

void ensure_writable(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = fs::path(dir) / ".write-probe";
  std::ofstream out(probe);
  if (!out) throw IoError("output directory is not writable: " + dir);
  out.close();
  fs::remove(probe, ec);
}

RunResult run_forward(const ExperimentConfig& cfg) {
  ensure_writable(cfg.output_dir);
  const ProblemSpec spec = make_problem(cfg.problem);
  if (spec.is_regression) {
    throw ConfigError(cfg.problem + " is a regression task; use approx mode");
  }
  RunResult r;
  r.cfg = cfg;
  r.cfg.seed = cfg.seed;

  const SampleSet train = sample_grid(spec, spec.train_domain);
  TrainState state{build_model(cfg, spec), {}, 0};
  r.log = train_model(spec, state, train, train_options(cfg));

  const SampleSet test = make_test_set(spec);
  r.test_points = test.collocation;
  r.test_pred = BatchEvaluator::predict(state.view, r.test_points);
  r.test_truth = reference_values(spec, r.test_points);
  r.log.metrics = compute_metrics(r.test_pred, r.test_truth);
  fill_metadata(r);
  return r;
}

RunResult run_approx(const ExperimentConfig& cfg) {
  ensure_writable(cfg.output_dir);
  const ProblemSpec spec = make_problem(cfg.problem);
  if (!spec.is_regression) {
    throw ConfigError(cfg.problem + " is not a regression task");
  }
  RunResult r;
  r.cfg = cfg;

  SampleSet train = sample_grid(spec, spec.train_domain);
  train.data_points = train.collocation;
  train.data_values.resize(train.data_points.cols());
  for (Eigen::Index i = 0; i < train.data_points.cols(); ++i) {
    train.data_values[i] = regression_target(spec.name, train.data_points(0, i));
  }
  train.collocation.resize(1, 0);

  TrainState state{build_model(cfg, spec), {}, 0};
  r.log = train_model(spec, state, train, train_options(cfg));

  // published protocol: evaluate on the training points
  r.test_points = train.data_points;
  r.test_pred = BatchEvaluator::predict(state.view, r.test_points);
  r.test_truth = train.data_values;
  r.log.metrics = compute_metrics(r.test_pred, r.test_truth);
  fill_metadata(r);

  // held-out 10x grid, logged as generalization
  Domain fine = spec.train_domain;
  fine.n_time *= 10;
  const SampleSet fine_set = sample_grid(spec, fine);
  Eigen::VectorXd fine_pred = BatchEvaluator::predict(state.view, fine_set.collocation);
  Eigen::VectorXd fine_truth(fine_set.collocation.cols());
  for (Eigen::Index i = 0; i < fine_set.collocation.cols(); ++i) {
    fine_truth[i] = regression_target(spec.name, fine_set.collocation(0, i));
  }
  r.log.generalization = compute_metrics(fine_pred, fine_truth);
  return r;
}

RunResult run_inverse(const ExperimentConfig& cfg) {
  ensure_writable(cfg.output_dir);
  const ProblemSpec spec = make_problem(cfg.problem, /*inverse=*/true);
  RunResult r;
  r.cfg = cfg;

  NoiseModel noise = cfg.noise;
  if (noise.seed == 0) noise.seed = cfg.seed;
  SampleSet train = make_noisy_data(spec, noise);
  // IC/BC slices at the training-grid convention
  const SampleSet grid = sample_grid(spec, spec.train_domain);
  train.initial = grid.initial;
  train.initial_values = grid.initial_values;
  train.initial_velocities = grid.initial_velocities;
  train.boundary = grid.boundary;
  train.boundary_values = grid.boundary_values;
  train.boundary_time_samples = grid.boundary_time_samples;

  TrainState state{build_model(cfg, spec), {}, 0};
  r.log = train_model(spec, state, train, train_options(cfg));

  const SampleSet test = make_test_set(spec);
  r.test_points = test.collocation;
  r.test_pred = BatchEvaluator::predict(state.view, r.test_points);
  r.test_truth = reference_values(spec, r.test_points);
  r.log.metrics = compute_metrics(r.test_pred, r.test_truth);
  fill_metadata(r);
  return r;
}

std::vector<AblationEntry> run_ablation(const ExperimentConfig& cfg,
                                        const std::vector<ActivationKind>& acts,
                                        const std::vector<double>& sigmas) {
  ensure_writable(cfg.output_dir);
  const ProblemName name = parse_problem(cfg.problem);
  if (name != ProblemName::Heat && name != ProblemName::Wave) {
    throw ConfigError("ablation sweeps support heat and wave only");
  }
  std::vector<double> sweep = sigmas;
  if (sweep.empty()) {
    sweep = name == ProblemName::Heat ? std::vector<double>{0.1, 0.5, 1.0, 5.0}
                                      : std::vector<double>{0.1, 0.5, 1.0, 3.0};
  }
  std::vector<ActivationKind> kinds = acts;
  if (kinds.empty()) {
    kinds = {ActivationKind::STan, ActivationKind::ABU, ActivationKind::REAct};
  }

  std::vector<AblationEntry> entries;
  for (ActivationKind kind : kinds) {
    for (double sigma : sweep) {
      ExperimentConfig sub = default_config(Mode::Inverse, cfg.problem, kind);
      sub.seed = cfg.seed;
      sub.network.seed = cfg.seed;
      sub.quick = cfg.quick;
      sub.log_stride = cfg.log_stride;
      sub.noise = cfg.noise;
      sub.noise.sigma = sigma;
      char dirname[128];
      std::snprintf(dirname, sizeof(dirname), "%s_%s_sigma%g", cfg.problem.c_str(),
                    activation_name(kind).c_str(), sigma);
      sub.output_dir = (fs::path(cfg.output_dir) / dirname).string();
      AblationEntry entry;
      entry.sigma = sigma;
      entry.activation = kind;
      try {
        entry.result = run_inverse(sub);
        emit_outputs(entry.result);
      } catch (const NumericError&) {
        entry.result.cfg = sub;
        entry.result.log.diverged = true;  // recorded; the sweep continues
      }
      entries.push_back(std::move(entry));
    }
  }
  emit_ablation_csv(entries, cfg.output_dir);
  return entries;
}

void emit_outputs(const RunResult& r) {
  ensure_writable(r.cfg.output_dir);
  const fs::path dir(r.cfg.output_dir);
  const bool inverse = r.log.param_estimate.has_value();

  std::string m = "problem,activation,seed,iterations,l2_rel,mse,mae,evs,runtime_s";
  if (inverse) m += ",param_estimate,param_pct_error";
  m += "\n";
  char row[512];
  std::snprintf(row, sizeof(row), "%s,%s,%" PRIu64 ",%ld,", r.cfg.problem.c_str(),
                activation_name(r.cfg.activation).c_str(),
                static_cast<std::uint64_t>(r.cfg.seed), r.log.iterations_run);
  m += row;
  m += fmt(r.log.metrics.l2_rel) + "," + fmt(r.log.metrics.mse) + "," +
       fmt(r.log.metrics.mae) + "," + fmt(r.log.metrics.evs) + "," +
       std::to_string(static_cast<long long>(r.log.runtime_seconds));
  if (inverse) {
    m += "," + fmt(*r.log.param_estimate) + "," + fmt(*r.log.param_pct_error);
  }
  m += "\n";
  write_file(dir / "metrics.csv", m);

  std::string l = "iteration,phy,ic,bc,data,total\n";
  for (const IterationRecord& rec : r.log.history) {
    l += std::to_string(rec.iteration) + "," + fmt(rec.losses.phy) + "," +
         fmt(rec.losses.ic) + "," + fmt(rec.losses.bc) + "," + fmt(rec.losses.data) +
         "," + fmt(rec.losses.total) + "\n";
  }
  write_file(dir / "losses.csv", l);

  std::string s = "x,t,u_pred,u_true\n";
  s.reserve(static_cast<std::size_t>(r.test_points.cols()) * 48 + 32);
  const bool two_d = r.test_points.rows() == 2;
  const ProblemSpec spec = make_problem(r.cfg.problem);
  for (Eigen::Index i = 0; i < r.test_points.cols(); ++i) {
    double x = 0, t = 0;
    if (two_d) {
      x = r.test_points(0, i);
      t = r.test_points(1, i);
    } else if (spec.is_ode) {
      t = r.test_points(0, i);
    } else {
      x = r.test_points(0, i);
    }
    s += fmt(x) + "," + fmt(t) + "," + fmt(r.test_pred[i]) + "," +
         fmt(r.test_truth[i]) + "\n";
  }
  write_file(dir / "solution.csv", s);
}

void emit_ablation_csv(const std::vector<AblationEntry>& entries,
                       const std::string& output_dir) {
  ensure_writable(output_dir);
  std::string s = "problem,activation,noise_std,seed,param_estimate,param_true,param_pct_error,diverged\n";
  for (const AblationEntry& e : entries) {
    s += e.result.cfg.problem + "," + activation_name(e.activation) + "," +
         fmt(e.sigma) + "," + std::to_string(e.result.cfg.seed) + ",";
    if (e.result.log.param_estimate) {
      s += fmt(*e.result.log.param_estimate) + "," + fmt(*e.result.log.param_true) +
           "," + fmt(*e.result.log.param_pct_error);
    } else {
      s += ",,";
    }
    s += std::string(",") + (e.result.log.diverged ? "1" : "0") + "\n";
  }
  write_file(fs::path(output_dir) / "ablation.csv", s);
}

void emit_activation_plot(ActivationKind kind, const std::vector<double>& params,
                          double xmin, double xmax, int samples,
                          const std::string& output_dir) {
  if (samples < 2) throw ConfigError("activation plot needs at least two samples");
  std::vector<double> p = params;
  if (p.empty()) p = init_activation(kind);
  if (p.size() != activation_param_count(kind)) {
    throw ConfigError("expected " + std::to_string(activation_param_count(kind)) +
                      " parameters for " + activation_name(kind));
  }
  const ActContext ctx = make_act_context(kind, p);
  ensure_writable(output_dir);
  std::string s = "x,y\n";
  for (int i = 0; i < samples; ++i) {
    const double x = xmin + (xmax - xmin) * i / (samples - 1);
    s += fmt(x) + "," + fmt(act_tower(ctx, x, 0).y) + "\n";
  }
  write_file(fs::path(output_dir) / "activation.csv", s);
}

}  // namespace reactpinn
