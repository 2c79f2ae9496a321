// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/problems.hpp"

#include <cmath>

#include "reactpinn/errors.hpp"
#include "reactpinn/rng.hpp"

namespace reactpinn {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double get_const(const ProblemSpec& spec, const std::map<std::string, double>& params,
                 const std::string& key) {
  if (auto it = params.find(key); it != params.end()) return it->second;
  if (auto it = spec.constants.find(key); it != spec.constants.end()) return it->second;
  throw ConfigError("missing physical parameter: " + key);
}

Eigen::VectorXd linspace(double lo, double hi, int n) {
  Eigen::VectorXd v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) v[i] = lo + step * i;
  v[n - 1] = hi;
  return v;
}

}  // namespace

ProblemName parse_problem(const std::string& name) {
  if (name == "allen_cahn") return ProblemName::AllenCahn;
  if (name == "burgers") return ProblemName::Burgers;
  if (name == "diffusion") return ProblemName::Diffusion;
  if (name == "heat") return ProblemName::Heat;
  if (name == "vibration") return ProblemName::Vibration;
  if (name == "wave") return ProblemName::Wave;
  if (name == "f1") return ProblemName::F1;
  if (name == "f2") return ProblemName::F2;
  if (name == "f3") return ProblemName::F3;
  throw ConfigError("unknown problem: " + name);
}

std::string problem_name(ProblemName name) {
  switch (name) {
    case ProblemName::AllenCahn: return "allen_cahn";
    case ProblemName::Burgers: return "burgers";
    case ProblemName::Diffusion: return "diffusion";
    case ProblemName::Heat: return "heat";
    case ProblemName::Vibration: return "vibration";
    case ProblemName::Wave: return "wave";
    case ProblemName::F1: return "f1";
    case ProblemName::F2: return "f2";
    case ProblemName::F3: return "f3";
  }
  throw ConfigError("invalid problem name");
}

ProblemSpec make_problem(ProblemName name, bool inverse) {
  ProblemSpec s;
  s.name = name;
  switch (name) {
    case ProblemName::AllenCahn:
      s.train_domain = {{{-1.0, 1.0}}, {0.0, 1.0}, 100, 100};
      s.test_domain = s.train_domain;
      s.fine_test_grid = true;
      s.constants = {{"d", 0.001}};
      break;
    case ProblemName::Burgers:
      s.train_domain = {{{-1.0, 1.0}}, {0.0, 0.8}, 256, 100};
      s.test_domain = {{{-1.0, 1.0}}, {0.8, 1.0}, 256, 21};
      s.constants = {{"nu", 0.01 / kPi}};
      break;
    case ProblemName::Diffusion:
      s.train_domain = {{{-1.0, 1.0}}, {0.0, 0.8}, 100, 100};
      s.test_domain = {{{-1.0, 1.0}}, {0.8, 1.0}, 100, 21};
      s.has_analytic = true;
      break;
    case ProblemName::Heat:
      s.train_domain = {{{0.0, 1.0}}, {0.0, 0.8}, 100, 100};
      s.test_domain = {{{0.0, 1.0}}, {0.8, 1.0}, 100, 21};
      s.constants = {{"alpha", 0.4}};
      s.has_analytic = true;
      if (inverse) {
        // parameter estimation uses the full time interval
        s.train_domain.t_range = {0.0, 1.0};
        s.test_domain = s.train_domain;
        s.trainable_param = "alpha";
      }
      break;
    case ProblemName::Vibration:
      s.input_dim = 1;
      s.is_ode = true;
      s.train_domain = {std::nullopt, {0.0, 1.0}, std::nullopt, 1000};
      s.test_domain = s.train_domain;
      s.fine_test_grid = true;
      s.velocity_ic = true;
      s.constants = {{"zeta", 0.5}, {"omega_n", 3.0}};
      s.has_analytic = true;
      break;
    case ProblemName::Wave:
      s.train_domain = {{{0.0, 2.0}}, {0.0, 1.0}, 100, 100};
      s.test_domain = s.train_domain;
      s.velocity_ic = true;
      s.constants = {{"c", 2.0}};
      s.has_analytic = true;
      if (inverse) s.trainable_param = "c";
      break;
    case ProblemName::F1:
    case ProblemName::F2:
      s.input_dim = 1;
      s.is_regression = true;
      s.train_domain = {std::nullopt, {-kPi, kPi}, std::nullopt, 1000};
      s.test_domain = s.train_domain;
      s.has_analytic = true;
      break;
    case ProblemName::F3:
      s.input_dim = 1;
      s.is_regression = true;
      s.train_domain = {std::nullopt, {0.0, 2.0 * kPi}, std::nullopt, 1000};
      s.test_domain = s.train_domain;
      s.has_analytic = true;
      break;
  }
  if (inverse && s.trainable_param.empty()) {
    throw ConfigError("inverse mode supports heat and wave only");
  }
  return s;
}

ProblemSpec make_problem(const std::string& name, bool inverse) {
  return make_problem(parse_problem(name), inverse);
}

ResidualLinearization residual_linearization(const ProblemSpec& spec, double x,
                                             double t, double v, const double* g,
                                             const double* h, double param_value) {
  ResidualLinearization out;
  switch (spec.name) {
    case ProblemName::Heat: {
      const double alpha = param_value;
      out.r = g[1] - alpha * h[0];
      out.dg[1] = 1.0;
      out.dh[0] = -alpha;
      out.dparam = -h[0];
      break;
    }
    case ProblemName::Diffusion: {
      const double src = std::exp(-t) * (kPi * kPi - 1.0) * std::sin(kPi * x);
      out.r = g[1] - h[0] - src;
      out.dg[1] = 1.0;
      out.dh[0] = -1.0;
      break;
    }
    case ProblemName::Burgers: {
      const double nu = param_value;
      out.r = g[1] + v * g[0] - nu * h[0];
      out.dv = g[0];
      out.dg[0] = v;
      out.dg[1] = 1.0;
      out.dh[0] = -nu;
      break;
    }
    case ProblemName::AllenCahn: {
      const double d = param_value;
      out.r = g[1] - d * h[0] - 5.0 * (v - v * v * v);
      out.dv = -5.0 * (1.0 - 3.0 * v * v);
      out.dg[1] = 1.0;
      out.dh[0] = -d;
      break;
    }
    case ProblemName::Vibration: {
      const double zeta = spec.constants.at("zeta");
      const double wn = spec.constants.at("omega_n");
      out.r = h[0] + 2.0 * zeta * wn * g[0] + wn * wn * v;
      out.dv = wn * wn;
      out.dg[0] = 2.0 * zeta * wn;
      out.dh[0] = 1.0;
      break;
    }
    case ProblemName::Wave: {
      const double c = param_value;
      out.r = h[1] - c * c * h[0];
      out.dh[1] = 1.0;
      out.dh[0] = -c * c;
      out.dparam = -2.0 * c * h[0];
      break;
    }
    default:
      throw ConfigError("no residual for regression task " + problem_name(spec.name));
  }
  return out;
}

double residual(const ProblemSpec& spec, std::span<const double> point,
                const Jet& jet, const std::map<std::string, double>& params) {
  if (static_cast<int>(jet.d1.size()) < spec.input_dim ||
      static_cast<int>(jet.d2.size()) < spec.input_dim) {
    throw ConfigError("jet carries too few derivative slots for " +
                      problem_name(spec.name));
  }
  double param_value = 0.0;
  switch (spec.name) {
    case ProblemName::Heat: param_value = get_const(spec, params, "alpha"); break;
    case ProblemName::Burgers: param_value = get_const(spec, params, "nu"); break;
    case ProblemName::AllenCahn: param_value = get_const(spec, params, "d"); break;
    case ProblemName::Wave: param_value = get_const(spec, params, "c"); break;
    default: break;
  }
  const double x = point[0];
  const double t = spec.is_ode ? point[0] : point[1];
  return residual_linearization(spec, x, t, jet.value, jet.d1.data(), jet.d2.data(),
                                param_value)
      .r;
}

double ic_value(const ProblemSpec& spec, double x) {
  switch (spec.name) {
    case ProblemName::Heat:
    case ProblemName::Diffusion: return std::sin(kPi * x);
    case ProblemName::Burgers: return -std::sin(kPi * x);
    case ProblemName::AllenCahn: return x * x * std::cos(kPi * x);
    case ProblemName::Vibration: return 1.0;
    case ProblemName::Wave: return std::sin(kPi * x / 2.0);
    default:
      throw ConfigError("no initial condition for " + problem_name(spec.name));
  }
}

double bc_value(const ProblemSpec& spec, bool, double) {
  switch (spec.name) {
    case ProblemName::Heat:
    case ProblemName::Diffusion:
    case ProblemName::Burgers:
    case ProblemName::Wave: return 0.0;
    case ProblemName::AllenCahn: return -1.0;
    default:
      throw ConfigError("no boundary condition for " + problem_name(spec.name));
  }
}

SampleSet sample_grid(const ProblemSpec& spec, const Domain& domain) {
  SampleSet set;
  const auto ts = linspace(domain.t_range[0], domain.t_range[1], domain.n_time);
  if (spec.is_ode || spec.is_regression) {
    set.collocation.resize(1, domain.n_time);
    set.collocation.row(0) = ts.transpose();
    if (spec.is_ode) {
      set.initial.resize(1, 1);
      set.initial(0, 0) = domain.t_range[0];
      set.initial_values = Eigen::VectorXd::Constant(1, ic_value(spec, 0.0));
      if (spec.velocity_ic) set.initial_velocities = Eigen::VectorXd::Zero(1);
    }
    return set;
  }

  if (!domain.x_range || !domain.n_space) {
    throw ConfigError("PDE domain needs a space range and point count");
  }
  const int nx = *domain.n_space;
  const int nt = domain.n_time;
  const auto xs = linspace((*domain.x_range)[0], (*domain.x_range)[1], nx);

  set.collocation.resize(2, static_cast<Eigen::Index>(nx) * nt);
  Eigen::Index c = 0;
  for (int j = 0; j < nt; ++j) {
    for (int i = 0; i < nx; ++i, ++c) {
      set.collocation(0, c) = xs[i];
      set.collocation(1, c) = ts[j];
    }
  }

  set.initial.resize(2, nx);
  set.initial_values.resize(nx);
  for (int i = 0; i < nx; ++i) {
    set.initial(0, i) = xs[i];
    set.initial(1, i) = domain.t_range[0];
    set.initial_values[i] = ic_value(spec, xs[i]);
  }
  if (spec.velocity_ic) set.initial_velocities = Eigen::VectorXd::Zero(nx);

  set.boundary.resize(2, 2 * nt);
  set.boundary_values.resize(2 * nt);
  set.boundary_time_samples = nt;
  for (int j = 0; j < nt; ++j) {
    set.boundary(0, 2 * j) = (*domain.x_range)[0];
    set.boundary(1, 2 * j) = ts[j];
    set.boundary_values[2 * j] = bc_value(spec, false, ts[j]);
    set.boundary(0, 2 * j + 1) = (*domain.x_range)[1];
    set.boundary(1, 2 * j + 1) = ts[j];
    set.boundary_values[2 * j + 1] = bc_value(spec, true, ts[j]);
  }
  return set;
}

SampleSet make_test_set(const ProblemSpec& spec) {
  if (spec.is_regression) {
    return sample_grid(spec, spec.train_domain);
  }
  Domain d = spec.test_domain;
  if (spec.fine_test_grid) {
    d = spec.train_domain;
    d.n_time *= 10;
    if (d.n_space) *d.n_space *= 10;
  }
  SampleSet set = sample_grid(spec, d);
  SampleSet points;
  points.collocation = std::move(set.collocation);
  return points;
}

std::optional<double> analytic_solution(const ProblemSpec& spec,
                                        std::span<const double> point) {
  switch (spec.name) {
    case ProblemName::Heat: {
      const double alpha = spec.constants.at("alpha");
      return std::sin(kPi * point[0]) * std::exp(-alpha * kPi * kPi * point[1]);
    }
    case ProblemName::Diffusion:
      return std::exp(-point[1]) * std::sin(kPi * point[0]);
    case ProblemName::Vibration: {
      const double zeta = spec.constants.at("zeta");
      const double wn = spec.constants.at("omega_n");
      const double wd = wn * std::sqrt(1.0 - zeta * zeta);
      const double t = point[0];
      return std::exp(-zeta * wn * t) *
             (std::cos(wd * t) + (zeta * wn / wd) * std::sin(wd * t));
    }
    case ProblemName::Wave: {
      const double c = spec.constants.at("c");
      return std::sin(kPi * point[0] / 2.0) * std::cos(kPi * c * point[1] / 2.0);
    }
    case ProblemName::F1:
    case ProblemName::F2:
    case ProblemName::F3:
      return regression_target(spec.name, point[0]);
    default:
      return std::nullopt;  // Burgers and Allen-Cahn use the FD oracle
  }
}

double regression_target(ProblemName name, double x) {
  switch (name) {
    case ProblemName::F1: return x * x * std::sin(2.0 * x);
    case ProblemName::F2:
      return (x * x * x - x) / 7.0 * std::sin(7.0 * x) + std::sin(12.0 * x);
    case ProblemName::F3:
      return std::sin(2.0 * x + kPi / 3.0) * std::sin(4.0 * x + kPi / 6.0);
    default:
      throw ConfigError("not a regression task: " + problem_name(name));
  }
}

SampleSet make_noisy_data(const ProblemSpec& spec, const NoiseModel& noise) {
  if (!spec.has_analytic) {
    throw ConfigError("noisy data needs an analytic solution: " +
                      problem_name(spec.name));
  }
  if (noise.n_data > noise.n_total) {
    throw ConfigError("n_data exceeds the sampled point count");
  }
  Rng point_rng = Rng::stream(noise.seed, 101);
  Rng noise_rng = Rng::stream(noise.seed, 202);

  const int dim = spec.input_dim;
  SampleSet set;
  set.collocation.resize(dim, noise.n_total);
  for (int i = 0; i < noise.n_total; ++i) {
    if (dim == 2) {
      set.collocation(0, i) =
          point_rng.uniform((*spec.train_domain.x_range)[0], (*spec.train_domain.x_range)[1]);
      set.collocation(1, i) =
          point_rng.uniform(spec.train_domain.t_range[0], spec.train_domain.t_range[1]);
    } else {
      set.collocation(0, i) =
          point_rng.uniform(spec.train_domain.t_range[0], spec.train_domain.t_range[1]);
    }
  }

  std::vector<int> order(noise.n_total);
  for (int i = 0; i < noise.n_total; ++i) order[i] = i;
  point_rng.shuffle(order);

  set.data_points.resize(dim, noise.n_data);
  set.data_values.resize(noise.n_data);
  for (int i = 0; i < noise.n_data; ++i) {
    const int src = order[i];
    set.data_points.col(i) = set.collocation.col(src);
    std::array<double, 2> pt{set.collocation(0, src),
                             dim == 2 ? set.collocation(1, src) : 0.0};
    const double truth =
        *analytic_solution(spec, std::span<const double>(pt.data(), dim));
    set.data_values[i] = truth + noise_rng.normal(0.0, noise.sigma);
  }
  return set;
}

double init_physical_param(std::uint64_t seed) {
  Rng rng = Rng::stream(seed, 303);
  return rng.uniform(0.2, 2.5);
}

}  // namespace reactpinn
