// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reactpinn/autodiff.hpp"

namespace reactpinn {

enum class ProblemName { AllenCahn, Burgers, Diffusion, Heat, Vibration, Wave, F1, F2, F3 };

ProblemName parse_problem(const std::string& name);
std::string problem_name(ProblemName name);

struct Domain {
  std::optional<std::array<double, 2>> x_range;
  std::array<double, 2> t_range{0, 1};
  std::optional<int> n_space;
  int n_time = 0;
};

/// Collocation/IC/BC/data point sets for one problem. PDE points are columns
/// (x, t); the vibration ODE and the regression tasks use a single input
/// coordinate. Boundary columns come in (lo, hi) pairs per time sample.
struct SampleSet {
  Eigen::MatrixXd collocation;
  Eigen::MatrixXd initial;
  Eigen::VectorXd initial_values;
  Eigen::VectorXd initial_velocities;  // size 0 unless the problem pins du/dt at t0
  Eigen::MatrixXd boundary;
  Eigen::VectorXd boundary_values;
  int boundary_time_samples = 0;
  Eigen::MatrixXd data_points;
  Eigen::VectorXd data_values;
};

struct NoiseModel {
  double sigma = 0.1;
  int n_data = 5000;
  int n_total = 10000;
  std::uint64_t seed = 0;  // 0: the runner derives it from the experiment seed
};

struct ProblemSpec {
  ProblemName name = ProblemName::Heat;
  int input_dim = 2;
  bool is_regression = false;
  bool is_ode = false;
  bool fine_test_grid = false;   // 10x points per coordinate for testing
  bool velocity_ic = false;      // IC also pins du/dt at t0
  Domain train_domain, test_domain;
  std::map<std::string, double> constants;
  std::string trainable_param;   // set for inverse problems ("alpha" / "c")
  bool has_analytic = false;
};

/// Registry entry for a problem name; inverse=true marks the physical
/// parameter trainable (heat and wave only).
ProblemSpec make_problem(ProblemName name, bool inverse = false);
ProblemSpec make_problem(const std::string& name, bool inverse = false);

/// Signed residual of the governing equation at one point given the solution
/// jet. `params` supplies the physical parameters (falls back to the spec's
/// constants for missing entries).
double residual(const ProblemSpec& spec, std::span<const double> point,
                const Jet& jet, const std::map<std::string, double>& params = {});

/// Residual together with its partials w.r.t. the jet components and the
/// trainable physical parameter; this is what loss backpropagation seeds.
struct ResidualLinearization {
  double r = 0;
  double dv = 0;
  std::array<double, 2> dg{0, 0};
  std::array<double, 2> dh{0, 0};
  double dparam = 0;
};
ResidualLinearization residual_linearization(const ProblemSpec& spec, double x,
                                             double t, double v, const double* g,
                                             const double* h, double param_value);

double ic_value(const ProblemSpec& spec, double x);
double bc_value(const ProblemSpec& spec, bool upper_end, double t);

/// Uniform tensor-product grid with endpoints, plus the spec's IC/BC slices.
SampleSet sample_grid(const ProblemSpec& spec, const Domain& domain);

/// Test points per problem family: 10x-fine grid over the training domain for
/// Allen-Cahn/vibration, the held-out time band at 21 time samples for
/// Burgers/diffusion/heat, the training-resolution grid when the test domain
/// equals the training domain, and the training points for the regression
/// tasks.
SampleSet make_test_set(const ProblemSpec& spec);

std::optional<double> analytic_solution(const ProblemSpec& spec,
                                        std::span<const double> point);

double regression_target(ProblemName name, double x);

/// 10,000 uniform domain points (seeded); the first n_data after a seeded
/// shuffle become supervised pairs with N(0, sigma^2) noise added to the
/// analytic solution. The full point set is returned as collocation.
SampleSet make_noisy_data(const ProblemSpec& spec, const NoiseModel& noise);

/// Single draw from U[0.2, 2.5].
double init_physical_param(std::uint64_t seed);

}  // namespace reactpinn
