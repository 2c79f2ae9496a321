// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/loss.hpp"

#include <cmath>

#include "reactpinn/errors.hpp"

namespace reactpinn {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

Var physical_or_const(TapeNetwork& net, const ProblemSpec& spec,
                      const std::string& key) {
  if (spec.trainable_param == key) return net.physical(key);
  return net.tape().constant(spec.constants.at(key));
}

}  // namespace

Var residual_var(TapeNetwork& net, const ProblemSpec& spec,
                 std::span<const double> point, Var u) {
  Tape& tp = net.tape();
  switch (spec.name) {
    case ProblemName::Heat:
      return d1(u, 1) - physical_or_const(net, spec, "alpha") * d2(u, 0);
    case ProblemName::Diffusion: {
      const double src =
          std::exp(-point[1]) * (kPi * kPi - 1.0) * std::sin(kPi * point[0]);
      return d1(u, 1) - d2(u, 0) - tp.constant(src);
    }
    case ProblemName::Burgers:
      return d1(u, 1) + u * d1(u, 0) -
             physical_or_const(net, spec, "nu") * d2(u, 0);
    case ProblemName::AllenCahn: {
      Var five = tp.constant(5.0);
      return d1(u, 1) - physical_or_const(net, spec, "d") * d2(u, 0) -
             five * (u - u * u * u);
    }
    case ProblemName::Vibration: {
      const double zeta = spec.constants.at("zeta");
      const double wn = spec.constants.at("omega_n");
      return d2(u, 0) + tp.constant(2.0 * zeta * wn) * d1(u, 0) +
             tp.constant(wn * wn) * u;
    }
    case ProblemName::Wave: {
      Var c = physical_or_const(net, spec, "c");
      return d2(u, 1) - c * c * d2(u, 0);
    }
    default:
      throw ConfigError("no residual for " + problem_name(spec.name));
  }
}

Var physics_loss(TapeNetwork& net, const ProblemSpec& spec,
                 const Eigen::MatrixXd& collocation) {
  if (collocation.cols() == 0) throw ConfigError("empty collocation set");
  Tape& tp = net.tape();
  Var acc = tp.constant(0.0);
  std::vector<double> pt(static_cast<std::size_t>(collocation.rows()));
  for (Eigen::Index n = 0; n < collocation.cols(); ++n) {
    for (Eigen::Index i = 0; i < collocation.rows(); ++i) pt[i] = collocation(i, n);
    Var u = net.output(pt);
    Var r = residual_var(net, spec, pt, u);
    if (!std::isfinite(r.value())) {
      throw NumericError("non-finite residual at collocation point " +
                         std::to_string(n));
    }
    acc = acc + sqr(r);
  }
  return acc * tp.constant(1.0 / static_cast<double>(collocation.cols()));
}

Var ic_loss(TapeNetwork& net, const ProblemSpec& spec, const SampleSet& samples) {
  Tape& tp = net.tape();
  const Eigen::Index n = samples.initial.cols();
  if (n == 0) throw ConfigError("empty initial-condition set");
  const bool with_velocity = samples.initial_velocities.size() > 0;
  const int t_dir = spec.is_ode ? 0 : 1;
  Var acc = tp.constant(0.0);
  std::vector<double> pt(static_cast<std::size_t>(samples.initial.rows()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index r = 0; r < samples.initial.rows(); ++r) {
      pt[r] = samples.initial(r, i);
    }
    Var u = net.output(pt);
    acc = acc + sqr(u - tp.constant(samples.initial_values[i]));
    if (with_velocity) {
      acc = acc + sqr(d1(u, t_dir) - tp.constant(samples.initial_velocities[i]));
    }
  }
  return acc * tp.constant(1.0 / static_cast<double>(n));
}

Var bc_loss(TapeNetwork& net, const SampleSet& samples) {
  Tape& tp = net.tape();
  if (samples.boundary_time_samples == 0) throw ConfigError("empty boundary set");
  Var acc = tp.constant(0.0);
  std::vector<double> pt(static_cast<std::size_t>(samples.boundary.rows()));
  for (Eigen::Index i = 0; i < samples.boundary.cols(); ++i) {
    for (Eigen::Index r = 0; r < samples.boundary.rows(); ++r) {
      pt[r] = samples.boundary(r, i);
    }
    Var u = net.output(pt);
    acc = acc + sqr(u - tp.constant(samples.boundary_values[i]));
  }
  // paired form: both ends summed, averaged over time samples
  return acc * tp.constant(1.0 / static_cast<double>(samples.boundary_time_samples));
}

Var data_loss(TapeNetwork& net, const Eigen::MatrixXd& points,
              const Eigen::VectorXd& values) {
  Tape& tp = net.tape();
  if (points.cols() == 0) throw ConfigError("empty data set");
  Var acc = tp.constant(0.0);
  std::vector<double> pt(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    for (Eigen::Index r = 0; r < points.rows(); ++r) pt[r] = points(r, i);
    Var u = net.output(pt);
    acc = acc + sqr(u - tp.constant(values[i]));
  }
  return acc * tp.constant(1.0 / static_cast<double>(points.cols()));
}

std::pair<Var, LossBreakdown> total_loss(Tape& tape, std::optional<Var> phy,
                                         std::optional<Var> ic, std::optional<Var> bc,
                                         std::optional<Var> data,
                                         const LossWeights& weights) {
  if (!phy && !ic && !bc && !data) {
    throw ConfigError("total loss needs at least one component");
  }
  LossBreakdown b;
  Var acc = tape.constant(0.0);
  if (phy) {
    b.phy = phy->value();
    acc = acc + tape.constant(weights.lambda_p) * *phy;
  }
  if (ic) {
    b.ic = ic->value();
    acc = acc + tape.constant(weights.lambda_I) * *ic;
  }
  if (bc) {
    b.bc = bc->value();
    acc = acc + tape.constant(weights.lambda_B) * *bc;
  }
  if (data) {
    b.data = data->value();
    acc = acc + tape.constant(weights.lambda_d) * *data;
  }
  b.total = acc.value();
  return {acc, b};
}

}  // namespace reactpinn
