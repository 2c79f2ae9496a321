// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/optim.hpp"

#include <cmath>

#include "reactpinn/errors.hpp"

namespace reactpinn {

OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "adam") return OptimizerKind::Adam;
  if (name == "rmsprop") return OptimizerKind::RMSprop;
  throw ConfigError("unknown optimizer: " + name);
}

std::string optimizer_name(OptimizerKind kind) {
  return kind == OptimizerKind::Adam ? "adam" : "rmsprop";
}

OptimizerState make_optimizer(OptimizerKind kind, double lr, std::size_t n_params) {
  if (lr <= 0.0) throw ConfigError("learning rate must be positive");
  OptimizerState s;
  s.kind = kind;
  s.lr = lr;
  const auto n = static_cast<Eigen::Index>(n_params);
  if (kind == OptimizerKind::Adam) s.m = Eigen::VectorXd::Zero(n);
  s.v = Eigen::VectorXd::Zero(n);
  return s;
}

namespace {

void check_grads(const ParameterView& view, const GradientMap& grads) {
  if (grads.values.size() != static_cast<Eigen::Index>(view.total_trainable())) {
    throw ConfigError("gradient size does not match parameter count");
  }
  if (grads.values.allFinite()) return;
  for (Eigen::Index i = 0; i < grads.values.size(); ++i) {
    if (!std::isfinite(grads.values[i])) {
      throw NumericError("non-finite gradient for " +
                         view.param_name(static_cast<std::size_t>(i)));
    }
  }
}

}  // namespace

void adam_step(OptimizerState& s, ParameterView& view, const GradientMap& grads) {
  check_grads(view, grads);
  const auto& g = grads.values;
  s.step_count += 1;
  s.m = s.beta1 * s.m + (1.0 - s.beta1) * g;
  s.v = s.beta2 * s.v.array().matrix() + (1.0 - s.beta2) * g.cwiseProduct(g);
  const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step_count));
  const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step_count));
  view.flat().array() -=
      s.lr * (s.m.array() / bc1) / ((s.v.array() / bc2).sqrt() + s.eps);
}

void rmsprop_step(OptimizerState& s, ParameterView& view, const GradientMap& grads) {
  check_grads(view, grads);
  const auto& g = grads.values;
  s.step_count += 1;
  s.v = s.alpha * s.v + (1.0 - s.alpha) * g.cwiseProduct(g);
  view.flat().array() -= s.lr * g.array() / (s.v.array().sqrt() + s.eps);
}

void optimizer_step(OptimizerState& s, ParameterView& view, const GradientMap& grads) {
  if (s.kind == OptimizerKind::Adam) {
    adam_step(s, view, grads);
  } else {
    rmsprop_step(s, view, grads);
  }
}

}  // namespace reactpinn
