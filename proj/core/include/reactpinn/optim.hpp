// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <string>

#include "reactpinn/network.hpp"

namespace reactpinn {

enum class OptimizerKind { Adam, RMSprop };

OptimizerKind parse_optimizer(const std::string& name);
std::string optimizer_name(OptimizerKind kind);

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Adam;
  double lr = 1e-3;
  long step_count = 0;
  // Adam: beta1/beta2/eps; RMSprop: alpha/eps
  double beta1 = 0.9;
  double beta2 = 0.999;
  double alpha = 0.99;
  double eps = 1e-8;
  Eigen::VectorXd m;  // first moment (Adam only)
  Eigen::VectorXd v;  // second-moment accumulator
};

OptimizerState make_optimizer(OptimizerKind kind, double lr, std::size_t n_params);

/// Standard Adam with bias correction. Throws NumericError naming the first
/// offending parameter if the gradient is non-finite.
void adam_step(OptimizerState& state, ParameterView& view, const GradientMap& grads);

/// RMSprop: v <- alpha*v + (1-alpha)*g^2; theta <- theta - lr*g/(sqrt(v)+eps).
void rmsprop_step(OptimizerState& state, ParameterView& view, const GradientMap& grads);

void optimizer_step(OptimizerState& state, ParameterView& view, const GradientMap& grads);

}  // namespace reactpinn
