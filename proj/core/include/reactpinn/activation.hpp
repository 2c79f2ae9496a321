// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace reactpinn {

/// The eight activations under comparison. Fixed kinds carry no parameters;
/// STan, ABU and REAct are learnable.
enum class ActivationKind { ReLU, Sigmoid, Tanh, Sin, Softplus, STan, ABU, REAct };

ActivationKind parse_activation(const std::string& name);
std::string activation_name(ActivationKind kind);

/// Rational exponential activation, (1 - e^{ax+b}) / (1 + e^{cx+d}).
struct REActParams {
  double a = -2.0;
  double b = 0.0;
  double c = -2.0;
  double d = 0.0;
};

/// Self-scaling tanh, (1 + beta*x) * tanh(x).
struct STanParams {
  double beta = 0.1;
};

/// Convex blend of {ReLU, Sigmoid, Sin, Tanh, Softplus} with softmax weights.
struct ABUParams {
  std::array<double, 5> logits{0, 0, 0, 0, 0};
};

std::size_t activation_param_count(ActivationKind kind);

/// Initial parameter vector: REAct starts at its tanh-equivalent point,
/// STan at beta = 0.1, ABU at a uniform blend; fixed kinds are empty.
std::vector<double> init_activation(ActivationKind kind);

double react_eval(double x, const REActParams& p);

struct REActDerivatives {
  double dydx = 0;
  double d2ydx2 = 0;
  double dyda = 0;
  double dydb = 0;
  double dydc = 0;
  double dydd = 0;
};
REActDerivatives react_derivatives(double x, const REActParams& p);

double stan_eval(double x, const STanParams& p);
double abu_eval(double x, const ABUParams& p);
std::array<double, 5> abu_weights(const ABUParams& p);

/// Value of a non-learnable activation (ReLU, Sigmoid, Tanh, Sin, Softplus).
double fixed_eval(ActivationKind kind, double x);

// ---------------------------------------------------------------------------
// Derivative-tower interface used by the jet/tape engines. ActTower holds the
// activation value and its input derivatives up to third order; ParamTower
// holds, for one shape parameter p, the partials of (y, dy/dx, d2y/dx2)
// with respect to p. Third x-derivatives and the parameter towers feed the
// backward pass of second-order jet propagation.
// ---------------------------------------------------------------------------

struct ActTower {
  double y = 0;
  double y1 = 0;
  double y2 = 0;
  double y3 = 0;
};

struct ParamTower {
  double dy = 0;    // d y / d p
  double dy1 = 0;   // d (dy/dx) / d p
  double dy2 = 0;   // d (d2y/dx2) / d p
};

/// Per-layer evaluation context. For ABU the softmax weights are computed
/// once here instead of per point.
struct ActContext {
  ActivationKind kind = ActivationKind::Tanh;
  std::array<double, 4> p{0, 0, 0, 0};
  std::array<double, 5> w{0, 0, 0, 0, 0};
};

ActContext make_act_context(ActivationKind kind, std::span<const double> params);

/// Tower of x-derivatives at x; entries above `order` are left zero.
/// order in [0, 3].
ActTower act_tower(const ActContext& ctx, double x, int order);

/// Towers of parameter partials (one per learnable parameter, in parameter
/// order). `tower` must be the order-3 result of act_tower at the same x.
void act_param_towers(const ActContext& ctx, double x, const ActTower& tower,
                      std::span<ParamTower> out);

}  // namespace reactpinn
