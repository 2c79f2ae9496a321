// SPDX-License-Identifier: Apache-2.0
//
// Shared test oracles: central finite differences in input and parameter
// space. These stay independent of the derivative paths they check.
#pragma once

#include <cmath>
#include <functional>

#include "reactpinn/network.hpp"
#include "reactpinn/rng.hpp"

namespace testsupport {

inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double central_diff2(const std::function<double(double)>& f, double x,
                            double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

/// |a - b| <= tol * max(1, |a|, |b|)
inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Central difference of a scalar functional with respect to one flat
/// parameter slot.
inline double param_central_diff(reactpinn::ParameterView view, std::size_t slot,
                                 double h,
                                 const std::function<double(const reactpinn::ParameterView&)>& f) {
  const double saved = view.flat()[static_cast<Eigen::Index>(slot)];
  view.flat()[static_cast<Eigen::Index>(slot)] = saved + h;
  const double up = f(view);
  view.flat()[static_cast<Eigen::Index>(slot)] = saved - h;
  const double down = f(view);
  view.flat()[static_cast<Eigen::Index>(slot)] = saved;
  return (up - down) / (2.0 * h);
}

/// Random network with parameters drawn in [-1, 1] on top of the seeded
/// build (exercises nonzero biases and off-init activation parameters).
inline reactpinn::ParameterView random_network(const reactpinn::NetworkConfig& cfg,
                                               std::uint64_t jitter_seed,
                                               double act_param_spread = 0.5) {
  reactpinn::ParameterView view = reactpinn::build_network(cfg);
  reactpinn::Rng rng(jitter_seed);
  for (Eigen::Index i = 0; i < view.flat().size(); ++i) view.flat()[i] = rng.uniform(-1.0, 1.0);
  // keep activation parameters near their init so towers stay well-scaled
  const auto init = reactpinn::init_activation(cfg.activation);
  for (std::size_t h = 0; h < cfg.hidden.size(); ++h) {
    auto p = view.activation_params(static_cast<int>(h));
    for (std::size_t j = 0; j < p.size(); ++j) {
      p[j] = init[j] + rng.uniform(-act_param_spread, act_param_spread);
    }
  }
  return view;
}

}  // namespace testsupport
