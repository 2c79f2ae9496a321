// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "reactpinn/autodiff.hpp"
#include "reactpinn/problems.hpp"

namespace reactpinn {

struct LossWeights {
  double lambda_p = 1.0;
  double lambda_I = 1.0;
  double lambda_B = 1.0;
  double lambda_d = 1.0;
};

struct LossBreakdown {
  double phy = 0;
  double ic = 0;
  double bc = 0;
  double data = 0;
  double total = 0;
};

/// Governing-equation residual of a recorded forward pass, assembled from the
/// output's extracted derivative components. The trainable physical parameter
/// (if any) enters as its tape leaf so its gradient flows through the
/// physics term.
Var residual_var(TapeNetwork& net, const ProblemSpec& spec,
                 std::span<const double> point, Var output);

/// Mean squared residual over the collocation points.
Var physics_loss(TapeNetwork& net, const ProblemSpec& spec,
                 const Eigen::MatrixXd& collocation);

/// Mean squared initial-condition mismatch; problems that pin du/dt at t0
/// (vibration, wave) add the squared velocity mismatch per point.
Var ic_loss(TapeNetwork& net, const ProblemSpec& spec, const SampleSet& samples);

/// Mean over time samples of the summed squared mismatch at both ends.
Var bc_loss(TapeNetwork& net, const SampleSet& samples);

/// Mean squared supervised mismatch.
Var data_loss(TapeNetwork& net, const Eigen::MatrixXd& points,
              const Eigen::VectorXd& values);

/// Weighted sum of the present components; absent terms contribute zero.
std::pair<Var, LossBreakdown> total_loss(Tape& tape, std::optional<Var> phy,
                                         std::optional<Var> ic, std::optional<Var> bc,
                                         std::optional<Var> data,
                                         const LossWeights& weights);

}  // namespace reactpinn
