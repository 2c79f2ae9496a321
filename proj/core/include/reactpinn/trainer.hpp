// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "reactpinn/loss.hpp"
#include "reactpinn/metrics.hpp"
#include "reactpinn/optim.hpp"
#include "reactpinn/problems.hpp"

namespace reactpinn {

struct IterationRecord {
  long iteration = 0;
  LossBreakdown losses;
};

struct RunLog {
  std::vector<IterationRecord> history;
  MetricsReport metrics;
  long iterations_run = 0;
  bool diverged = false;
  double runtime_seconds = 0;
  std::optional<double> param_estimate;
  std::optional<double> param_true;
  std::optional<double> param_pct_error;  // 100*|estimate - true|/true
  // secondary fine-grid metrics for the regression tasks (logged, not the
  // primary protocol)
  std::optional<MetricsReport> generalization;
};

struct TrainOptions {
  OptimizerKind optimizer = OptimizerKind::Adam;
  double lr = 1e-3;
  long iterations = 1000;
  LossWeights weights;
  int log_stride = 100;
};

/// Mutable training state: parameters, optimizer accumulators, iteration
/// counter.
struct TrainState {
  ParameterView view;
  OptimizerState opt;
  long iteration = 0;
};

/// Full-batch gradient descent on the weighted loss over the given sample
/// sets. Uses physics/IC/BC terms when present in `samples` and the data term
/// when data points are present. On a non-finite total loss the run aborts
/// with the last finite iteration recorded and diverged = true.
RunLog train_model(const ProblemSpec& spec, TrainState& state,
                   const SampleSet& samples, const TrainOptions& options);

/// One gradient evaluation of the full weighted loss (the same computation
/// train_model iterates); exposed for gradient cross-checks against the tape.
LossBreakdown loss_and_gradient(const ProblemSpec& spec, const ParameterView& view,
                                const SampleSet& samples, const LossWeights& weights,
                                Eigen::VectorXd& grad);

}  // namespace reactpinn
