// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace reactpinn {

struct MetricsReport {
  double l2_rel = 0;  // ||pred - truth|| / ||truth||
  double mse = 0;
  double mae = 0;
  double evs = 0;     // 1 - Var(truth - pred) / Var(truth), population variances
  Eigen::Index n_points = 0;
  // run metadata, filled by the runner
  std::string problem;
  std::string activation;
  std::uint64_t seed = 0;
  long iterations = 0;
  double runtime_seconds = 0;
};

/// Throws ConfigError for mismatched/short inputs and for degenerate truth
/// (zero norm or zero variance).
MetricsReport compute_metrics(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

}  // namespace reactpinn
