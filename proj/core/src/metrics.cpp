// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/metrics.hpp"

#include <cmath>

#include "reactpinn/errors.hpp"

namespace reactpinn {

MetricsReport compute_metrics(const Eigen::VectorXd& pred,
                              const Eigen::VectorXd& truth) {
  if (pred.size() != truth.size()) {
    throw ConfigError("metrics: prediction and truth lengths differ");
  }
  if (pred.size() < 2) throw ConfigError("metrics: need at least two points");

  const double truth_norm = truth.norm();
  const double n = static_cast<double>(truth.size());
  const Eigen::VectorXd err = pred - truth;

  const double truth_mean = truth.mean();
  const double truth_var = (truth.array() - truth_mean).square().sum() / n;
  if (truth_norm == 0.0 || truth_var == 0.0) {
    throw ConfigError("metrics: degenerate truth (zero norm or zero variance)");
  }

  MetricsReport r;
  r.n_points = truth.size();
  r.l2_rel = err.norm() / truth_norm;
  r.mse = err.squaredNorm() / n;
  r.mae = err.cwiseAbs().sum() / n;
  const double err_mean = err.mean();
  const double err_var = (err.array() - err_mean).square().sum() / n;
  r.evs = 1.0 - err_var / truth_var;
  return r;
}

}  // namespace reactpinn
