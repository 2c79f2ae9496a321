// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "reactpinn/network.hpp"

namespace reactpinn {

/// Full-batch jet propagation through an MLP plus the matching backward pass.
/// Buffers hold one column block per jet component, laid out
/// [value | g_0 .. g_{D-1} | h_0 .. h_{D-1}] with D = input dimension, so a
/// linear layer is a single GEMM across all components. This is the training
/// engine; it computes the same quantities as the recording tape and is
/// cross-checked against it in the tests.
class BatchEvaluator {
 public:
  /// order: 0 values only, 1 adds first input derivatives, 2 adds pure
  /// seconds. The view must outlive the evaluator.
  BatchEvaluator(const ParameterView& view, int order);

  /// Forward pass over points (input_dim x N). Caches layer states when
  /// with_gradients is set; otherwise only the outputs are kept.
  void forward(const Eigen::MatrixXd& points, bool with_gradients);

  Eigen::Index num_points() const { return n_; }
  int order() const { return order_; }
  int dirs() const { return dirs_; }

  // network output components, one entry per point
  double out_value(Eigen::Index n) const { return out_(0, n); }
  double out_g(int k, Eigen::Index n) const { return out_(0, block(1 + k) + n); }
  double out_h(int k, Eigen::Index n) const { return out_(0, block(1 + dirs_ + k) + n); }

  // adjoint seeds (zeroed by forward); set, then call backward
  void seed_value(Eigen::Index n, double v) { seed_(0, n) += v; }
  void seed_g(int k, Eigen::Index n, double v) { seed_(0, block(1 + k) + n) += v; }
  void seed_h(int k, Eigen::Index n, double v) { seed_(0, block(1 + dirs_ + k) + n) += v; }

  /// Accumulates d(seeded scalar)/d(parameter) into grad (sized like the
  /// view's flat vector). Requires forward(..., true) first.
  void backward(Eigen::VectorXd& grad);

  /// Convenience: plain values on possibly large point sets, chunked.
  static Eigen::VectorXd predict(const ParameterView& view,
                                 const Eigen::MatrixXd& points);

 private:
  Eigen::Index block(int comp) const { return comp * n_; }
  void apply_activation(int hidden_layer);

  const ParameterView* view_;
  int order_;
  int dirs_;
  int ncomp_;
  Eigen::Index n_ = 0;
  bool cached_ = false;

  std::vector<Eigen::MatrixXd> Z_;  // pre-activation jets per hidden layer
  std::vector<Eigen::MatrixXd> A_;  // post-activation jets; A_[0] is the input
  Eigen::MatrixXd out_;             // 1 x ncomp*N
  Eigen::MatrixXd seed_;            // 1 x ncomp*N
  Eigen::MatrixXd dA_, dZ_;         // backward workspaces
};

}  // namespace reactpinn
