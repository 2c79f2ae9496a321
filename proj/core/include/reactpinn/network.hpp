// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "reactpinn/activation.hpp"

namespace reactpinn {

struct NetworkConfig {
  int input_dim = 2;
  std::vector<int> hidden;
  int output_dim = 1;
  ActivationKind activation = ActivationKind::Tanh;
  std::uint64_t seed = 42;
};

/// All trainable state of one model: layer weights and biases, per-layer
/// activation shape parameters, and optional named physical parameters.
/// Everything lives in one flat vector (stable layout) so optimizers and
/// gradient maps index it directly; weights are Eigen maps into it.
class ParameterView {
 public:
  ParameterView() = default;
  explicit ParameterView(const NetworkConfig& cfg);

  const NetworkConfig& config() const { return cfg_; }
  int num_linear_layers() const { return static_cast<int>(cfg_.hidden.size()) + 1; }
  int layer_in(int l) const { return widths_[l]; }
  int layer_out(int l) const { return widths_[l + 1]; }

  Eigen::Map<const Eigen::MatrixXd> weight(int l) const;
  Eigen::Map<Eigen::MatrixXd> weight(int l);
  Eigen::Map<const Eigen::VectorXd> bias(int l) const;
  Eigen::Map<Eigen::VectorXd> bias(int l);

  std::span<const double> activation_params(int hidden_layer) const;
  std::span<double> activation_params(int hidden_layer);

  /// Registers a trainable physical parameter (appended to the flat layout).
  void add_physical(const std::string& name, double value);
  bool has_physical(const std::string& name) const;
  double physical(const std::string& name) const;
  std::size_t physical_index(const std::string& name) const;
  const std::vector<std::string>& physical_names() const { return phys_names_; }

  /// Flat-layout offsets, for buffers aligned with this view (gradients,
  /// optimizer moments).
  std::size_t weight_offset(int l) const { return w_off_[l]; }
  std::size_t bias_offset(int l) const { return b_off_[l]; }
  std::size_t activation_offset(int hidden_layer) const { return act_off_[hidden_layer]; }

  /// Weights + biases only (the count the model-size tables talk about).
  std::size_t weight_bias_count() const { return act_off_front_; }
  /// Every trainable scalar: weights, biases, activation params, physical.
  std::size_t total_trainable() const { return static_cast<std::size_t>(flat_.size()); }

  const Eigen::VectorXd& flat() const { return flat_; }
  Eigen::VectorXd& flat() { return flat_; }

  /// Stable identifier of one flat slot, e.g. "W1[3,2]", "b0[5]",
  /// "act2.a", "phys.alpha".
  std::string param_name(std::size_t flat_index) const;
  /// Inverse of param_name; throws ConfigError for unknown names.
  std::size_t param_index(const std::string& name) const;

 private:
  NetworkConfig cfg_;
  std::vector<int> widths_;
  std::vector<std::size_t> w_off_, b_off_, act_off_;
  std::size_t act_off_front_ = 0;
  std::vector<std::string> phys_names_;
  std::size_t phys_off_ = 0;
  Eigen::VectorXd flat_;
};

/// Glorot-uniform weights from the seeded stream, zero biases, activation
/// parameters at their init_activation values. Deterministic per seed.
ParameterView build_network(const NetworkConfig& cfg);

/// Scalar forward pass; identical code path to the order-0 jet evaluation.
double forward(const ParameterView& view, std::span<const double> input);

/// Gradient of a scalar with respect to every trainable parameter, aligned
/// with ParameterView's flat layout.
struct GradientMap {
  Eigen::VectorXd values;
  double at(const ParameterView& view, const std::string& name) const;
};

}  // namespace reactpinn
