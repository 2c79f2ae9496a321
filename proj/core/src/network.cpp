// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/network.hpp"

#include <cmath>

#include "reactpinn/autodiff.hpp"
#include "reactpinn/errors.hpp"
#include "reactpinn/rng.hpp"

namespace reactpinn {

namespace {

const char* act_param_label(ActivationKind kind, std::size_t i) {
  static const char* react_names[] = {"a", "b", "c", "d"};
  static const char* abu_names[] = {"l0", "l1", "l2", "l3", "l4"};
  switch (kind) {
    case ActivationKind::STan: return "beta";
    case ActivationKind::REAct: return react_names[i];
    case ActivationKind::ABU: return abu_names[i];
    default: return "p";
  }
}

}  // namespace

ParameterView::ParameterView(const NetworkConfig& cfg) : cfg_(cfg) {
  if (cfg.input_dim <= 0 || cfg.output_dim <= 0 || cfg.hidden.empty()) {
    throw ConfigError("network config needs positive input/output dims and at least one hidden layer");
  }
  for (int h : cfg.hidden) {
    if (h <= 0) throw ConfigError("zero-width hidden layer");
  }
  widths_.push_back(cfg.input_dim);
  widths_.insert(widths_.end(), cfg.hidden.begin(), cfg.hidden.end());
  widths_.push_back(cfg.output_dim);

  std::size_t off = 0;
  const int L = num_linear_layers();
  for (int l = 0; l < L; ++l) {
    w_off_.push_back(off);
    off += static_cast<std::size_t>(layer_out(l)) * layer_in(l);
    b_off_.push_back(off);
    off += static_cast<std::size_t>(layer_out(l));
  }
  act_off_front_ = off;
  const std::size_t n_act = activation_param_count(cfg.activation);
  for (std::size_t h = 0; h < cfg.hidden.size(); ++h) {
    act_off_.push_back(off);
    off += n_act;
  }
  phys_off_ = off;
  flat_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(off));
}

Eigen::Map<const Eigen::MatrixXd> ParameterView::weight(int l) const {
  return {flat_.data() + w_off_[l], layer_out(l), layer_in(l)};
}
Eigen::Map<Eigen::MatrixXd> ParameterView::weight(int l) {
  return {flat_.data() + w_off_[l], layer_out(l), layer_in(l)};
}
Eigen::Map<const Eigen::VectorXd> ParameterView::bias(int l) const {
  return {flat_.data() + b_off_[l], layer_out(l)};
}
Eigen::Map<Eigen::VectorXd> ParameterView::bias(int l) {
  return {flat_.data() + b_off_[l], layer_out(l)};
}

std::span<const double> ParameterView::activation_params(int hidden_layer) const {
  return {flat_.data() + act_off_[hidden_layer], activation_param_count(cfg_.activation)};
}
std::span<double> ParameterView::activation_params(int hidden_layer) {
  return {flat_.data() + act_off_[hidden_layer], activation_param_count(cfg_.activation)};
}

void ParameterView::add_physical(const std::string& name, double value) {
  for (const auto& n : phys_names_) {
    if (n == name) throw ConfigError("physical parameter already registered: " + name);
  }
  phys_names_.push_back(name);
  flat_.conservativeResize(flat_.size() + 1);
  flat_[flat_.size() - 1] = value;
}

bool ParameterView::has_physical(const std::string& name) const {
  for (const auto& n : phys_names_) {
    if (n == name) return true;
  }
  return false;
}

std::size_t ParameterView::physical_index(const std::string& name) const {
  for (std::size_t i = 0; i < phys_names_.size(); ++i) {
    if (phys_names_[i] == name) return phys_off_ + i;
  }
  throw ConfigError("unknown physical parameter: " + name);
}

double ParameterView::physical(const std::string& name) const {
  return flat_[static_cast<Eigen::Index>(physical_index(name))];
}

std::string ParameterView::param_name(std::size_t i) const {
  const int L = num_linear_layers();
  for (int l = 0; l < L; ++l) {
    const std::size_t nw = static_cast<std::size_t>(layer_out(l)) * layer_in(l);
    if (i >= w_off_[l] && i < w_off_[l] + nw) {
      const std::size_t k = i - w_off_[l];  // column-major
      const std::size_t col = k / layer_out(l), row = k % layer_out(l);
      return "W" + std::to_string(l) + "[" + std::to_string(row) + "," +
             std::to_string(col) + "]";
    }
    if (i >= b_off_[l] && i < b_off_[l] + static_cast<std::size_t>(layer_out(l))) {
      return "b" + std::to_string(l) + "[" + std::to_string(i - b_off_[l]) + "]";
    }
  }
  const std::size_t n_act = activation_param_count(cfg_.activation);
  for (std::size_t h = 0; h < act_off_.size(); ++h) {
    if (i >= act_off_[h] && i < act_off_[h] + n_act) {
      return "act" + std::to_string(h) + "." +
             act_param_label(cfg_.activation, i - act_off_[h]);
    }
  }
  if (i >= phys_off_ && i < phys_off_ + phys_names_.size()) {
    return "phys." + phys_names_[i - phys_off_];
  }
  throw ConfigError("parameter index out of range: " + std::to_string(i));
}

std::size_t ParameterView::param_index(const std::string& name) const {
  for (std::size_t i = 0; i < total_trainable(); ++i) {
    if (param_name(i) == name) return i;
  }
  throw ConfigError("unknown parameter name: " + name);
}

ParameterView build_network(const NetworkConfig& cfg) {
  ParameterView view(cfg);
  const int L = view.num_linear_layers();
  for (int l = 0; l < L; ++l) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(l));
    const double limit = std::sqrt(6.0 / (view.layer_in(l) + view.layer_out(l)));
    auto W = view.weight(l);
    // fixed generation order: row-major scan
    for (int r = 0; r < W.rows(); ++r) {
      for (int c = 0; c < W.cols(); ++c) {
        W(r, c) = rng.uniform(-limit, limit);
      }
    }
    view.bias(l).setZero();
  }
  const auto init = init_activation(cfg.activation);
  for (std::size_t h = 0; h < cfg.hidden.size(); ++h) {
    auto dst = view.activation_params(static_cast<int>(h));
    for (std::size_t i = 0; i < init.size(); ++i) dst[i] = init[i];
  }
  return view;
}

double forward(const ParameterView& view, std::span<const double> input) {
  return evaluate_with_input_derivatives(view, input, 0).value;
}

double GradientMap::at(const ParameterView& view, const std::string& name) const {
  return values[static_cast<Eigen::Index>(view.param_index(name))];
}

}  // namespace reactpinn
