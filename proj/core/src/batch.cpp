// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/batch.hpp"

#include <algorithm>
#include <vector>

#include "reactpinn/errors.hpp"

namespace reactpinn {

namespace {
constexpr Eigen::Index kBlock = 4096;  // fixed block size keeps reductions deterministic
}

BatchEvaluator::BatchEvaluator(const ParameterView& view, int order)
    : view_(&view), order_(order), dirs_(view.config().input_dim) {
  if (order < 0 || order > 2) throw ConfigError("batch order must be 0, 1 or 2");
  ncomp_ = 1 + (order >= 1 ? dirs_ : 0) + (order >= 2 ? dirs_ : 0);
}

void BatchEvaluator::forward(const Eigen::MatrixXd& points, bool with_gradients) {
  const NetworkConfig& cfg = view_->config();
  if (points.rows() != cfg.input_dim) {
    throw ConfigError("point dimension does not match network input");
  }
  n_ = points.cols();
  cached_ = with_gradients;
  const int L = view_->num_linear_layers();

  A_.resize(static_cast<std::size_t>(L));
  Z_.resize(static_cast<std::size_t>(L - 1));

  // input jets: value block = coordinates, g_k block = unit row k
  Eigen::MatrixXd& A0 = A_[0];
  A0.setZero(cfg.input_dim, ncomp_ * n_);
  A0.middleCols(0, n_) = points;
  if (order_ >= 1) {
    for (int k = 0; k < dirs_; ++k) {
      A0.row(k).segment(block(1 + k), n_).setOnes();
    }
  }

  for (int l = 0; l < L; ++l) {
    const auto W = view_->weight(l);
    const auto b = view_->bias(l);
    Eigen::MatrixXd& Z = (l + 1 < L) ? Z_[l] : out_;
    Z.resize(view_->layer_out(l), ncomp_ * n_);
    Z.noalias() = W * A_[static_cast<std::size_t>(l)];
    Z.middleCols(0, n_).colwise() += b;
    if (l + 1 < L) {
      A_[static_cast<std::size_t>(l + 1)].resize(Z.rows(), Z.cols());
      apply_activation(l);
    }
  }

  seed_.setZero(1, ncomp_ * n_);
}

void BatchEvaluator::apply_activation(int l) {
  const ActContext ctx =
      make_act_context(view_->config().activation, view_->activation_params(l));
  const Eigen::MatrixXd& Z = Z_[static_cast<std::size_t>(l)];
  Eigen::MatrixXd& A = A_[static_cast<std::size_t>(l + 1)];
  const int rows = static_cast<int>(Z.rows());
  const Eigen::Index nb = (n_ + kBlock - 1) / kBlock;

#pragma omp parallel for schedule(static)
  for (Eigen::Index blk = 0; blk < nb; ++blk) {
    const Eigen::Index n0 = blk * kBlock;
    const Eigen::Index n1 = std::min(n_, n0 + kBlock);
    for (Eigen::Index n = n0; n < n1; ++n) {
      for (int i = 0; i < rows; ++i) {
        const double z = Z(i, n);
        const ActTower t = act_tower(ctx, z, order_);
        A(i, n) = t.y;
        if (order_ >= 1) {
          for (int k = 0; k < dirs_; ++k) {
            const double zg = Z(i, block(1 + k) + n);
            A(i, block(1 + k) + n) = t.y1 * zg;
            if (order_ >= 2) {
              const double zh = Z(i, block(1 + dirs_ + k) + n);
              A(i, block(1 + dirs_ + k) + n) = t.y2 * zg * zg + t.y1 * zh;
            }
          }
        }
      }
    }
  }
}

void BatchEvaluator::backward(Eigen::VectorXd& grad) {
  if (!cached_) throw ConfigError("backward requires forward(..., true)");
  const NetworkConfig& cfg = view_->config();
  const int L = view_->num_linear_layers();
  const std::size_t n_act = activation_param_count(cfg.activation);

  Eigen::MatrixXd* dZ = &dZ_;
  *dZ = seed_;

  for (int l = L - 1; l >= 0; --l) {
    const int out = view_->layer_out(l);
    const int in = view_->layer_in(l);
    Eigen::Map<Eigen::MatrixXd> dW(grad.data() + view_->weight_offset(l), out, in);
    Eigen::Map<Eigen::VectorXd> db(grad.data() + view_->bias_offset(l), out);
    dW.noalias() += dZ->topRows(out) * A_[static_cast<std::size_t>(l)].transpose();
    db.noalias() += dZ->topRows(out).middleCols(0, n_).rowwise().sum();
    if (l == 0) break;

    const auto W = view_->weight(l);
    dA_.resize(in, ncomp_ * n_);
    dA_.noalias() = W.transpose() * dZ->topRows(out);

    // adjoint through the activation of hidden layer l-1
    const int h = l - 1;
    const ActContext ctx =
        make_act_context(cfg.activation, view_->activation_params(h));
    const Eigen::MatrixXd& Z = Z_[static_cast<std::size_t>(h)];
    dZ->resize(in, ncomp_ * n_);
    const int rows = in;
    const int tower_order = std::min(order_ + 1, 3);
    const Eigen::Index nb = (n_ + kBlock - 1) / kBlock;

    std::vector<double> part;  // per-block activation-parameter partials
    if (n_act > 0) part.assign(static_cast<std::size_t>(nb) * n_act, 0.0);
    Eigen::MatrixXd& dZr = *dZ;

#pragma omp parallel for schedule(static)
    for (Eigen::Index blk = 0; blk < nb; ++blk) {
      const Eigen::Index n0 = blk * kBlock;
      const Eigen::Index n1 = std::min(n_, n0 + kBlock);
      double* pacc = n_act > 0 ? part.data() + static_cast<std::size_t>(blk) * n_act
                               : nullptr;
      ParamTower pt[5];
      for (Eigen::Index n = n0; n < n1; ++n) {
        for (int i = 0; i < rows; ++i) {
          const double z = Z(i, n);
          const ActTower t = act_tower(ctx, z, tower_order);
          const double da_v = dA_(i, n);
          double dz_v = da_v * t.y1;
          if (order_ >= 1) {
            for (int k = 0; k < dirs_; ++k) {
              const double zg = Z(i, block(1 + k) + n);
              const double da_g = dA_(i, block(1 + k) + n);
              dz_v += da_g * t.y2 * zg;
              double dz_g = da_g * t.y1;
              if (order_ >= 2) {
                const double zh = Z(i, block(1 + dirs_ + k) + n);
                const double da_h = dA_(i, block(1 + dirs_ + k) + n);
                dz_v += da_h * (t.y3 * zg * zg + t.y2 * zh);
                dz_g += da_h * 2.0 * t.y2 * zg;
                dZr(i, block(1 + dirs_ + k) + n) = da_h * t.y1;
              }
              dZr(i, block(1 + k) + n) = dz_g;
            }
          }
          dZr(i, n) = dz_v;
          if (n_act > 0) {
            act_param_towers(ctx, z, t, {pt, n_act});
            for (std::size_t j = 0; j < n_act; ++j) {
              double acc = da_v * pt[j].dy;
              if (order_ >= 1) {
                for (int k = 0; k < dirs_; ++k) {
                  const double zg = Z(i, block(1 + k) + n);
                  acc += dA_(i, block(1 + k) + n) * pt[j].dy1 * zg;
                  if (order_ >= 2) {
                    const double zh = Z(i, block(1 + dirs_ + k) + n);
                    acc += dA_(i, block(1 + dirs_ + k) + n) *
                           (pt[j].dy2 * zg * zg + pt[j].dy1 * zh);
                  }
                }
              }
              pacc[j] += acc;
            }
          }
        }
      }
    }
    if (n_act > 0) {
      // ordered block sum keeps results independent of thread count
      for (Eigen::Index blk = 0; blk < nb; ++blk) {
        for (std::size_t j = 0; j < n_act; ++j) {
          grad[static_cast<Eigen::Index>(view_->activation_offset(h) + j)] +=
              part[static_cast<std::size_t>(blk) * n_act + j];
        }
      }
    }
  }
}

Eigen::VectorXd BatchEvaluator::predict(const ParameterView& view,
                                        const Eigen::MatrixXd& points) {
  const Eigen::Index chunk = 16384;
  Eigen::VectorXd out(points.cols());
  BatchEvaluator ev(view, 0);
  for (Eigen::Index start = 0; start < points.cols(); start += chunk) {
    const Eigen::Index len = std::min(chunk, points.cols() - start);
    ev.forward(points.middleCols(start, len), false);
    for (Eigen::Index i = 0; i < len; ++i) out[start + i] = ev.out_value(i);
  }
  return out;
}

}  // namespace reactpinn
