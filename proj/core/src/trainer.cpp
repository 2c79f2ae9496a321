// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/trainer.hpp"

#include <chrono>
#include <cmath>
#include <optional>

#include "reactpinn/batch.hpp"
#include "reactpinn/errors.hpp"

namespace reactpinn {

namespace {

constexpr Eigen::Index kBlock = 4096;

// Ordered block reduction: partials are summed by block index so results do
// not depend on the thread count.
double ordered_sum(const std::vector<double>& partials) {
  double s = 0;
  for (double p : partials) s += p;
  return s;
}

class LossEngine {
 public:
  LossEngine(const ProblemSpec& spec, const ParameterView& view,
             const SampleSet& samples)
      : spec_(&spec), samples_(&samples) {
    if (!spec.is_regression && samples.collocation.cols() > 0) {
      phy_.emplace(view, 2);
    }
    if (samples.initial.cols() > 0) {
      ic_.emplace(view, samples.initial_velocities.size() > 0 ? 1 : 0);
    }
    if (samples.boundary_time_samples > 0) {
      bc_.emplace(view, 0);
    }
    if (samples.data_points.cols() > 0) {
      data_.emplace(view, 0);
    }
    if (!spec.trainable_param.empty()) {
      param_index_ = view.physical_index(spec.trainable_param);
    }
  }

  LossBreakdown evaluate(const ParameterView& view, const LossWeights& w,
                         Eigen::VectorXd* grad) {
    LossBreakdown b;
    if (phy_) b.phy = physics_term(view, w.lambda_p, grad);
    if (ic_) b.ic = ic_term(w.lambda_I, grad);
    if (bc_) b.bc = bc_term(w.lambda_B, grad);
    if (data_) b.data = data_term(w.lambda_d, grad);
    b.total = w.lambda_p * b.phy + w.lambda_I * b.ic + w.lambda_B * b.bc +
              w.lambda_d * b.data;
    return b;
  }

 private:
  double physics_term(const ParameterView& view, double lambda,
                      Eigen::VectorXd* grad) {
    const Eigen::MatrixXd& pts = samples_->collocation;
    const Eigen::Index n = pts.cols();
    phy_->forward(pts, grad != nullptr);
    const int dirs = phy_->dirs();
    double param_value = 0;
    if (!spec_->trainable_param.empty()) {
      param_value = view.physical(spec_->trainable_param);
    } else {
      switch (spec_->name) {
        case ProblemName::Heat: param_value = spec_->constants.at("alpha"); break;
        case ProblemName::Burgers: param_value = spec_->constants.at("nu"); break;
        case ProblemName::AllenCahn: param_value = spec_->constants.at("d"); break;
        case ProblemName::Wave: param_value = spec_->constants.at("c"); break;
        default: break;
      }
    }

    const Eigen::Index nb = (n + kBlock - 1) / kBlock;
    std::vector<double> sq(nb, 0.0), pgrad(nb, 0.0);
    const double scale = grad ? 2.0 * lambda / static_cast<double>(n) : 0.0;
    BatchEvaluator& ev = *phy_;
    const ProblemSpec& spec = *spec_;

#pragma omp parallel for schedule(static)
    for (Eigen::Index blk = 0; blk < nb; ++blk) {
      const Eigen::Index n0 = blk * kBlock;
      const Eigen::Index n1 = std::min(n, n0 + kBlock);
      double local_sq = 0, local_pg = 0;
      for (Eigen::Index i = n0; i < n1; ++i) {
        double g[2] = {0, 0}, h[2] = {0, 0};
        for (int k = 0; k < dirs; ++k) {
          g[k] = ev.out_g(k, i);
          h[k] = ev.out_h(k, i);
        }
        const double x = pts(0, i);
        const double t = spec.is_ode ? pts(0, i) : pts(1, i);
        const ResidualLinearization lin = residual_linearization(
            spec, x, t, ev.out_value(i), g, h, param_value);
        local_sq += lin.r * lin.r;
        if (grad) {
          const double s = scale * lin.r;
          ev.seed_value(i, s * lin.dv);
          for (int k = 0; k < dirs; ++k) {
            if (lin.dg[k] != 0.0) ev.seed_g(k, i, s * lin.dg[k]);
            if (lin.dh[k] != 0.0) ev.seed_h(k, i, s * lin.dh[k]);
          }
          local_pg += s * lin.dparam;
        }
      }
      sq[blk] = local_sq;
      pgrad[blk] = local_pg;
    }

    if (grad) {
      phy_->backward(*grad);
      if (!spec_->trainable_param.empty()) {
        (*grad)[static_cast<Eigen::Index>(param_index_)] += ordered_sum(pgrad);
      }
    }
    return ordered_sum(sq) / static_cast<double>(n);
  }

  double ic_term(double lambda, Eigen::VectorXd* grad) {
    const Eigen::Index n = samples_->initial.cols();
    ic_->forward(samples_->initial, grad != nullptr);
    const bool vel = samples_->initial_velocities.size() > 0;
    const int t_dir = spec_->is_ode ? 0 : 1;
    double sum = 0;
    const double scale = 2.0 * lambda / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double err = ic_->out_value(i) - samples_->initial_values[i];
      sum += err * err;
      if (grad) ic_->seed_value(i, scale * err);
      if (vel) {
        const double errv = ic_->out_g(t_dir, i) - samples_->initial_velocities[i];
        sum += errv * errv;
        if (grad) ic_->seed_g(t_dir, i, scale * errv);
      }
    }
    if (grad) ic_->backward(*grad);
    return sum / static_cast<double>(n);
  }

  double bc_term(double lambda, Eigen::VectorXd* grad) {
    const Eigen::Index n = samples_->boundary.cols();
    const double nt = static_cast<double>(samples_->boundary_time_samples);
    bc_->forward(samples_->boundary, grad != nullptr);
    double sum = 0;
    const double scale = 2.0 * lambda / nt;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double err = bc_->out_value(i) - samples_->boundary_values[i];
      sum += err * err;
      if (grad) bc_->seed_value(i, scale * err);
    }
    if (grad) bc_->backward(*grad);
    return sum / nt;
  }

  double data_term(double lambda, Eigen::VectorXd* grad) {
    const Eigen::Index n = samples_->data_points.cols();
    data_->forward(samples_->data_points, grad != nullptr);
    const Eigen::Index nb = (n + kBlock - 1) / kBlock;
    std::vector<double> sq(nb, 0.0);
    const double scale = 2.0 * lambda / static_cast<double>(n);
    BatchEvaluator& ev = *data_;
    const Eigen::VectorXd& values = samples_->data_values;
    const bool with_grad = grad != nullptr;

#pragma omp parallel for schedule(static)
    for (Eigen::Index blk = 0; blk < nb; ++blk) {
      const Eigen::Index n0 = blk * kBlock;
      const Eigen::Index n1 = std::min(n, n0 + kBlock);
      double local = 0;
      for (Eigen::Index i = n0; i < n1; ++i) {
        const double err = ev.out_value(i) - values[i];
        local += err * err;
        if (with_grad) ev.seed_value(i, scale * err);
      }
      sq[blk] = local;
    }
    if (grad) data_->backward(*grad);
    return ordered_sum(sq) / static_cast<double>(n);
  }

  const ProblemSpec* spec_;
  const SampleSet* samples_;
  std::optional<BatchEvaluator> phy_, ic_, bc_, data_;
  std::size_t param_index_ = 0;
};

}  // namespace

LossBreakdown loss_and_gradient(const ProblemSpec& spec, const ParameterView& view,
                                const SampleSet& samples, const LossWeights& weights,
                                Eigen::VectorXd& grad) {
  grad.setZero(static_cast<Eigen::Index>(view.total_trainable()));
  LossEngine engine(spec, view, samples);
  return engine.evaluate(view, weights, &grad);
}

RunLog train_model(const ProblemSpec& spec, TrainState& state,
                   const SampleSet& samples, const TrainOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunLog log;
  LossEngine engine(spec, state.view, samples);
  Eigen::VectorXd grad(static_cast<Eigen::Index>(state.view.total_trainable()));
  state.opt = make_optimizer(options.optimizer, options.lr, state.view.total_trainable());

  LossBreakdown last;
  long last_logged = -1;
  for (long it = 0; it < options.iterations; ++it) {
    grad.setZero();
    const LossBreakdown b = engine.evaluate(state.view, options.weights, &grad);
    if (!std::isfinite(b.total)) {
      log.diverged = true;
      break;
    }
    last = b;
    if (it % options.log_stride == 0) {
      log.history.push_back({it, b});
      last_logged = it;
    }
    try {
      optimizer_step(state.opt, state.view, GradientMap{grad});
    } catch (const NumericError&) {
      log.diverged = true;
      break;
    }
    state.iteration = it + 1;
  }
  if (state.iteration > 0 && last_logged != state.iteration - 1) {
    log.history.push_back({state.iteration - 1, last});
  }
  log.iterations_run = state.iteration;

  if (!spec.trainable_param.empty()) {
    log.param_estimate = state.view.physical(spec.trainable_param);
    const double truth = spec.constants.at(spec.trainable_param);
    log.param_true = truth;
    log.param_pct_error = 100.0 * std::abs(*log.param_estimate - truth) / truth;
  }
  log.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return log;
}

}  // namespace reactpinn
