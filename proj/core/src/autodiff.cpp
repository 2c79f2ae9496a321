// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reactpinn/errors.hpp"

namespace reactpinn {

// ---------------------------------------------------------------------------
// Per-point jet evaluation (no recording)
// ---------------------------------------------------------------------------

Jet evaluate_with_input_derivatives(const ParameterView& view,
                                    std::span<const double> input, int order) {
  const NetworkConfig& cfg = view.config();
  const int dim = cfg.input_dim;
  if (static_cast<int>(input.size()) != dim) {
    throw ConfigError("input dimension mismatch: expected " + std::to_string(dim) +
                      ", got " + std::to_string(input.size()));
  }
  if (order < 0 || order > 2) throw ConfigError("derivative order must be 0, 1 or 2");

  // per-neuron value, first and second derivative along each coordinate
  std::vector<double> v(input.begin(), input.end());
  std::vector<std::array<double, 2>> g(dim), h(dim);
  for (int i = 0; i < dim; ++i) {
    g[i] = {0, 0};
    h[i] = {0, 0};
    if (order >= 1) g[i][i] = 1.0;
  }

  const int L = view.num_linear_layers();
  std::vector<double> nv, nn;
  std::vector<std::array<double, 2>> ng, nh;
  for (int l = 0; l < L; ++l) {
    const auto W = view.weight(l);
    const auto b = view.bias(l);
    const int out = view.layer_out(l);
    nv.assign(out, 0.0);
    ng.assign(out, {0, 0});
    nh.assign(out, {0, 0});
    for (int r = 0; r < out; ++r) {
      double sv = b[r];
      std::array<double, 2> sg{0, 0}, sh{0, 0};
      for (int c = 0; c < W.cols(); ++c) {
        const double w = W(r, c);
        sv += w * v[c];
        for (int k = 0; k < dim; ++k) {
          sg[k] += w * g[c][k];
          sh[k] += w * h[c][k];
        }
      }
      nv[r] = sv;
      ng[r] = sg;
      nh[r] = sh;
    }
    if (l + 1 < L) {
      const ActContext ctx =
          make_act_context(cfg.activation, view.activation_params(l));
      for (int r = 0; r < out; ++r) {
        const ActTower t = act_tower(ctx, nv[r], order);
        nv[r] = t.y;
        for (int k = 0; k < dim; ++k) {
          const double zg = ng[r][k];
          nh[r][k] = t.y2 * zg * zg + t.y1 * nh[r][k];
          ng[r][k] = t.y1 * zg;
        }
      }
    }
    for (int r = 0; r < out; ++r) {
      if (!std::isfinite(nv[r])) {
        throw NumericError("non-finite activation output at layer " + std::to_string(l));
      }
    }
    v.swap(nv);
    g.swap(ng);
    h.swap(nh);
  }

  // d1/d2 are sized by the requested order so consumers can detect jets that
  // carry too little
  Jet jet;
  jet.value = v[0];
  if (order >= 1) {
    jet.d1.assign(dim, 0.0);
    for (int k = 0; k < dim; ++k) jet.d1[k] = g[0][k];
  }
  if (order >= 2) {
    jet.d2.assign(dim, 0.0);
    for (int k = 0; k < dim; ++k) jet.d2[k] = h[0][k];
  }
  return jet;
}

// ---------------------------------------------------------------------------
// Tape
// ---------------------------------------------------------------------------

Tape::Tape(int n_dirs, int order) : n_dirs_(n_dirs), order_(order) {
  if (n_dirs < 0 || n_dirs > 2 || order < 0 || order > 2) {
    throw ConfigError("tape supports up to two directions and order two");
  }
}

void Tape::declare_params(std::size_t n) {
  n_params_ = n;
  params_declared_ = true;
}

Var Tape::constant(double v) {
  nodes_.push_back({Op::Const});
  vals_.push_back({v, {0, 0}, {0, 0}});
  return Var(this, static_cast<std::int32_t>(nodes_.size() - 1));
}

Var Tape::param(std::size_t slot, double value) {
  if (params_declared_ && slot >= n_params_) {
    throw ConfigError("parameter slot " + std::to_string(slot) +
                      " not registered on this tape");
  }
  if (!params_declared_ && slot >= n_params_) n_params_ = slot + 1;
  nodes_.push_back({Op::Param, -1, -1, slot});
  vals_.push_back({value, {0, 0}, {0, 0}});
  return Var(this, static_cast<std::int32_t>(nodes_.size() - 1));
}

Var Tape::input(double value, int direction) {
  if (direction < 0) throw ConfigError("input direction out of range");
  nodes_.push_back({Op::Input});
  JetVal jv{value, {0, 0}, {0, 0}};
  // directions beyond the tape's width are carried as constants
  if (order_ >= 1 && direction < n_dirs_) jv.g[direction] = 1.0;
  vals_.push_back(jv);
  return Var(this, static_cast<std::int32_t>(nodes_.size() - 1));
}

double Tape::value(Var v) const { return vals_[v.idx_].v; }

Jet Tape::jet(Var v) const {
  Jet j;
  j.value = vals_[v.idx_].v;
  j.d1.assign(n_dirs_, 0.0);
  j.d2.assign(n_dirs_, 0.0);
  for (int k = 0; k < n_dirs_; ++k) {
    j.d1[k] = vals_[v.idx_].g[k];
    j.d2[k] = vals_[v.idx_].h[k];
  }
  return j;
}

double Var::value() const { return tape_->value(*this); }
Jet Var::jet() const { return tape_->jet(*this); }

namespace {

// f, f', f'', f''' of the unary tape primitives at the primal value
struct UnaryTower {
  double f, f1, f2, f3;
};

UnaryTower unary_tower_impl(int op_raw, double x) {
  using Op = Tape::Op;
  const Op op = static_cast<Op>(op_raw);
  switch (op) {
    case Op::Neg: return {-x, -1, 0, 0};
    case Op::Inv: {
      const double i = 1.0 / x;
      return {i, -i * i, 2 * i * i * i, -6 * i * i * i * i};
    }
    case Op::Exp: {
      const double e = std::exp(x);
      return {e, e, e, e};
    }
    case Op::Log: {
      const double i = 1.0 / x;
      return {std::log(x), i, -i * i, 2 * i * i * i};
    }
    case Op::Sin: return {std::sin(x), std::cos(x), -std::sin(x), -std::cos(x)};
    case Op::Cos: return {std::cos(x), -std::sin(x), -std::cos(x), std::sin(x)};
    case Op::Tanh: {
      const double t = std::tanh(x);
      const double t1 = 1 - t * t;
      const double t2 = -2 * t * t1;
      return {t, t1, t2, -2 * (t1 * t1 + t * t2)};
    }
    case Op::Sigmoid: {
      const double s = x >= 0 ? 1.0 / (1.0 + std::exp(-x))
                              : std::exp(x) / (1.0 + std::exp(x));
      const double s1 = s * (1 - s);
      const double s2 = s1 * (1 - 2 * s);
      return {s, s1, s2, s2 * (1 - 2 * s) - 2 * s1 * s1};
    }
    case Op::Softplus: {
      const double sp = x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
      const double s = x >= 0 ? 1.0 / (1.0 + std::exp(-x))
                              : std::exp(x) / (1.0 + std::exp(x));
      const double s1 = s * (1 - s);
      return {sp, s, s1, s1 * (1 - 2 * s)};
    }
    case Op::Relu:
      return {x > 0 ? x : 0.0, x > 0 ? 1.0 : 0.0, 0, 0};
    case Op::Sqr: return {x * x, 2 * x, 2, 0};
    default: return {0, 0, 0, 0};
  }
}

}  // namespace

Var Tape::push_unary(Op op, Var a) {
  const JetVal& u = vals_[a.idx_];
  const UnaryTower t = unary_tower_impl(static_cast<int>(op), u.v);
  JetVal w;
  w.v = t.f;
  for (int k = 0; k < n_dirs_; ++k) {
    if (order_ >= 1) w.g[k] = t.f1 * u.g[k];
    if (order_ >= 2) w.h[k] = t.f2 * u.g[k] * u.g[k] + t.f1 * u.h[k];
  }
  nodes_.push_back({op, a.idx_, -1});
  vals_.push_back(w);
  return Var(this, static_cast<std::int32_t>(nodes_.size() - 1));
}

Var Tape::push_binary(Op op, Var a, Var b) {
  const JetVal& u = vals_[a.idx_];
  const JetVal& t = vals_[b.idx_];
  JetVal w;
  switch (op) {
    case Op::Add:
      w.v = u.v + t.v;
      for (int k = 0; k < n_dirs_; ++k) {
        w.g[k] = u.g[k] + t.g[k];
        w.h[k] = u.h[k] + t.h[k];
      }
      break;
    case Op::Sub:
      w.v = u.v - t.v;
      for (int k = 0; k < n_dirs_; ++k) {
        w.g[k] = u.g[k] - t.g[k];
        w.h[k] = u.h[k] - t.h[k];
      }
      break;
    case Op::Mul:
      w.v = u.v * t.v;
      for (int k = 0; k < n_dirs_; ++k) {
        if (order_ >= 1) w.g[k] = u.g[k] * t.v + u.v * t.g[k];
        if (order_ >= 2)
          w.h[k] = u.h[k] * t.v + 2.0 * u.g[k] * t.g[k] + u.v * t.h[k];
      }
      break;
    default:
      throw ConfigError("not a binary op");
  }
  nodes_.push_back({op, a.idx_, b.idx_});
  vals_.push_back(w);
  return Var(this, static_cast<std::int32_t>(nodes_.size() - 1));
}

Var operator+(Var a, Var b) { return a.tape_->push_binary(Tape::Op::Add, a, b); }
Var operator-(Var a, Var b) { return a.tape_->push_binary(Tape::Op::Sub, a, b); }
Var operator*(Var a, Var b) { return a.tape_->push_binary(Tape::Op::Mul, a, b); }
Var operator/(Var a, Var b) { return a * inv(b); }
Var operator-(Var a) { return a.tape_->push_unary(Tape::Op::Neg, a); }
Var exp(Var a) { return a.tape_->push_unary(Tape::Op::Exp, a); }
Var log(Var a) { return a.tape_->push_unary(Tape::Op::Log, a); }
Var sin(Var a) { return a.tape_->push_unary(Tape::Op::Sin, a); }
Var cos(Var a) { return a.tape_->push_unary(Tape::Op::Cos, a); }
Var tanh(Var a) { return a.tape_->push_unary(Tape::Op::Tanh, a); }
Var sigmoid(Var a) { return a.tape_->push_unary(Tape::Op::Sigmoid, a); }
Var softplus(Var a) { return a.tape_->push_unary(Tape::Op::Softplus, a); }
Var relu(Var a) { return a.tape_->push_unary(Tape::Op::Relu, a); }
Var sqr(Var a) { return a.tape_->push_unary(Tape::Op::Sqr, a); }
Var inv(Var a) { return a.tape_->push_unary(Tape::Op::Inv, a); }

Var d1(Var a, int k) {
  Tape& tp = *a.tape_;
  if (k < 0 || k >= tp.n_dirs_ || tp.order_ < 1) {
    throw ConfigError("d1: direction not carried by this tape");
  }
  tp.nodes_.push_back({Tape::Op::ExtractD1, a.idx_, -1, static_cast<std::size_t>(k)});
  tp.vals_.push_back({tp.vals_[a.idx_].g[k], {0, 0}, {0, 0}});
  return Var(&tp, static_cast<std::int32_t>(tp.nodes_.size() - 1));
}

Var d2(Var a, int k) {
  Tape& tp = *a.tape_;
  if (k < 0 || k >= tp.n_dirs_ || tp.order_ < 2) {
    throw ConfigError("d2: direction not carried by this tape");
  }
  tp.nodes_.push_back({Tape::Op::ExtractD2, a.idx_, -1, static_cast<std::size_t>(k)});
  tp.vals_.push_back({tp.vals_[a.idx_].h[k], {0, 0}, {0, 0}});
  return Var(&tp, static_cast<std::int32_t>(tp.nodes_.size() - 1));
}

GradientMap Tape::gradient(Var loss) const {
  if (loss.tape_ != this) throw ConfigError("scalar was recorded on another tape");
  if (!std::isfinite(vals_[loss.idx_].v)) {
    throw NumericError("gradient of non-finite scalar");
  }
  std::vector<JetVal> adj(nodes_.size());
  adj[loss.idx_].v = 1.0;

  GradientMap out;
  out.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_params_));

  for (std::int32_t i = static_cast<std::int32_t>(nodes_.size()) - 1; i >= 0; --i) {
    const Node& n = nodes_[i];
    const JetVal& w = adj[i];
    if (w.v == 0.0 && w.g[0] == 0.0 && w.g[1] == 0.0 && w.h[0] == 0.0 &&
        w.h[1] == 0.0) {
      continue;
    }
    switch (n.op) {
      case Op::Const:
      case Op::Input:
        break;
      case Op::Param:
        // leaves carry zero derivative components; dL/dtheta is the value
        // adjoint alone
        out.values[static_cast<Eigen::Index>(n.slot)] += w.v;
        break;
      case Op::Add:
        for (int k = 0; k < n_dirs_; ++k) {
          adj[n.a].g[k] += w.g[k];
          adj[n.a].h[k] += w.h[k];
          adj[n.b].g[k] += w.g[k];
          adj[n.b].h[k] += w.h[k];
        }
        adj[n.a].v += w.v;
        adj[n.b].v += w.v;
        break;
      case Op::Sub:
        for (int k = 0; k < n_dirs_; ++k) {
          adj[n.a].g[k] += w.g[k];
          adj[n.a].h[k] += w.h[k];
          adj[n.b].g[k] -= w.g[k];
          adj[n.b].h[k] -= w.h[k];
        }
        adj[n.a].v += w.v;
        adj[n.b].v -= w.v;
        break;
      case Op::ExtractD1:
        adj[n.a].g[n.slot] += w.v;
        break;
      case Op::ExtractD2:
        adj[n.a].h[n.slot] += w.v;
        break;
      case Op::Mul: {
        const JetVal& u = vals_[n.a];
        const JetVal& t = vals_[n.b];
        double av = w.v * t.v;
        double bv = w.v * u.v;
        for (int k = 0; k < n_dirs_; ++k) {
          av += w.g[k] * t.g[k] + w.h[k] * t.h[k];
          bv += w.g[k] * u.g[k] + w.h[k] * u.h[k];
          adj[n.a].g[k] += w.g[k] * t.v + 2.0 * w.h[k] * t.g[k];
          adj[n.b].g[k] += w.g[k] * u.v + 2.0 * w.h[k] * u.g[k];
          adj[n.a].h[k] += w.h[k] * t.v;
          adj[n.b].h[k] += w.h[k] * u.v;
        }
        adj[n.a].v += av;
        adj[n.b].v += bv;
        break;
      }
      default: {  // unary
        const JetVal& u = vals_[n.a];
        const UnaryTower t = unary_tower_impl(static_cast<int>(n.op), u.v);
        double av = w.v * t.f1;
        for (int k = 0; k < n_dirs_; ++k) {
          av += w.g[k] * t.f2 * u.g[k] +
                w.h[k] * (t.f3 * u.g[k] * u.g[k] + t.f2 * u.h[k]);
          adj[n.a].g[k] += w.g[k] * t.f1 + 2.0 * w.h[k] * t.f2 * u.g[k];
          adj[n.a].h[k] += w.h[k] * t.f1;
        }
        adj[n.a].v += av;
        break;
      }
    }
  }
  return out;
}

GradientMap Var::gradient() const { return tape_->gradient(*this); }

GradientMap gradient_of_scalar(Var loss) { return loss.gradient(); }

// ---------------------------------------------------------------------------
// TapeNetwork
// ---------------------------------------------------------------------------

TapeNetwork::TapeNetwork(Tape& tape, const ParameterView& view)
    : tape_(&tape), view_(&view) {
  tape.declare_params(view.total_trainable());
  leaves_.reserve(view.total_trainable());
  for (std::size_t i = 0; i < view.total_trainable(); ++i) {
    leaves_.push_back(tape.param(i, view.flat()[static_cast<Eigen::Index>(i)]));
  }
}

Var TapeNetwork::physical(const std::string& name) const {
  return leaves_[view_->physical_index(name)];
}

Var TapeNetwork::output(std::span<const double> input) {
  const NetworkConfig& cfg = view_->config();
  if (static_cast<int>(input.size()) != cfg.input_dim) {
    throw ConfigError("input dimension mismatch in recorded forward pass");
  }
  Tape& tp = *tape_;
  std::vector<Var> act;
  act.reserve(static_cast<std::size_t>(cfg.input_dim));
  for (int i = 0; i < cfg.input_dim; ++i) {
    act.push_back(tp.input(input[i], i < tp.dirs() ? i : tp.dirs() - 1));
  }

  const int L = view_->num_linear_layers();
  std::size_t w_cursor = 0;  // walk the flat layout: W then b per layer
  std::vector<Var> next;
  for (int l = 0; l < L; ++l) {
    const int in = view_->layer_in(l);
    const int out = view_->layer_out(l);
    next.clear();
    next.reserve(static_cast<std::size_t>(out));
    // column-major weight block at w_cursor
    for (int r = 0; r < out; ++r) {
      Var z = leaves_[w_cursor + static_cast<std::size_t>(in) * out + r];  // bias
      for (int c = 0; c < in; ++c) {
        const std::size_t slot = w_cursor + static_cast<std::size_t>(c) * out + r;
        z = z + leaves_[slot] * act[static_cast<std::size_t>(c)];
      }
      next.push_back(z);
    }
    w_cursor += static_cast<std::size_t>(in) * out + out;
    if (l + 1 < L) {
      // activation with learnable parameters as leaves
      const std::size_t n_act = activation_param_count(cfg.activation);
      std::size_t act_slot = 0;
      if (n_act > 0) {
        // activation blocks start after all weights/biases
        act_slot = view_->weight_bias_count() + static_cast<std::size_t>(l) * n_act;
      }
      for (int r = 0; r < out; ++r) {
        Var z = next[static_cast<std::size_t>(r)];
        switch (cfg.activation) {
          case ActivationKind::ReLU: next[r] = relu(z); break;
          case ActivationKind::Sigmoid: next[r] = sigmoid(z); break;
          case ActivationKind::Tanh: next[r] = tanh(z); break;
          case ActivationKind::Sin: next[r] = sin(z); break;
          case ActivationKind::Softplus: next[r] = softplus(z); break;
          case ActivationKind::STan: {
            Var beta = leaves_[act_slot];
            next[r] = (tp.constant(1.0) + beta * z) * tanh(z);
            break;
          }
          case ActivationKind::REAct: {
            Var a = leaves_[act_slot], b = leaves_[act_slot + 1];
            Var c = leaves_[act_slot + 2], d = leaves_[act_slot + 3];
            Var A = a * z + b;
            Var C = c * z + d;
            next[r] = sigmoid(-C) - exp(A - softplus(C));
            break;
          }
          case ActivationKind::ABU: {
            // shift by the primal max; softmax is shift-invariant so treating
            // the shift as a constant keeps gradients exact
            double m = 0.0;
            for (int j = 0; j < 5; ++j) {
              m = std::max(m, tp.value(leaves_[act_slot + j]));
            }
            Var mv = tp.constant(m);
            std::array<Var, 5> e;
            Var denom = tp.constant(0.0);
            for (int j = 0; j < 5; ++j) {
              e[j] = exp(leaves_[act_slot + j] - mv);
              denom = denom + e[j];
            }
            Var id = inv(denom);
            Var acc = tp.constant(0.0);
            std::array<Var, 5> gz{relu(z), sigmoid(z), sin(z), tanh(z), softplus(z)};
            for (int j = 0; j < 5; ++j) acc = acc + e[j] * id * gz[j];
            next[r] = acc;
            break;
          }
        }
      }
    }
    act = next;
  }
  return act[0];
}

}  // namespace reactpinn
