// SPDX-License-Identifier: Apache-2.0
#include "reactpinn/activation.hpp"

#include <algorithm>
#include <cmath>

#include "reactpinn/errors.hpp"

namespace reactpinn {

namespace {

double stable_sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double stable_softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

// REAct evaluated as sigmoid(-(cx+d)) - exp((ax+b) - softplus(cx+d)).
// Both terms stay representable whenever the true value is; |exponent
// arguments| up to ~700 never overflow on this route.
struct REActState {
  double s, p, T;  // s = 1/(1+e^C), p = s(1-s), T = e^A / (1+e^C)
  double s1, s2, s3;
  double p1, p2;
  double T1, T2, T3;
};

REActState react_state(double x, double a, double b, double c, double d) {
  REActState st;
  const double A = a * x + b;
  const double C = c * x + d;
  st.s = stable_sigmoid(-C);
  st.T = std::exp(A - stable_softplus(C));
  st.p = st.s * (1.0 - st.s);
  st.s1 = -c * st.p;
  st.p1 = st.s1 * (1.0 - 2.0 * st.s);
  st.s2 = -c * st.p1;
  st.p2 = st.s2 * (1.0 - 2.0 * st.s) - 2.0 * st.s1 * st.s1;
  st.s3 = -c * st.p2;
  const double w = a - c * (1.0 - st.s);
  const double w1 = c * st.s1;
  const double w2 = c * st.s2;
  st.T1 = w * st.T;
  st.T2 = (w1 + w * w) * st.T;
  st.T3 = (w2 + 3.0 * w * w1 + w * w * w) * st.T;
  return st;
}

struct Tower5 {
  ActTower g[5];
};

// Candidate towers in ABU order {ReLU, Sigmoid, Sin, Tanh, Softplus}.
Tower5 abu_candidates(double x) {
  Tower5 t;
  t.g[0] = ActTower{x > 0.0 ? x : 0.0, x > 0.0 ? 1.0 : 0.0, 0.0, 0.0};
  const double sg = stable_sigmoid(x);
  const double sg1 = sg * (1.0 - sg);
  const double sg2 = sg1 * (1.0 - 2.0 * sg);
  const double sg3 = sg2 * (1.0 - 2.0 * sg) - 2.0 * sg1 * sg1;
  t.g[1] = ActTower{sg, sg1, sg2, sg3};
  const double sn = std::sin(x);
  const double cs = std::cos(x);
  t.g[2] = ActTower{sn, cs, -sn, -cs};
  const double th = std::tanh(x);
  const double th1 = 1.0 - th * th;
  const double th2 = -2.0 * th * th1;
  const double th3 = -2.0 * (th1 * th1 + th * th2);
  t.g[3] = ActTower{th, th1, th2, th3};
  t.g[4] = ActTower{stable_softplus(x), sg, sg1, sg2};
  return t;
}

std::array<double, 5> softmax5(const std::array<double, 5>& logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  std::array<double, 5> w{};
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) {
    w[i] = std::exp(logits[i] - m);
    sum += w[i];
  }
  for (int i = 0; i < 5; ++i) w[i] /= sum;
  return w;
}

}  // namespace

ActivationKind parse_activation(const std::string& name) {
  if (name == "relu") return ActivationKind::ReLU;
  if (name == "sigmoid") return ActivationKind::Sigmoid;
  if (name == "tanh") return ActivationKind::Tanh;
  if (name == "sin") return ActivationKind::Sin;
  if (name == "softplus") return ActivationKind::Softplus;
  if (name == "stan") return ActivationKind::STan;
  if (name == "abu") return ActivationKind::ABU;
  if (name == "react") return ActivationKind::REAct;
  throw ConfigError("unknown activation: " + name);
}

std::string activation_name(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::ReLU: return "relu";
    case ActivationKind::Sigmoid: return "sigmoid";
    case ActivationKind::Tanh: return "tanh";
    case ActivationKind::Sin: return "sin";
    case ActivationKind::Softplus: return "softplus";
    case ActivationKind::STan: return "stan";
    case ActivationKind::ABU: return "abu";
    case ActivationKind::REAct: return "react";
  }
  throw ConfigError("invalid activation kind");
}

std::size_t activation_param_count(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::STan: return 1;
    case ActivationKind::ABU: return 5;
    case ActivationKind::REAct: return 4;
    default: return 0;
  }
}

std::vector<double> init_activation(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::STan: return {0.1};
    case ActivationKind::ABU: return {0, 0, 0, 0, 0};
    case ActivationKind::REAct: return {-2.0, 0.0, -2.0, 0.0};
    default: return {};
  }
}

double react_eval(double x, const REActParams& p) {
  const double A = p.a * x + p.b;
  const double C = p.c * x + p.d;
  const double y = stable_sigmoid(-C) - std::exp(A - stable_softplus(C));
  if (!std::isfinite(y)) {
    throw NumericError("react_eval: non-finite value at x=" + std::to_string(x));
  }
  return y;
}

REActDerivatives react_derivatives(double x, const REActParams& p) {
  const REActState st = react_state(x, p.a, p.b, p.c, p.d);
  REActDerivatives d;
  d.dydx = st.s1 - st.T1;
  d.d2ydx2 = st.s2 - st.T2;
  d.dyda = -x * st.T;
  d.dydb = -st.T;
  const double G = (1.0 - st.s) * st.T - st.p;
  d.dydc = x * G;
  d.dydd = G;
  if (!std::isfinite(d.dydx) || !std::isfinite(d.d2ydx2)) {
    throw NumericError("react_derivatives: non-finite derivative at x=" +
                       std::to_string(x));
  }
  return d;
}

double stan_eval(double x, const STanParams& p) {
  return (1.0 + p.beta * x) * std::tanh(x);
}

std::array<double, 5> abu_weights(const ABUParams& p) { return softmax5(p.logits); }

double abu_eval(double x, const ABUParams& p) {
  const auto w = softmax5(p.logits);
  const auto cand = abu_candidates(x);
  double y = 0.0;
  for (int i = 0; i < 5; ++i) y += w[i] * cand.g[i].y;
  return y;
}

double fixed_eval(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::ReLU: return x > 0.0 ? x : 0.0;
    case ActivationKind::Sigmoid: return stable_sigmoid(x);
    case ActivationKind::Tanh: return std::tanh(x);
    case ActivationKind::Sin: return std::sin(x);
    case ActivationKind::Softplus: return stable_softplus(x);
    default:
      throw ConfigError("fixed_eval: " + activation_name(kind) +
                        " is not a fixed activation");
  }
}

ActContext make_act_context(ActivationKind kind, std::span<const double> params) {
  if (params.size() != activation_param_count(kind)) {
    throw ConfigError("activation parameter count mismatch for " +
                      activation_name(kind));
  }
  ActContext ctx;
  ctx.kind = kind;
  for (std::size_t i = 0; i < params.size() && i < 4; ++i) ctx.p[i] = params[i];
  if (kind == ActivationKind::ABU) {
    std::array<double, 5> logits;
    std::copy_n(params.begin(), 5, logits.begin());
    ctx.w = softmax5(logits);
  }
  return ctx;
}

ActTower act_tower(const ActContext& ctx, double x, int order) {
  ActTower t;
  switch (ctx.kind) {
    case ActivationKind::ReLU:
      t.y = x > 0.0 ? x : 0.0;
      t.y1 = x > 0.0 ? 1.0 : 0.0;
      return t;
    case ActivationKind::Sigmoid: {
      const double s = stable_sigmoid(x);
      const double s1 = s * (1.0 - s);
      const double s2 = s1 * (1.0 - 2.0 * s);
      t = ActTower{s, s1, s2, s2 * (1.0 - 2.0 * s) - 2.0 * s1 * s1};
      break;
    }
    case ActivationKind::Tanh: {
      const double th = std::tanh(x);
      const double th1 = 1.0 - th * th;
      const double th2 = -2.0 * th * th1;
      t = ActTower{th, th1, th2, -2.0 * (th1 * th1 + th * th2)};
      break;
    }
    case ActivationKind::Sin: {
      const double sn = std::sin(x);
      const double cs = std::cos(x);
      t = ActTower{sn, cs, -sn, -cs};
      break;
    }
    case ActivationKind::Softplus: {
      const double s = stable_sigmoid(x);
      const double s1 = s * (1.0 - s);
      t = ActTower{stable_softplus(x), s, s1, s1 * (1.0 - 2.0 * s)};
      break;
    }
    case ActivationKind::STan: {
      const double beta = ctx.p[0];
      const double th = std::tanh(x);
      const double th1 = 1.0 - th * th;
      const double th2 = -2.0 * th * th1;
      const double th3 = -2.0 * (th1 * th1 + th * th2);
      const double u = 1.0 + beta * x;
      t.y = u * th;
      t.y1 = beta * th + u * th1;
      t.y2 = 2.0 * beta * th1 + u * th2;
      t.y3 = 3.0 * beta * th2 + u * th3;
      break;
    }
    case ActivationKind::ABU: {
      const auto cand = abu_candidates(x);
      for (int i = 0; i < 5; ++i) {
        t.y += ctx.w[i] * cand.g[i].y;
        t.y1 += ctx.w[i] * cand.g[i].y1;
        t.y2 += ctx.w[i] * cand.g[i].y2;
        t.y3 += ctx.w[i] * cand.g[i].y3;
      }
      break;
    }
    case ActivationKind::REAct: {
      const REActState st = react_state(x, ctx.p[0], ctx.p[1], ctx.p[2], ctx.p[3]);
      t = ActTower{st.s - st.T, st.s1 - st.T1, st.s2 - st.T2, st.s3 - st.T3};
      break;
    }
  }
  if (order < 3) t.y3 = 0;
  if (order < 2) t.y2 = 0;
  if (order < 1) t.y1 = 0;
  return t;
}

void act_param_towers(const ActContext& ctx, double x, const ActTower& tower,
                      std::span<ParamTower> out) {
  switch (ctx.kind) {
    case ActivationKind::STan: {
      const double th = std::tanh(x);
      const double th1 = 1.0 - th * th;
      const double th2 = -2.0 * th * th1;
      out[0] = ParamTower{x * th, th + x * th1, 2.0 * th1 + x * th2};
      return;
    }
    case ActivationKind::ABU: {
      const auto cand = abu_candidates(x);
      for (int j = 0; j < 5; ++j) {
        out[j] = ParamTower{ctx.w[j] * (cand.g[j].y - tower.y),
                            ctx.w[j] * (cand.g[j].y1 - tower.y1),
                            ctx.w[j] * (cand.g[j].y2 - tower.y2)};
      }
      return;
    }
    case ActivationKind::REAct: {
      const REActState st = react_state(x, ctx.p[0], ctx.p[1], ctx.p[2], ctx.p[3]);
      out[0] = ParamTower{-x * st.T, -(st.T + x * st.T1), -(2.0 * st.T1 + x * st.T2)};
      out[1] = ParamTower{-st.T, -st.T1, -st.T2};
      const double G = (1.0 - st.s) * st.T - st.p;
      const double G1 = -st.s1 * st.T + (1.0 - st.s) * st.T1 - st.p1;
      const double G2 = -st.s2 * st.T - 2.0 * st.s1 * st.T1 +
                        (1.0 - st.s) * st.T2 - st.p2;
      out[2] = ParamTower{x * G, G + x * G1, 2.0 * G1 + x * G2};
      out[3] = ParamTower{G, G1, G2};
      return;
    }
    default:
      return;  // fixed activations have no parameters
  }
}

}  // namespace reactpinn
