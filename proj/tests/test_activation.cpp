// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reactpinn/activation.hpp"
#include "reactpinn/errors.hpp"
#include "reactpinn/rng.hpp"
#include "support.hpp"

using namespace reactpinn;
using testsupport::central_diff;
using testsupport::central_diff2;
using testsupport::close_rel;

TEST_CASE("react evaluates its closed form") {
  const REActParams tanh_point{-2, 0, -2, 0};
  CHECK(react_eval(0.0, tanh_point) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(react_eval(1.0, tanh_point) == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));

  const REActParams p{1, 0, 1, 0};
  CHECK(react_eval(0.0, p) == doctest::Approx(0.0).epsilon(1e-15));
  // (1 - e^x)/(1 + e^x) = -tanh(x/2)
  CHECK(react_eval(2.0, p) == doctest::Approx(-std::tanh(1.0)).epsilon(1e-12));
}

TEST_CASE("react-tanh degeneracy on [-10, 10]") {
  const REActParams p{-2, 0, -2, 0};
  for (int i = 0; i <= 1000; ++i) {
    const double x = -10.0 + 20.0 * i / 1000.0;
    CHECK(std::abs(react_eval(x, p) - std::tanh(x)) <= 1e-12);
  }
}

TEST_CASE("react stays finite for exponent arguments up to 700") {
  for (double a : {-350.0, 350.0}) {
    for (double c : {-350.0, 350.0}) {
      const REActParams p{a, 0, c, 0};
      for (double x : {-2.0, -1.0, 1.0, 2.0}) {  // |ax|, |cx| up to 700
        CHECK(std::isfinite(react_eval(x, p)));
      }
    }
  }
}

TEST_CASE("react derivatives at the tanh point") {
  const REActParams p{-2, 0, -2, 0};
  const REActDerivatives d = react_derivatives(0.0, p);
  CHECK(d.dydx == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.d2ydx2 == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("react derivatives match finite differences") {
  const double x = 0.7;
  const REActParams p{-1.3, 0.2, -2.1, -0.4};
  const REActDerivatives d = react_derivatives(x, p);
  const double h = 1e-5;

  auto fx = [&](double v) { return react_eval(v, p); };
  CHECK(close_rel(d.dydx, central_diff(fx, x, h), 1e-5));
  CHECK(close_rel(d.d2ydx2, central_diff2(fx, x, 1e-4), 1e-5));

  auto with = [&](double a, double b, double c, double dd) {
    return react_eval(x, REActParams{a, b, c, dd});
  };
  CHECK(close_rel(d.dyda,
                  central_diff([&](double v) { return with(v, p.b, p.c, p.d); }, p.a, h),
                  1e-5));
  CHECK(close_rel(d.dydb,
                  central_diff([&](double v) { return with(p.a, v, p.c, p.d); }, p.b, h),
                  1e-5));
  CHECK(close_rel(d.dydc,
                  central_diff([&](double v) { return with(p.a, p.b, v, p.d); }, p.c, h),
                  1e-5));
  CHECK(close_rel(d.dydd,
                  central_diff([&](double v) { return with(p.a, p.b, p.c, v); }, p.d, h),
                  1e-5));
}

TEST_CASE("stan evaluation") {
  CHECK(stan_eval(0.0, {0.3}) == doctest::Approx(0.0));
  CHECK(stan_eval(1.0, {0.0}) == doctest::Approx(std::tanh(1.0)));
  CHECK(stan_eval(2.0, {0.1}) == doctest::Approx(1.2 * std::tanh(2.0)).epsilon(1e-12));
  // init beta = 0.1
  const auto init = init_activation(ActivationKind::STan);
  CHECK(stan_eval(1.0, {init[0]}) == doctest::Approx(1.1 * std::tanh(1.0)).epsilon(1e-12));
}

TEST_CASE("abu evaluation and convexity") {
  ABUParams uniform;
  // 0.2 * (relu(0) + sigmoid(0) + sin(0) + tanh(0) + softplus(0))
  CHECK(abu_eval(0.0, uniform) ==
        doctest::Approx(0.2 * (0.5 + std::log(2.0))).epsilon(1e-12));

  ABUParams saturated;
  saturated.logits = {0, 0, 0, 50, 0};
  CHECK(abu_eval(1.0, saturated) == doctest::Approx(std::tanh(1.0)).epsilon(1e-9));

  ABUParams mixed;
  mixed.logits = {0.3, -0.1, 0.4, 0.0, 0.2};
  const double x = 0.5;
  // independent hand evaluation of softmax and the five candidates
  double esum = 0;
  std::array<double, 5> e{};
  for (int i = 0; i < 5; ++i) {
    e[i] = std::exp(mixed.logits[i]);
    esum += e[i];
  }
  const double sp = std::log1p(std::exp(x));
  const double expected =
      (e[0] * x + e[1] * (1.0 / (1.0 + std::exp(-x))) + e[2] * std::sin(x) +
       e[3] * std::tanh(x) + e[4] * sp) /
      esum;
  CHECK(abu_eval(x, mixed) == doctest::Approx(expected).epsilon(1e-12));

  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    ABUParams p;
    for (auto& l : p.logits) l = rng.uniform(-50.0, 50.0);
    auto w = abu_weights(p);
    double sum = 0;
    for (double wi : w) {
      CHECK(wi > 0.0);
      sum += wi;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("fixed activations") {
  CHECK(fixed_eval(ActivationKind::Softplus, 0.0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(fixed_eval(ActivationKind::ReLU, -3.0) == 0.0);
  CHECK(fixed_eval(ActivationKind::Sigmoid, 0.0) == 0.5);
  CHECK_THROWS_AS(fixed_eval(ActivationKind::REAct, 0.0), ConfigError);
}

TEST_CASE("init_activation values") {
  const auto react = init_activation(ActivationKind::REAct);
  REQUIRE(react.size() == 4);
  const REActParams p{react[0], react[1], react[2], react[3]};
  for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    CHECK(react_eval(x, p) == doctest::Approx(std::tanh(x)).epsilon(1e-13));
  }
  ABUParams abu;
  const auto abu_init = init_activation(ActivationKind::ABU);
  std::copy(abu_init.begin(), abu_init.end(), abu.logits.begin());
  for (double w : abu_weights(abu)) CHECK(w == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(init_activation(ActivationKind::Tanh).empty());
}

TEST_CASE("derivative towers match finite differences across kinds") {
  // 100 random (x, params) draws per learnable kind, params within [-3, 3]
  // around nothing in particular; fixed kinds get the same treatment.
  const ActivationKind kinds[] = {
      ActivationKind::Sigmoid, ActivationKind::Tanh, ActivationKind::Sin,
      ActivationKind::Softplus, ActivationKind::STan, ActivationKind::ABU,
      ActivationKind::REAct};
  Rng rng(12345);
  for (ActivationKind kind : kinds) {
    const std::size_t np = activation_param_count(kind);
    for (int trial = 0; trial < 100; ++trial) {
      const double x = rng.uniform(-2.0, 2.0);
      std::vector<double> params(np);
      for (auto& p : params) p = rng.uniform(-3.0, 3.0);
      const ActContext ctx = make_act_context(kind, params);
      const ActTower t = act_tower(ctx, x, 3);

      auto f = [&](double v) { return act_tower(ctx, v, 0).y; };
      const double h = 1e-5;
      CHECK(close_rel(t.y1, central_diff(f, x, h), 1e-5));
      CHECK(close_rel(t.y2, central_diff2(f, x, 1e-4), 2e-5));
      auto f1 = [&](double v) { return act_tower(ctx, v, 1).y1; };
      CHECK(close_rel(t.y3, central_diff2(f1, x, 1e-4), 2e-5));

      if (np > 0) {
        std::vector<ParamTower> pt(np);
        act_param_towers(ctx, x, t, pt);
        for (std::size_t j = 0; j < np; ++j) {
          auto fp = [&](double v, int order) {
            std::vector<double> q = params;
            q[j] = v;
            const ActContext c2 = make_act_context(kind, q);
            const ActTower tt = act_tower(c2, x, order);
            return order == 0 ? tt.y : (order == 1 ? tt.y1 : tt.y2);
          };
          CHECK(close_rel(pt[j].dy,
                          central_diff([&](double v) { return fp(v, 0); }, params[j], h),
                          1e-5));
          CHECK(close_rel(pt[j].dy1,
                          central_diff([&](double v) { return fp(v, 1); }, params[j], h),
                          1e-5));
          CHECK(close_rel(pt[j].dy2,
                          central_diff([&](double v) { return fp(v, 2); }, params[j], h),
                          2e-5));
        }
      }
    }
  }
}

TEST_CASE("relu tower uses the zero convention") {
  const ActContext ctx = make_act_context(ActivationKind::ReLU, {});
  const ActTower at_zero = act_tower(ctx, 0.0, 3);
  CHECK(at_zero.y == 0.0);
  CHECK(at_zero.y1 == 0.0);  // derivative at exactly 0 is defined as 0
  CHECK(at_zero.y2 == 0.0);
  const ActTower pos = act_tower(ctx, 1.5, 3);
  CHECK(pos.y == 1.5);
  CHECK(pos.y1 == 1.0);
  CHECK(pos.y2 == 0.0);
}

TEST_CASE("activation name round trip") {
  for (ActivationKind k :
       {ActivationKind::ReLU, ActivationKind::Sigmoid, ActivationKind::Tanh,
        ActivationKind::Sin, ActivationKind::Softplus, ActivationKind::STan,
        ActivationKind::ABU, ActivationKind::REAct}) {
    CHECK(parse_activation(activation_name(k)) == k);
  }
  CHECK_THROWS_AS(parse_activation("gelu"), ConfigError);
}
