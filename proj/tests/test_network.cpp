// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reactpinn/autodiff.hpp"
#include "reactpinn/errors.hpp"
#include "reactpinn/network.hpp"
#include "support.hpp"

using namespace reactpinn;

TEST_CASE("weight and bias counts follow the layer shapes") {
  // 2*32+32 + 2*(32*32+32) + 32*1+1
  NetworkConfig c32{2, {32, 32, 32}, 1, ActivationKind::Tanh, 1};
  CHECK(ParameterView(c32).weight_bias_count() == 2241);
  // same arithmetic at width 48: 2*48+48 + 2*(48*48+48) + 48+1
  NetworkConfig c48{2, {48, 48, 48}, 1, ActivationKind::Tanh, 1};
  CHECK(ParameterView(c48).weight_bias_count() == 4897);

  NetworkConfig react{2, {32, 32, 32}, 1, ActivationKind::REAct, 1};
  CHECK(ParameterView(react).total_trainable() == 2241 + 3 * 4);
}

TEST_CASE("builds are deterministic per seed") {
  NetworkConfig cfg{2, {16, 16}, 1, ActivationKind::REAct, 12345};
  const ParameterView a = build_network(cfg);
  const ParameterView b = build_network(cfg);
  CHECK(a.flat() == b.flat());

  cfg.seed = 54321;
  const ParameterView c = build_network(cfg);
  CHECK(a.flat() != c.flat());
}

TEST_CASE("glorot bounds and zero biases") {
  NetworkConfig cfg{2, {32}, 1, ActivationKind::Tanh, 7};
  const ParameterView view = build_network(cfg);
  const double limit0 = std::sqrt(6.0 / (2 + 32));
  CHECK(view.weight(0).cwiseAbs().maxCoeff() <= limit0);
  CHECK(view.bias(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(view.bias(1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero configurations are rejected") {
  NetworkConfig bad{2, {32, 0, 32}, 1, ActivationKind::Tanh, 1};
  CHECK_THROWS_AS(ParameterView(bad), ConfigError);
  NetworkConfig empty{2, {}, 1, ActivationKind::Tanh, 1};
  CHECK_THROWS_AS(ParameterView(empty), ConfigError);
}

TEST_CASE("all-zero parameters give zero output") {
  NetworkConfig cfg{2, {8, 8}, 1, ActivationKind::Tanh, 1};
  ParameterView view = build_network(cfg);
  view.flat().setZero();
  CHECK(forward(view, std::array{0.7, -0.3}) == 0.0);
}

TEST_CASE("forward equals the order-0 jet value exactly") {
  for (ActivationKind kind : {ActivationKind::Tanh, ActivationKind::REAct,
                              ActivationKind::ABU, ActivationKind::Softplus}) {
    NetworkConfig cfg{2, {12, 12}, 1, kind, 31};
    const ParameterView view = testsupport::random_network(cfg, 9);
    Rng rng(55);
    for (int i = 0; i < 20; ++i) {
      const std::array<double, 2> pt{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      CHECK(forward(view, pt) == evaluate_with_input_derivatives(view, pt, 0).value);
    }
  }
}

TEST_CASE("parameter names are stable and invertible") {
  NetworkConfig cfg{2, {3}, 1, ActivationKind::REAct, 2};
  ParameterView view = build_network(cfg);
  view.add_physical("alpha", 0.4);

  CHECK(view.param_name(0) == "W0[0,0]");
  const std::size_t bias0 = view.bias_offset(0);
  CHECK(view.param_name(bias0) == "b0[0]");
  const std::size_t act0 = view.activation_offset(0);
  CHECK(view.param_name(act0) == "act0.a");
  CHECK(view.param_name(act0 + 3) == "act0.d");
  CHECK(view.param_name(view.physical_index("alpha")) == "phys.alpha");

  for (std::size_t i = 0; i < view.total_trainable(); ++i) {
    CHECK(view.param_index(view.param_name(i)) == i);
  }
}

TEST_CASE("physical parameters") {
  NetworkConfig cfg{2, {4}, 1, ActivationKind::Tanh, 3};
  ParameterView view = build_network(cfg);
  CHECK(!view.has_physical("alpha"));
  view.add_physical("alpha", 0.4);
  CHECK(view.has_physical("alpha"));
  CHECK(view.physical("alpha") == 0.4);
  CHECK_THROWS_AS(view.add_physical("alpha", 1.0), ConfigError);
  CHECK_THROWS_AS(view.physical("c"), ConfigError);
  // flat slot is live for the optimizer
  view.flat()[static_cast<Eigen::Index>(view.physical_index("alpha"))] = 0.7;
  CHECK(view.physical("alpha") == 0.7);
}
