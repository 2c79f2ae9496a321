// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "reactpinn/batch.hpp"
#include "reactpinn/loss.hpp"
#include "reactpinn/oracle.hpp"
#include "reactpinn/trainer.hpp"

using namespace reactpinn;

static void BM_ReactTower(benchmark::State& state) {
  const ActContext ctx =
      make_act_context(ActivationKind::REAct, init_activation(ActivationKind::REAct));
  double x = -2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(act_tower(ctx, x, 3));
    x += 1e-6;
  }
}
BENCHMARK(BM_ReactTower);

static void BM_HeatIteration(benchmark::State& state) {
  // one full-batch gradient evaluation at the published heat settings
  const ProblemSpec spec = make_problem(ProblemName::Heat);
  NetworkConfig cfg{2, {48, 48, 48}, 1, ActivationKind::REAct, 42};
  ParameterView view = build_network(cfg);
  const SampleSet samples = sample_grid(spec, spec.train_domain);
  Eigen::VectorXd grad;
  for (auto _ : state) {
    LossBreakdown b = loss_and_gradient(spec, view, samples, LossWeights{}, grad);
    benchmark::DoNotOptimize(b.total);
  }
}
BENCHMARK(BM_HeatIteration)->Unit(benchmark::kMillisecond);

static void BM_TapeHeatGradient(benchmark::State& state) {
  const ProblemSpec spec = make_problem(ProblemName::Heat);
  NetworkConfig cfg{2, {8, 8}, 1, ActivationKind::REAct, 42};
  ParameterView view = build_network(cfg);
  Domain small = spec.train_domain;
  small.n_space = 5;
  small.n_time = 5;
  const SampleSet samples = sample_grid(spec, small);
  for (auto _ : state) {
    Tape tape(2, 2);
    TapeNetwork net(tape, view);
    Var loss = physics_loss(net, spec, samples.collocation);
    benchmark::DoNotOptimize(gradient_of_scalar(loss));
  }
}
BENCHMARK(BM_TapeHeatGradient)->Unit(benchmark::kMillisecond);

static void BM_HeatCrankNicolson(benchmark::State& state) {
  const ProblemSpec spec = make_problem(ProblemName::Heat);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fd_solve(spec, 201, 201));
  }
}
BENCHMARK(BM_HeatCrankNicolson)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
