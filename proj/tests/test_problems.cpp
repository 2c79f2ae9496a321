// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reactpinn/errors.hpp"
#include "reactpinn/problems.hpp"
#include "reactpinn/rng.hpp"

using namespace reactpinn;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// closed-form jets of the analytic solutions, differentiated by hand
Jet exact_jet(const ProblemSpec& spec, double x, double t) {
  Jet j;
  j.d1.assign(static_cast<std::size_t>(spec.input_dim), 0.0);
  j.d2.assign(static_cast<std::size_t>(spec.input_dim), 0.0);
  switch (spec.name) {
    case ProblemName::Heat: {
      const double a = spec.constants.at("alpha");
      const double e = std::exp(-a * kPi * kPi * t);
      j.value = std::sin(kPi * x) * e;
      j.d1[0] = kPi * std::cos(kPi * x) * e;
      j.d2[0] = -kPi * kPi * j.value;
      j.d1[1] = -a * kPi * kPi * j.value;
      j.d2[1] = a * a * kPi * kPi * kPi * kPi * j.value;
      break;
    }
    case ProblemName::Diffusion: {
      const double e = std::exp(-t);
      j.value = e * std::sin(kPi * x);
      j.d1[0] = kPi * e * std::cos(kPi * x);
      j.d2[0] = -kPi * kPi * j.value;
      j.d1[1] = -j.value;
      j.d2[1] = j.value;
      break;
    }
    case ProblemName::Vibration: {
      const double zeta = spec.constants.at("zeta");
      const double wn = spec.constants.at("omega_n");
      const double sig = zeta * wn;
      const double wd = wn * std::sqrt(1.0 - zeta * zeta);
      const double e = std::exp(-sig * t);
      j.value = e * (std::cos(wd * t) + (sig / wd) * std::sin(wd * t));
      j.d1[0] = -(wn * wn / wd) * e * std::sin(wd * t);
      j.d2[0] = -(wn * wn / wd) * e * (wd * std::cos(wd * t) - sig * std::sin(wd * t));
      break;
    }
    case ProblemName::Wave: {
      const double c = spec.constants.at("c");
      const double sx = std::sin(kPi * x / 2.0), cx = std::cos(kPi * x / 2.0);
      const double st = std::sin(kPi * c * t / 2.0), ct = std::cos(kPi * c * t / 2.0);
      j.value = sx * ct;
      j.d1[0] = (kPi / 2.0) * cx * ct;
      j.d2[0] = -(kPi / 2.0) * (kPi / 2.0) * sx * ct;
      j.d1[1] = -(kPi * c / 2.0) * sx * st;
      j.d2[1] = -(kPi * c / 2.0) * (kPi * c / 2.0) * sx * ct;
      break;
    }
    default:
      break;
  }
  return j;
}

}  // namespace

TEST_CASE("analytic solutions satisfy their residuals") {
  Rng rng(31);
  for (ProblemName name : {ProblemName::Heat, ProblemName::Diffusion,
                           ProblemName::Vibration, ProblemName::Wave}) {
    const ProblemSpec spec = make_problem(name);
    for (int i = 0; i < 100; ++i) {
      double x = 0, t = 0;
      if (spec.input_dim == 2) {
        x = rng.uniform((*spec.train_domain.x_range)[0], (*spec.train_domain.x_range)[1]);
        t = rng.uniform(spec.train_domain.t_range[0], spec.train_domain.t_range[1]);
      } else {
        x = t = rng.uniform(spec.train_domain.t_range[0], spec.train_domain.t_range[1]);
      }
      const Jet jet = exact_jet(spec, x, t);
      std::vector<double> pt =
          spec.input_dim == 2 ? std::vector<double>{x, t} : std::vector<double>{t};
      CHECK(std::abs(residual(spec, pt, jet)) <= 1e-8);
    }
  }
}

TEST_CASE("constant fields make trivial residuals") {
  const ProblemSpec ac = make_problem(ProblemName::AllenCahn);
  Jet one;
  one.value = 1.0;
  one.d1 = {0, 0};
  one.d2 = {0, 0};
  CHECK(residual(ac, std::array{0.3, 0.4}, one) == 0.0);

  const ProblemSpec burgers = make_problem(ProblemName::Burgers);
  Jet k;
  k.value = 2.5;
  k.d1 = {0, 0};
  k.d2 = {0, 0};
  CHECK(residual(burgers, std::array{0.3, 0.4}, k) == 0.0);
}

TEST_CASE("heat residual is zero on exact jets to roundoff") {
  const ProblemSpec spec = make_problem(ProblemName::Heat);
  const Jet jet = exact_jet(spec, 0.3, 0.5);
  CHECK(std::abs(residual(spec, std::array{0.3, 0.5}, jet)) <= 1e-14);
}

TEST_CASE("under-ordered jets are rejected") {
  const ProblemSpec spec = make_problem(ProblemName::Heat);
  Jet low;
  low.value = 1.0;
  low.d1 = {0, 0};  // no second derivatives
  CHECK_THROWS_AS(residual(spec, std::array{0.3, 0.5}, low), ConfigError);
}

TEST_CASE("grid sampling matches the declared counts") {
  const ProblemSpec heat = make_problem(ProblemName::Heat);
  const SampleSet set = sample_grid(heat, heat.train_domain);
  CHECK(set.collocation.cols() == 100 * 100);
  CHECK(set.initial.cols() == 100);
  CHECK(set.boundary.cols() == 2 * 100);
  CHECK(set.boundary_time_samples == 100);
  // endpoints included
  CHECK(set.collocation(0, 0) == 0.0);
  CHECK(set.collocation(1, set.collocation.cols() - 1) == 0.8);

  Domain single = heat.train_domain;
  single.n_time = 1;
  CHECK(sample_grid(heat, single).collocation.cols() == 100);

  const ProblemSpec ac = make_problem(ProblemName::AllenCahn);
  const SampleSet ac_test = make_test_set(ac);
  CHECK(ac_test.collocation.cols() == 1000 * 1000);
}

TEST_CASE("test sets follow the per-problem conventions") {
  const ProblemSpec burgers = make_problem(ProblemName::Burgers);
  const SampleSet bt = make_test_set(burgers);
  CHECK(bt.collocation.cols() == 256 * 21);
  for (Eigen::Index i = 0; i < bt.collocation.cols(); ++i) {
    CHECK(bt.collocation(1, i) >= 0.8);
    CHECK(bt.collocation(1, i) <= 1.0);
  }

  const ProblemSpec heat = make_problem(ProblemName::Heat);
  const SampleSet ht = make_test_set(heat);
  CHECK(ht.collocation.cols() == 100 * 21);
  CHECK(ht.collocation(1, 0) == 0.8);

  const ProblemSpec vib = make_problem(ProblemName::Vibration);
  const SampleSet vt = make_test_set(vib);
  CHECK(vt.collocation.cols() == 10000);
  CHECK(vt.collocation(0, 0) == 0.0);
  CHECK(vt.collocation(0, 9999) == 1.0);
}

TEST_CASE("initial and boundary targets match the analytic solutions") {
  for (ProblemName name :
       {ProblemName::Heat, ProblemName::Diffusion, ProblemName::Wave}) {
    const ProblemSpec spec = make_problem(name);
    const SampleSet set = sample_grid(spec, spec.train_domain);
    for (Eigen::Index i = 0; i < set.initial.cols(); ++i) {
      const std::array<double, 2> pt{set.initial(0, i), set.initial(1, i)};
      CHECK(set.initial_values[i] == doctest::Approx(*analytic_solution(spec, pt)).epsilon(1e-12));
    }
    for (Eigen::Index i = 0; i < set.boundary.cols(); ++i) {
      const std::array<double, 2> pt{set.boundary(0, i), set.boundary(1, i)};
      CHECK(std::abs(*analytic_solution(spec, pt) - set.boundary_values[i]) <= 1e-12);
    }
  }
}

TEST_CASE("regression targets") {
  CHECK(regression_target(ProblemName::F1, 0.0) == 0.0);
  CHECK(regression_target(ProblemName::F2, 1.0) ==
        doctest::Approx(std::sin(12.0)).epsilon(1e-15));
  CHECK(regression_target(ProblemName::F3, 0.0) ==
        doctest::Approx(std::sin(kPi / 3) * std::sin(kPi / 6)).epsilon(1e-15));
  CHECK(regression_target(ProblemName::F3, 0.0) == doctest::Approx(0.433013).epsilon(1e-6));
}

TEST_CASE("analytic spot values") {
  const ProblemSpec heat = make_problem(ProblemName::Heat);
  CHECK(*analytic_solution(heat, std::array{0.5, 0.0}) == doctest::Approx(1.0));
  const ProblemSpec wave = make_problem(ProblemName::Wave);
  CHECK(*analytic_solution(wave, std::array{1.0, 0.5}) ==
        doctest::Approx(0.0).epsilon(1e-12));
  const ProblemSpec vib = make_problem(ProblemName::Vibration);
  CHECK(*analytic_solution(vib, std::array{1.0}) == doctest::Approx(-0.124).epsilon(5e-3));
  const ProblemSpec burgers = make_problem(ProblemName::Burgers);
  CHECK(!analytic_solution(burgers, std::array{0.0, 0.0}).has_value());
}

TEST_CASE("noisy data generation") {
  const ProblemSpec spec = make_problem(ProblemName::Heat, true);

  NoiseModel clean{0.0, 5000, 10000, 9};
  const SampleSet s0 = make_noisy_data(spec, clean);
  CHECK(s0.collocation.cols() == 10000);
  CHECK(s0.data_points.cols() == 5000);
  for (Eigen::Index i = 0; i < 200; ++i) {
    const std::array<double, 2> pt{s0.data_points(0, i), s0.data_points(1, i)};
    CHECK(s0.data_values[i] == doctest::Approx(*analytic_solution(spec, pt)).epsilon(1e-14));
  }

  NoiseModel noisy{0.1, 5000, 10000, 9};
  const SampleSet s1 = make_noisy_data(spec, noisy);
  double mean = 0;
  for (Eigen::Index i = 0; i < s1.data_points.cols(); ++i) {
    const std::array<double, 2> pt{s1.data_points(0, i), s1.data_points(1, i)};
    mean += s1.data_values[i] - *analytic_solution(spec, pt);
  }
  mean /= static_cast<double>(s1.data_points.cols());
  CHECK(std::abs(mean) <= 3.0 * 0.1 / std::sqrt(5000.0));

  const SampleSet s2 = make_noisy_data(spec, noisy);
  CHECK(s1.data_values == s2.data_values);
  CHECK(s1.collocation == s2.collocation);

  // points stay inside the domain
  for (Eigen::Index i = 0; i < s1.collocation.cols(); ++i) {
    CHECK(s1.collocation(0, i) >= 0.0);
    CHECK(s1.collocation(0, i) <= 1.0);
    CHECK(s1.collocation(1, i) >= 0.0);
    CHECK(s1.collocation(1, i) <= 1.0);
  }
}

TEST_CASE("physical parameter initialization") {
  for (std::uint64_t seed : {1ULL, 2ULL, 42ULL, 31337ULL}) {
    const double v = init_physical_param(seed);
    CHECK(v >= 0.2);
    CHECK(v <= 2.5);
    CHECK(init_physical_param(seed) == v);
  }
}

TEST_CASE("problem registry names") {
  for (const char* name : {"allen_cahn", "burgers", "diffusion", "heat", "vibration",
                           "wave", "f1", "f2", "f3"}) {
    CHECK(problem_name(parse_problem(name)) == name);
  }
  CHECK_THROWS_AS(parse_problem("poisson"), ConfigError);
  CHECK_THROWS_AS(make_problem(ProblemName::Burgers, true), ConfigError);
}

TEST_CASE("inverse heat spans the full time interval") {
  const ProblemSpec inv = make_problem(ProblemName::Heat, true);
  CHECK(inv.train_domain.t_range[1] == 1.0);
  CHECK(inv.trainable_param == "alpha");
}
