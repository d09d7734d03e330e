#include "gdsched/engine.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "gdsched/objectives.hpp"
#include "gdsched/schedule.hpp"

using namespace gdsched;

TEST_CASE("single-iterate run records the start point") {
  const Objective obj = make_scalar_quadratic(1.0);
  Eigen::VectorXd x1(1);
  x1 << 2.0;
  RunConfig cfg;
  cfg.steps = 1;
  const Trajectory traj = run_gd(obj, x1, [](std::size_t) { return 1.0; }, cfg);
  REQUIRE(traj.length() == 1);
  CHECK(traj.alpha.empty());
  CHECK(traj.f[0] == doctest::Approx(2.0));
  CHECK(traj.grad_norm[0] == doctest::Approx(2.0));
  REQUIRE(traj.full_iterates);
  CHECK(traj.x[0] == x1);
}

TEST_CASE("scalar quadratic matches the closed-form contraction") {
  // for f = lambda/2 x^2, x_{t+1} = (1 - alpha lambda/L) x_t with L = lambda,
  // so f_T / f_1 = prod (1 - alpha_i)^2 in normalized units
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lam(0.1, 4.0);
  std::uniform_real_distribution<double> step(0.1, 1.9);
  for (int rep = 0; rep < 50; ++rep) {
    const double lambda = lam(rng);
    std::vector<double> alphas(8);
    double prod = 1.0;
    for (double& a : alphas) {
      a = step(rng);
      prod *= (1.0 - a);
    }
    const Objective obj = make_scalar_quadratic(lambda);
    Eigen::VectorXd x1(1);
    x1 << 1.5;
    FiniteSchedule sched;
    sched.values = alphas;
    RunConfig cfg;
    cfg.steps = 9;
    const Trajectory traj = run_gd(obj, x1, sched, cfg);
    CHECK(traj.f[8] / traj.f[0] == doctest::Approx(prod * prod).epsilon(1e-10));
  }
}

TEST_CASE("normalization: scaling L leaves the normalized trajectory invariant") {
  Eigen::VectorXd spectrum(3), xs(3);
  spectrum << 2.0, 1.0, 0.25;
  xs << 0.3, -1.0, 2.0;
  const Objective obj = make_quadratic_diag(spectrum, xs);
  const Objective scaled = make_quadratic_diag(100.0 * spectrum, xs);
  Eigen::VectorXd x1(3);
  x1 << 1.0, 1.0, 1.0;
  const FiniteSchedule sched = silver(4);
  const Trajectory a = run_gd(obj, x1, sched);
  const Trajectory b = run_gd(scaled, x1, sched);
  REQUIRE(a.length() == b.length());
  for (std::size_t t = 0; t < a.length(); ++t) {
    // normalized f/L and grad/L series are scale-invariant; the iterates
    // agree up to rounding in the 1/L normalization
    CHECK(a.f[t] == doctest::Approx(b.f[t]).epsilon(1e-12));
    CHECK(a.grad_norm[t] == doctest::Approx(b.grad_norm[t]).epsilon(1e-12));
    CHECK((a.x[t] - b.x[t]).norm() <= 1e-12 * (1.0 + a.x[t].norm()));
  }
}

TEST_CASE("join flags copied from the schedule") {
  const FiniteSchedule sched = anytime_prefix(16);
  const Objective obj = make_scalar_quadratic(1.0);
  Eigen::VectorXd x1(1);
  x1 << 1.0;
  const Trajectory traj = run_gd(obj, x1, sched);
  REQUIRE(traj.is_join.size() == 16);
  std::vector<std::size_t> joins;
  for (std::size_t t = 0; t < traj.is_join.size(); ++t) {
    if (traj.is_join[t]) joins.push_back(t + 1);
  }
  CHECK(joins == std::vector<std::size_t>{1, 3, 5, 7, 9, 13});
}

TEST_CASE("retention budget disables iterate storage") {
  const Objective obj = make_scalar_quadratic(1.0);
  Eigen::VectorXd x1(1);
  x1 << 1.0;
  RunConfig cfg;
  cfg.steps = 100;
  cfg.retention_budget = 10;
  const FiniteSchedule sched = anytime_prefix(99);
  const Trajectory traj = run_gd(obj, x1, sched, cfg);
  CHECK_FALSE(traj.full_iterates);
  CHECK(traj.x.empty());
  CHECK(traj.length() == 100);
}

TEST_CASE("engine throws instead of clamping") {
  const Objective obj = make_scalar_quadratic(1.0);
  Eigen::VectorXd x1(1);
  x1 << 1.0;
  RunConfig cfg;
  cfg.steps = 5;
  CHECK_THROWS_AS(
      run_gd(obj, x1, [](std::size_t) { return -1.0; }, cfg),
      std::runtime_error);
  CHECK_THROWS_AS(
      run_gd(obj, x1, [](std::size_t) { return std::nan(""); }, cfg),
      std::runtime_error);

  // diverging run overflows to inf and must throw, not clamp
  RunConfig big;
  big.steps = 50;
  CHECK_THROWS_WITH_AS(
      run_gd(obj, x1, [](std::size_t) { return 1e200; }, big),
      doctest::Contains("step"), std::runtime_error);

  CHECK_THROWS_AS(run_gd(obj, x1, [](std::size_t) { return 1.0; },
                         RunConfig{.steps = 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_gd(obj, x1, silver(2), RunConfig{.steps = 10}),
                  std::invalid_argument);
}

TEST_CASE("suboptimality series") {
  const Objective obj = make_scalar_quadratic(1.0, 0.5);
  Eigen::VectorXd x1(1);
  x1 << 3.0;
  const Trajectory traj = run_gd(obj, x1, silver_limit_prefix(31));
  const std::vector<double> gaps = suboptimality_series(traj, 0.0);
  REQUIRE(gaps.size() == traj.length());
  CHECK(gaps.front() == doctest::Approx(traj.f.front()));
  for (double g : gaps) CHECK(g >= 0.0);
  CHECK(gaps.back() < gaps.front());
  CHECK_THROWS_AS(suboptimality_series(traj, traj.f.front() + 1.0),
                  std::invalid_argument);
}

TEST_CASE("descent bound holds along real runs") {
  // per-step bound f_{t+1} - f_t <= (a^2+2a)/2 |g_t|^2 in normalized units
  ObjectiveSpec spec;
  spec.family = ObjectiveFamily::log_sum_exp;
  spec.dim = 6;
  spec.seed = 9;
  spec.param = 0.4;
  const Objective obj = spec.build();
  Eigen::VectorXd x1 = Eigen::VectorXd::Constant(6, 0.8);
  const Trajectory traj = run_gd(obj, x1, anytime_prefix(200));
  for (std::size_t t = 0; t + 1 < traj.length(); ++t) {
    const double a = traj.alpha[t];
    const double bound = 0.5 * (a * a + 2.0 * a) * traj.grad_norm[t] *
                         traj.grad_norm[t];
    CHECK(traj.f[t + 1] - traj.f[t] <= bound + 1e-12);
  }
}
