#include "lincbwk/dual_learner.hpp"
#include "lincbwk/error.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace lincbwk;
using namespace lincbwk::testing;

namespace {

DualConfig with_eta(std::size_t d, double eta) { return DualConfig{d, eta, 1}; }

double simplex_error(const DualVector& v) {
  return std::abs(v.active.sum() + v.dummy - 1.0);
}

}  // namespace

TEST_CASE("init is uniform over d+1 coordinates") {
  const DualVector one = init_dual(with_eta(1, 0.1));
  CHECK(one.active[0] == doctest::Approx(0.5));
  CHECK(one.dummy == doctest::Approx(0.5));

  const DualVector three = init_dual(with_eta(3, 0.1));
  for (Eigen::Index j = 0; j < 3; ++j) CHECK(three.active[j] == doctest::Approx(0.25));
  CHECK(three.dummy == doctest::Approx(0.25));

  CHECK_THROWS_AS(init_dual(with_eta(0, 0.1)), Error);
}

TEST_CASE("multiplicative step by hand") {
  const DualConfig cfg = with_eta(1, std::log(2.0));
  const DualVector start = init_dual(cfg);

  const DualVector unchanged = dual_step(start, Vector::Zero(1), cfg);
  CHECK(unchanged.active[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(unchanged.dummy == doctest::Approx(0.5).epsilon(1e-15));

  const DualVector up = dual_step(start, Vector::Ones(1), cfg);
  CHECK(up.active[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(up.dummy == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const DualVector down = dual_step(start, -Vector::Ones(1), cfg);
  CHECK(down.active[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(down.dummy == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("payoffs are clamped to [-1, 1]") {
  const DualConfig cfg = with_eta(1, std::log(2.0));
  const DualVector start = init_dual(cfg);
  const DualVector big = dual_step(start, Vector::Constant(1, 7.0), cfg);
  CHECK(big.active[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("tuned step size") {
  const DualConfig cfg = DualConfig::tuned(4, 10000);
  CHECK(cfg.eta == doctest::Approx(std::sqrt(std::log(5.0) / 10000.0)));
}

TEST_CASE("hindsight best picks a vertex") {
  std::vector<Vector> pos{Vector::Ones(1), Vector::Ones(1)};
  auto [v1, val1] = hindsight_best(pos);
  CHECK(val1 == doctest::Approx(2.0));
  CHECK(v1.active[0] == 1.0);
  CHECK(v1.dummy == 0.0);

  std::vector<Vector> neg{-Vector::Ones(1), -Vector::Ones(1)};
  auto [v2, val2] = hindsight_best(neg);
  CHECK(val2 == 0.0);
  CHECK(v2.active.isZero(0.0));
  CHECK(v2.dummy == 1.0);

  Vector mixed(2);
  mixed << 1, -1;
  std::vector<Vector> two{mixed, mixed};
  auto [v3, val3] = hindsight_best(two);
  CHECK(val3 == doctest::Approx(2.0));
  CHECK(v3.active[0] == 1.0);
  CHECK(v3.active[1] == 0.0);

  CHECK_THROWS_AS(hindsight_best(std::vector<Vector>{}), Error);
}

TEST_CASE("steps preserve the simplex") {
  Engine e = make_engine(21, Stream::kPolicy);
  const DualConfig cfg = with_eta(5, 0.3);
  DualVector theta = init_dual(cfg);
  for (int t = 0; t < 5000; ++t) {
    theta = dual_step(theta, random_vector(e, 5, -3.0, 3.0), cfg);
    CHECK(simplex_error(theta) < 1e-9);
    CHECK(theta.active.minCoeff() >= 0.0);
    CHECK(theta.dummy >= 0.0);
  }
}

TEST_CASE("argmax coordinate is invariant to a common payoff shift") {
  Engine e = make_engine(22, Stream::kPolicy);
  const DualConfig cfg = with_eta(4, 0.2);
  for (int k = 0; k < 200; ++k) {
    DualVector theta;
    theta.active = random_vector(e, 4, 0.05, 1.0);
    theta.dummy = 0.3;
    const double total = theta.active.sum() + theta.dummy;
    theta.active /= total;
    theta.dummy /= total;
    const Vector payoff = random_vector(e, 4, -0.4, 0.4);
    const double shift = uniform(e, -0.5, 0.5);
    Eigen::Index a = 0, b = 0;
    dual_step(theta, payoff, cfg).active.maxCoeff(&a);
    dual_step(theta, (payoff.array() + shift).matrix(), cfg).active.maxCoeff(&b);
    CHECK(a == b);
  }
}

TEST_CASE("regret against the best fixed point stays below 2 sqrt(T ln(d+1))") {
  Engine e = make_engine(23, Stream::kPolicy);
  const std::size_t T = 2000;
  for (std::size_t d : {1u, 3u, 8u}) {
    const DualConfig cfg = DualConfig::tuned(d, T);
    DualVector theta = init_dual(cfg);
    std::vector<Vector> history;
    double learner = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      // Alternating adversary that punishes the current leader.
      Vector p = random_vector(e, d, -1.0, 1.0);
      Eigen::Index lead = 0;
      theta.active.maxCoeff(&lead);
      p[lead] = -1.0;
      learner += theta.value(p);
      history.push_back(p);
      theta = dual_step(theta, p, cfg);
    }
    const double best = hindsight_best(history).second;
    CHECK(best - learner <= 2.0 * std::sqrt(static_cast<double>(T) * std::log(static_cast<double>(d) + 1.0)));
  }
}
