#include "lincbwk/core_policy.hpp"
#include "lincbwk/error.hpp"
#include "lincbwk/oracle.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace lincbwk;
using namespace lincbwk::testing;

namespace {

DualVector theta_of(const Vector& active) {
  return DualVector{active, 1.0 - active.sum()};
}

// Closed forms evaluated from the raw estimator state.
double brute_score(const Vector& x, const EstimatorState& est, const DualVector& theta, double z) {
  const double width = est.radius() * std::sqrt(x.dot(est.gram_inv() * x));
  const Vector mu = est.gram_inv() * est.reward_moment();
  const Matrix w = est.gram_inv() * est.consumption_moment();
  double penalty = 0.0;
  for (Eigen::Index j = 0; j < theta.active.size(); ++j) {
    penalty += theta.active[j] * (x.dot(w.col(j)) - width);
  }
  return x.dot(mu) + width - z * penalty;
}

LinearEnvironment bwk(double reward, double consumption, std::size_t arms = 2,
                      NoiseLaw noise = {NoiseLaw::Kind::kNone, 0.0}) {
  return make_bwk(Vector::Constant(static_cast<Eigen::Index>(arms), reward),
                  Matrix::Constant(1, static_cast<Eigen::Index>(arms), consumption), noise, 1);
}

}  // namespace

TEST_CASE("ledger stops once a round could overshoot") {
  BudgetLedger ledger(3.0, 10, 2);
  CHECK_FALSE(ledger.exhausted());
  ledger.charge(Vector::Constant(2, 1.0));
  ledger.charge(Vector::Constant(2, 1.0));
  CHECK_FALSE(ledger.exhausted());  // 2 = B - 1
  Vector v(2);
  v << 0.0, 0.01;
  ledger.charge(v);
  CHECK(ledger.exhausted());
  CHECK(ledger.rounds_played() == 3);
}

TEST_CASE("adjusted score reduces to the optimistic reward") {
  Engine e = make_engine(1, Stream::kPolicy);
  const EstimatorState est = random_state(e, 3, 2, 20);
  const Vector x = random_context(e, 3);
  const DualVector theta = theta_of(Vector::Constant(2, 0.3));
  CHECK(adjusted_score(x, est, theta, 0.0) == doctest::Approx(est.optimistic_reward(x)));
  CHECK(adjusted_score(x, est, theta_of(Vector::Zero(2)), 5.0) ==
        doctest::Approx(est.optimistic_reward(x)));
}

TEST_CASE("adjusted score by hand in one dimension") {
  const double delta = 0.05;
  EstimatorState est(1, 1, delta);
  est.update(Vector::Ones(1), 1.0, Vector::Ones(1));
  // gram = 2, mu_hat = w_hat = 0.5, ||1||_{M^-1} = 1/sqrt(2)
  const double rho = std::sqrt(std::log(2.0 / delta)) + 1.0;
  const double width = rho / std::sqrt(2.0);
  const double expected = (0.5 + width) - 2.0 * 0.75 * (0.5 - width);
  CHECK(adjusted_score(Vector::Ones(1), est, theta_of(Vector::Constant(1, 0.75)), 2.0) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("select_arm picks the no-op when every score is negative") {
  EstimatorState est(1, 1, 0.05);
  for (int k = 0; k < 50; ++k) est.update(Vector::Ones(1), 0.0, Vector::Ones(1));
  ContextSlate slate(1, 3);
  slate << 0.2, 0.5, 1.0;
  Vector scores;
  CHECK(select_arm(slate, est, theta_of(Vector::Ones(1)), 100.0, &scores) == kNoOp);
  CHECK(scores[0] == 0.0);
  CHECK(scores.tail(3).maxCoeff() < 0.0);
}

TEST_CASE("select_arm takes the best real arm") {
  EstimatorState est(1, 1, 0.05);
  const double rho = est.radius();
  ContextSlate slate(1, 2);
  slate << 0.3 / rho, 0.7 / rho;
  Vector scores;
  CHECK(select_arm(slate, est, theta_of(Vector::Zero(1)), 0.0, &scores) == 2);
  CHECK(scores[1] == doctest::Approx(0.3));
  CHECK(scores[2] == doctest::Approx(0.7));
}

TEST_CASE("ties go to the lowest index") {
  EstimatorState est(2, 1, 0.05);
  ContextSlate slate(2, 3);
  slate << 0.5, 0.5, 0.1,
           0.5, 0.5, 0.1;
  CHECK(select_arm(slate, est, theta_of(Vector::Zero(1)), 0.0) == 1);
  ContextSlate zeros = ContextSlate::Zero(2, 2);
  CHECK(select_arm(zeros, est, theta_of(Vector::Zero(1)), 0.0) == kNoOp);
  CHECK_THROWS_AS(select_arm(ContextSlate(2, 0), est, theta_of(Vector::Zero(1)), 0.0), Error);
}

TEST_CASE("select_arm matches exhaustive evaluation") {
  Engine e = make_engine(7, Stream::kPolicy);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 1 + trial % 4;
    const std::size_t d = 1 + trial % 3;
    const std::size_t k = 1 + trial % 4;
    const EstimatorState est = random_state(e, m, d, trial % 30);
    ContextSlate slate(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
    for (std::size_t a = 0; a < k; ++a) slate.col(static_cast<Eigen::Index>(a)) = random_context(e, m);
    Vector raw = random_vector(e, d + 1, 0.0, 1.0);
    raw /= raw.sum();
    const DualVector theta{raw.head(static_cast<Eigen::Index>(d)), raw[static_cast<Eigen::Index>(d)]};
    const double z = uniform(e, 0.0, 10.0);

    ArmIndex best = kNoOp;
    double best_score = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      const double s = brute_score(slate.col(static_cast<Eigen::Index>(a)), est, theta, z);
      if (s > best_score) {
        best_score = s;
        best = a + 1;
      }
    }
    CHECK(select_arm(slate, est, theta, z) == best);
  }
}

TEST_CASE("budget exhaustion when every arm consumes 1") {
  LinearEnvironment env = bwk(0.5, 1.0);
  const EpisodeLog log = run_episode(env, CoreParams{10.0, 100, 1.0, 0.05});
  CHECK(log.stop_round <= 10);
  CHECK(log.consumed[0] <= 10.0);
  CHECK(log.stop_reason == StopReason::kBudget);
}

TEST_CASE("zero consumption runs to the horizon") {
  LinearEnvironment env = bwk(0.5, 0.0, 3, NoiseLaw{});
  const EpisodeLog log = run_episode(env, CoreParams{5.0, 400, 3.0, 0.05});
  CHECK(log.stop_round == 400);
  CHECK(log.stop_reason == StopReason::kHorizon);
}

TEST_CASE("single free arm with reward 1 collects T - O(1)") {
  LinearEnvironment env = bwk(1.0, 0.0, 1);
  const std::size_t T = 2000;
  const EpisodeLog log = run_episode(env, CoreParams{50.0, T, 2.0, 0.05});
  CHECK(log.total_reward >= static_cast<double>(T) - 5.0);
}

TEST_CASE("episodes are deterministic") {
  auto play = [] {
    LinearEnvironment env = make_linear(3, 2, 6, 4, NoiseLaw{}, 21);
    return run_episode(env, CoreParams{150.0, 600, 3.0, 0.05});
  };
  const EpisodeLog a = play();
  const EpisodeLog b = play();
  REQUIRE(a.records.size() == b.records.size());
  CHECK(a.total_reward == b.total_reward);
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].arm == b.records[i].arm);
    CHECK(a.records[i].reward == b.records[i].reward);
    CHECK(a.records[i].theta.active == b.records[i].theta.active);
  }
}

TEST_CASE("episode invariants over many seeds") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    LinearEnvironment env = make_linear(3, 2, 5, 9, NoiseLaw{}, seed);
    const double B = 40.0 + 10.0 * static_cast<double>(seed);
    const std::size_t T = 500;
    std::size_t updates = 0;
    bool updates_match = true;
    const EpisodeLog log = run_episode(env, CoreParams{B, T, 2.5, 0.05}, [&](const RoundView& v) {
      if (v.estimator.rounds_seen() != updates) updates_match = false;
      if (v.arm != kNoOp) ++updates;
    });
    CHECK(updates_match);
    CHECK(log.stop_round <= T);
    CHECK(log.consumed.maxCoeff() <= B);

    double sum = 0.0;
    Vector consumed = Vector::Zero(2);
    for (const RoundRecord& r : log.records) {
      sum += r.reward;
      consumed += r.consumption;
      CHECK(r.reward >= 0.0);
      CHECK(r.reward <= 1.0);
      const Vector payoff = r.consumption.array() - B / static_cast<double>(T);
      CHECK(payoff.cwiseAbs().maxCoeff() <= 1.0);
      CHECK(r.adjusted_scores.size() == 6);
      if (r.arm == kNoOp) CHECK(r.consumption.isZero(0.0));
    }
    CHECK(std::abs(sum - log.total_reward) <= 1e-9);
    CHECK((consumed - log.consumed).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("reward does not beat the oracle beyond the martingale slack") {
  const std::size_t T = 2000;
  const double B = 300.0;
  const double delta = 0.05;
  const LinearEnvironment base = make_linear(3, 2, 5, 9, NoiseLaw{}, 1);
  const double opt = opt_oracle(base, B, T, 20000, 3).value;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    LinearEnvironment env = base.with_seed(seed);
    const EpisodeLog log = run_episode(env, CoreParams{B, T, 2.0 * (opt / B + 1.0), delta});
    CHECK(log.total_reward <= opt + 3.0 * std::sqrt(T * std::log(1.0 / delta)));
  }
}

TEST_CASE("invalid parameters") {
  LinearEnvironment env = bwk(0.5, 0.5);
  CHECK_THROWS_AS(run_episode(env, CoreParams{0.0, 10, 1.0, 0.05}), Error);
  CHECK_THROWS_AS(run_episode(env, CoreParams{5.0, 0, 1.0, 0.05}), Error);
  CHECK_THROWS_AS(run_episode(env, CoreParams{5.0, 10, -1.0, 0.05}), Error);
}
