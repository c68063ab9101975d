#include "lincbwk/core_policy.hpp"

#include "lincbwk/error.hpp"

#include <algorithm>

namespace lincbwk {

BudgetLedger::BudgetLedger(double budget, std::size_t horizon, std::size_t d)
    : budget_(budget), horizon_(horizon), consumed_(Vector::Zero(static_cast<Eigen::Index>(d))) {}

bool BudgetLedger::exhausted() const {
  return consumed_.size() > 0 && consumed_.maxCoeff() > budget_ - 1.0;
}

void BudgetLedger::charge(const Vector& consumption) {
  consumed_ += consumption;
  ++rounds_played_;
}

const char* to_string(Phase phase) { return phase == Phase::kExplore ? "explore" : "exploit"; }

const char* to_string(StopReason reason) {
  return reason == StopReason::kHorizon ? "horizon" : "budget";
}

double adjusted_score(const Vector& x, const EstimatorState& est, const DualVector& theta,
                      double z) {
  return est.optimistic_reward(x) - z * est.optimistic_consumption(x).dot(theta.active);
}

Vector arm_context(const ContextSlate& slate, ArmIndex arm) {
  if (arm == kNoOp) return Vector::Zero(slate.rows());
  return slate.col(static_cast<Eigen::Index>(arm - 1));
}

ArmIndex select_arm(const ContextSlate& slate, const EstimatorState& est,
                    const DualVector& theta, double z, Vector* scores) {
  if (slate.cols() == 0) throw Error(ErrorCode::kEmptySlate, "slate has no arms");
  if (scores) *scores = Vector::Zero(slate.cols() + 1);
  ArmIndex best = kNoOp;
  double best_score = 0.0;
  for (Eigen::Index a = 0; a < slate.cols(); ++a) {
    const double s = adjusted_score(slate.col(a), est, theta, z);
    if (scores) (*scores)[a + 1] = s;
    if (s > best_score) {
      best_score = s;
      best = static_cast<ArmIndex>(a + 1);
    }
  }
  return best;
}

EpisodeLog run_episode(LinearEnvironment& env, const CoreParams& params,
                       const RoundObserver& observer) {
  return run_episode(env, params, EstimatorState(env.m(), env.d(), params.delta), 0, observer);
}

EpisodeLog run_episode(LinearEnvironment& env, const CoreParams& params, EstimatorState estimator,
                       std::size_t first_round, const RoundObserver& observer) {
  if (!(params.budget > 0.0)) throw Error(ErrorCode::kInvalidBudget, "budget must be positive");
  if (params.horizon == 0) throw Error(ErrorCode::kInvalidInput, "horizon must be positive");
  if (!(params.z >= 0.0)) throw Error(ErrorCode::kInvalidInput, "z must be nonnegative");

  const std::size_t d = env.d();
  const DualConfig dual_config = DualConfig::tuned(d, params.horizon);
  DualVector theta = init_dual(dual_config);
  BudgetLedger ledger(params.budget, params.horizon, d);
  const double per_round = params.budget / static_cast<double>(params.horizon);

  EpisodeLog log;
  log.z_used = params.z;
  log.budget = params.budget;
  log.horizon = params.horizon;
  log.records.reserve(params.horizon);

  for (std::size_t k = 0; k < params.horizon; ++k) {
    if (ledger.exhausted()) {
      log.stop_reason = StopReason::kBudget;
      break;
    }
    const std::size_t t = first_round + k;
    const ContextSlate slate = env.sample_slate(t);

    RoundRecord rec;
    rec.t = t + 1;
    rec.phase = Phase::kExploit;
    rec.theta = theta;
    rec.arm = select_arm(slate, estimator, theta, params.z, &rec.adjusted_scores);
    if (observer) observer(RoundView{t + 1, slate, estimator, theta, rec.arm, Phase::kExploit});

    const Vector x = arm_context(slate, rec.arm);
    auto [reward, consumption] = env.realize(x);
    rec.reward = reward;
    rec.consumption = consumption;
    ledger.charge(consumption);
    log.total_reward += reward;

    // The no-op is observed deterministically and carries no information.
    if (rec.arm != kNoOp) estimator.update(x, reward, consumption);

    Vector payoff = consumption;
    payoff.array() -= per_round;
    theta = dual_step(theta, payoff, dual_config);

    log.records.push_back(std::move(rec));
  }

  log.stop_round = ledger.rounds_played();
  log.consumed = ledger.consumed();
  return log;
}

}  // namespace lincbwk
