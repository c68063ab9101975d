#include "lincbwk/z_bootstrap.hpp"

#include "lincbwk/dual_learner.hpp"
#include "lincbwk/error.hpp"
#include "lincbwk/packing_lp.hpp"

#include <cmath>

namespace lincbwk {

ArmIndex exploration_arm(const ContextSlate& slate, const EstimatorState& est) {
  if (slate.cols() == 0) throw Error(ErrorCode::kEmptySlate, "slate has no arms");
  ArmIndex best = 1;
  double best_norm = -1.0;
  for (Eigen::Index a = 0; a < slate.cols(); ++a) {
    const double n = est.mahalanobis_inv_norm(slate.col(a));
    if (n > best_norm) {
      best_norm = n;
      best = static_cast<ArmIndex>(a + 1);
    }
  }
  return best;
}

double gamma(double horizon, double exploration_rounds, std::size_t m, std::size_t d,
             double delta) {
  if (!(exploration_rounds >= 2.0)) throw Error(ErrorCode::kInvalidInput, "T0 must be at least 2");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::kInvalidConfidence, "delta in (0,1)");
  const double t0 = exploration_rounds;
  const double inner = t0 * std::log(t0) * std::log(t0 * static_cast<double>(d) / delta);
  return (horizon / t0) * 2.0 * static_cast<double>(m) * std::sqrt(inner);
}

double estimate_opt(std::span<const ExplorationSample> samples, double gamma_slack, double budget,
                    std::size_t horizon) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyHistory, "no exploration samples");
  if (!(gamma_slack >= 0.0)) throw Error(ErrorCode::kInvalidInput, "slack must be >= 0");
  const std::size_t arms = static_cast<std::size_t>(samples.front().slate.cols());
  const auto d = samples.front().w_hat_snapshot.cols();
  const double scale = static_cast<double>(horizon) / static_cast<double>(samples.size());
  PackingInstance instance(samples.size(), arms, Vector::Constant(d, budget + gamma_slack), scale);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ExplorationSample& s = samples[i];
    for (std::size_t a = 1; a <= arms; ++a) {
      const Vector x = s.slate.col(static_cast<Eigen::Index>(a - 1));
      instance.set_option(i, a, s.mu_hat_snapshot.dot(x), s.w_hat_snapshot.transpose() * x);
    }
  }
  return std::max(0.0, solve(instance).value);
}

double compute_z(double opt_hat, double gamma_base, double reduced_budget) {
  if (!(reduced_budget > 0.0)) throw Error(ErrorCode::kInvalidBudget, "B' must be positive");
  return 2.0 * ((opt_hat + 2.0 * gamma_base) / reduced_budget + 1.0);
}

std::size_t default_exploration_rounds(std::size_t horizon) {
  auto t0 = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(horizon))));
  while (t0 * t0 < horizon) ++t0;
  while (t0 > 0 && (t0 - 1) * (t0 - 1) >= horizon) --t0;
  return t0;
}

std::vector<ExplorationSample> explore(LinearEnvironment& env, EstimatorState& est,
                                       BudgetLedger& ledger, std::size_t rounds, EpisodeLog& log,
                                       const RoundObserver& observer) {
  std::vector<ExplorationSample> samples;
  samples.reserve(rounds);
  // Exploration does not move the multipliers; records carry the initial point.
  const DualVector theta = init_dual(DualConfig::tuned(env.d(), ledger.horizon()));
  for (std::size_t t = 0; t < rounds; ++t) {
    if (ledger.exhausted()) {
      log.stop_reason = StopReason::kBudget;
      break;
    }
    ExplorationSample s;
    s.slate = env.sample_slate(t);
    s.played_arm = exploration_arm(s.slate, est);
    s.played_context = arm_context(s.slate, s.played_arm);
    s.mu_hat_snapshot = est.mu_hat();
    s.w_hat_snapshot = est.w_hat();
    if (observer) observer(RoundView{t + 1, s.slate, est, theta, s.played_arm, Phase::kExplore});

    auto [reward, consumption] = env.realize(s.played_context);
    s.reward = reward;
    s.consumption = consumption;
    ledger.charge(consumption);
    est.update(s.played_context, reward, consumption);

    RoundRecord rec;
    rec.t = t + 1;
    rec.arm = s.played_arm;
    rec.reward = reward;
    rec.consumption = consumption;
    rec.theta = theta;
    rec.adjusted_scores = Vector::Zero(s.slate.cols() + 1);
    rec.phase = Phase::kExplore;
    log.records.push_back(std::move(rec));
    log.total_reward += reward;

    samples.push_back(std::move(s));
  }
  return samples;
}

EpisodeLog run_full(LinearEnvironment& env, const BootstrapParams& params,
                    const RoundObserver& observer) {
  const std::size_t t0 = params.exploration_rounds ? params.exploration_rounds
                                                   : default_exploration_rounds(params.horizon);
  if (!(params.budget > 2.0 * static_cast<double>(t0))) {
    throw Error(ErrorCode::kInvalidBudget, "budget must exceed 2 T0");
  }
  if (t0 >= params.horizon) throw Error(ErrorCode::kInvalidInput, "T0 must be below T");

  EstimatorState est(env.m(), env.d(), params.delta);
  BudgetLedger ledger(params.budget, params.horizon, env.d());
  EpisodeLog log;
  log.budget = params.budget;
  log.horizon = params.horizon;
  log.records.reserve(params.horizon);

  const auto samples = explore(env, est, ledger, t0, log, observer);

  BootstrapDiagnostics diag;
  diag.exploration_rounds = samples.size();
  diag.reduced_budget = params.budget - static_cast<double>(t0);
  diag.gamma = gamma(static_cast<double>(params.horizon), static_cast<double>(t0), env.m(), env.d(),
                     params.delta);
  diag.opt_estimate = estimate_opt(samples, 2.0 * diag.gamma, params.budget, params.horizon);
  log.z_used = compute_z(diag.opt_estimate, diag.gamma, diag.reduced_budget);
  log.bootstrap = diag;

  if (samples.size() < t0) {
    log.stop_round = ledger.rounds_played();
    log.consumed = ledger.consumed();
    return log;
  }

  CoreParams core{diag.reduced_budget, params.horizon - t0, log.z_used, params.delta};
  EpisodeLog tail = run_episode(env, core, std::move(est), t0, observer);

  log.total_reward += tail.total_reward;
  for (auto& rec : tail.records) log.records.push_back(std::move(rec));
  log.stop_round = ledger.rounds_played() + tail.stop_round;
  log.stop_reason = tail.stop_reason;
  log.consumed = ledger.consumed() + tail.consumed;
  return log;
}

}  // namespace lincbwk
