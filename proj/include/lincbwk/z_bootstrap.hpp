#pragma once

#include "lincbwk/core_policy.hpp"
#include "lincbwk/environment.hpp"
#include "lincbwk/estimation.hpp"
#include "lincbwk/types.hpp"

#include <cstddef>
#include <span>

namespace lincbwk {

// One round of the exploration phase. The snapshots are the estimates in
// force before this round's update.
struct ExplorationSample {
  ContextSlate slate;
  ArmIndex played_arm = 1;
  Vector played_context;
  double reward = 0.0;
  Vector consumption;
  Vector mu_hat_snapshot;
  Matrix w_hat_snapshot;
};

// Real arm (1..K) maximizing ||x(a)||_{M^-1}; lowest index on ties.
ArmIndex exploration_arm(const ContextSlate& slate, const EstimatorState& est);

// (T / T0) * 2m * sqrt(T0 ln(T0) ln(T0 d / delta)). Requires T0 >= 2.
double gamma(double horizon, double exploration_rounds, std::size_t m, std::size_t d,
             double delta);

// Value of the sample packing LP built from the snapshot estimates, with
// caps B + gamma_slack and scale T / T0.
double estimate_opt(std::span<const ExplorationSample> samples, double gamma_slack, double budget,
                    std::size_t horizon);

// 2 * ((opt_hat + 2 gamma) / B' + 1).
double compute_z(double opt_hat, double gamma_base, double reduced_budget);

// ceil(sqrt(T)).
std::size_t default_exploration_rounds(std::size_t horizon);

struct BootstrapParams {
  double budget = 0.0;
  std::size_t horizon = 0;
  std::size_t exploration_rounds = 0;  // 0 selects ceil(sqrt(T))
  double delta = 0.05;
};

// Explores for T0 rounds, estimates OPT and Z from the samples, then hands
// the remaining T - T0 rounds and budget B - T0 to the core policy. The
// estimator carries over into the core phase.
EpisodeLog run_full(LinearEnvironment& env, const BootstrapParams& params,
                    const RoundObserver& observer = {});

// Exploration phase alone; returns the samples and leaves `est` and `ledger`
// updated.
std::vector<ExplorationSample> explore(LinearEnvironment& env, EstimatorState& est,
                                       BudgetLedger& ledger, std::size_t rounds, EpisodeLog& log,
                                       const RoundObserver& observer = {});

}  // namespace lincbwk
