#pragma once

#include "lincbwk/dual_learner.hpp"
#include "lincbwk/environment.hpp"
#include "lincbwk/estimation.hpp"
#include "lincbwk/types.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace lincbwk {

// Cumulative consumption against a per-resource budget.
class BudgetLedger {
 public:
  BudgetLedger(double budget, std::size_t horizon, std::size_t d);

  // True once some consumed_j > B - 1: the next round could overshoot.
  bool exhausted() const;
  void charge(const Vector& consumption);

  double budget() const { return budget_; }
  std::size_t horizon() const { return horizon_; }
  const Vector& consumed() const { return consumed_; }
  std::size_t rounds_played() const { return rounds_played_; }

 private:
  double budget_;
  std::size_t horizon_;
  Vector consumed_;
  std::size_t rounds_played_ = 0;
};

enum class Phase { kExplore, kExploit };
enum class StopReason { kHorizon, kBudget };

const char* to_string(Phase phase);
const char* to_string(StopReason reason);

struct RoundRecord {
  std::size_t t = 0;  // 1-based round index within the whole episode
  ArmIndex arm = kNoOp;
  double reward = 0.0;
  Vector consumption;
  DualVector theta;        // multipliers used to pick this round's arm
  Vector adjusted_scores;  // entry 0 is the no-op
  Phase phase = Phase::kExploit;
};

struct BootstrapDiagnostics {
  std::size_t exploration_rounds = 0;
  double gamma = 0.0;
  double opt_estimate = 0.0;
  double reduced_budget = 0.0;
};

struct EpisodeLog {
  std::vector<RoundRecord> records;
  double total_reward = 0.0;
  std::size_t stop_round = 0;
  StopReason stop_reason = StopReason::kHorizon;
  double z_used = 0.0;
  double budget = 0.0;
  std::size_t horizon = 0;
  Vector consumed;
  std::optional<BootstrapDiagnostics> bootstrap;
};

// View handed to a RoundObserver just before the arm is played.
struct RoundView {
  std::size_t t;
  const ContextSlate& slate;
  const EstimatorState& estimator;
  const DualVector& theta;
  ArmIndex arm;
  Phase phase;
};
using RoundObserver = std::function<void(const RoundView&)>;

// x^T mu~ - z * (x^T W~ theta).
double adjusted_score(const Vector& x, const EstimatorState& est, const DualVector& theta,
                      double z);

// Argmax over the no-op (score 0, index 0) and arms 1..K; ties go to the
// lowest index. Fills `scores` (size K+1) when given.
ArmIndex select_arm(const ContextSlate& slate, const EstimatorState& est,
                    const DualVector& theta, double z, Vector* scores = nullptr);

// Context of arm a in the slate; the zero vector for the no-op.
Vector arm_context(const ContextSlate& slate, ArmIndex arm);

struct CoreParams {
  double budget = 0.0;
  std::size_t horizon = 0;
  double z = 0.0;
  double delta = 0.05;
};

// Plays the optimistic primal-dual rule for `horizon` rounds or until the
// ledger stops it. Slates are env.sample_slate(first_round + k).
EpisodeLog run_episode(LinearEnvironment& env, const CoreParams& params,
                       const RoundObserver& observer = {});

// Continues from an existing estimator (e.g. after exploration).
EpisodeLog run_episode(LinearEnvironment& env, const CoreParams& params, EstimatorState estimator,
                       std::size_t first_round, const RoundObserver& observer = {});

}  // namespace lincbwk
