#pragma once

#include "lincbwk/config.hpp"
#include "lincbwk/core_policy.hpp"
#include "lincbwk/environment.hpp"
#include "lincbwk/oracle.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lincbwk {

struct SeedResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double total_reward = 0.0;
  double opt = 0.0;
  double regret = 0.0;  // opt - total_reward
  StopReason stop_reason = StopReason::kHorizon;
  std::size_t stop_round = 0;
  double z_used = 0.0;
  Vector consumed;
};

struct ExperimentSummary {
  std::string algorithm;
  std::size_t horizon = 0;
  double budget = 0.0;
  double opt = 0.0;
  std::vector<SeedResult> seeds;
  double median_reward = 0.0;
  double median_regret = 0.0;
  double q1_regret = 0.0;
  double q3_regret = 0.0;
};

struct RunOptions {
  std::size_t threads = 0;  // 0 = LINCBWK_THREADS or hardware concurrency
  bool write_files = true;
};

// Seed of repeat `index`: derive_seed(master, kEpisode, index).
std::uint64_t episode_seed(std::uint64_t master, std::size_t index);

// Worker count from LINCBWK_THREADS, falling back to hardware concurrency.
std::size_t thread_limit();

// Quantile by linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

OracleResult compute_oracle(const ExperimentConfig& config, const LinearEnvironment& env);

// Baselines: oracle-static, unconstrained-linucb, uniform-random. All stop
// on the same ledger rule as the core policy. `oracle` is required for
// oracle-static only.
EpisodeLog baseline(const std::string& name, LinearEnvironment& env, std::size_t horizon,
                    double budget, std::uint64_t seed, const OracleResult* oracle = nullptr,
                    double delta = 0.05);

// One episode of the configured algorithm on `env`.
EpisodeLog run_algorithm(const ExperimentConfig& config, LinearEnvironment& env,
                         const OracleResult& oracle, std::uint64_t seed);

// Runs config.repeats episodes (in parallel when allowed), computes regret
// against the oracle, and writes per-seed CSVs plus summary.json under
// config.out_dir when requested.
ExperimentSummary run(const ExperimentConfig& config, const RunOptions& options = {});

struct SweepResult {
  std::string axis;
  std::vector<double> values;
  std::vector<ExperimentSummary> summaries;
  // ratios[k] = median_regret[k] / median_regret[k-1]; ratios[0] is NaN.
  std::vector<double> ratios;
};

// axis is T, B or m.
SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<double>& values, const RunOptions& options = {});

// Columns: t, phase, arm, reward, v_1..v_d, theta_1..theta_d, theta_dummy,
// cum_reward, budget_left_1..budget_left_d. Floats use 9 significant digits.
void write_round_csv(std::ostream& out, const EpisodeLog& log, std::size_t d);
void write_sweep_csv(std::ostream& out, const SweepResult& result);

nlohmann::json summary_json(const ExperimentSummary& summary);

}  // namespace lincbwk
