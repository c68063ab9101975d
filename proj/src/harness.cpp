#include "lincbwk/harness.hpp"

#include "lincbwk/dual_learner.hpp"
#include "lincbwk/error.hpp"
#include "lincbwk/rng.hpp"
#include "lincbwk/z_bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace lincbwk {

namespace {

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

using Chooser = std::function<ArmIndex(const ContextSlate&)>;

// Fixed-rule play under the hard ledger; used by the baselines that do not
// learn from feedback.
EpisodeLog play_fixed(LinearEnvironment& env, std::size_t horizon, double budget,
                      const Chooser& choose) {
  const DualVector theta = init_dual(DualConfig::tuned(env.d(), horizon));
  BudgetLedger ledger(budget, horizon, env.d());
  EpisodeLog log;
  log.budget = budget;
  log.horizon = horizon;
  log.records.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    if (ledger.exhausted()) {
      log.stop_reason = StopReason::kBudget;
      break;
    }
    const ContextSlate slate = env.sample_slate(t);
    RoundRecord rec;
    rec.t = t + 1;
    rec.arm = choose(slate);
    rec.theta = theta;
    rec.adjusted_scores = Vector::Zero(slate.cols() + 1);
    auto [reward, consumption] = env.realize(arm_context(slate, rec.arm));
    rec.reward = reward;
    rec.consumption = consumption;
    ledger.charge(consumption);
    log.total_reward += reward;
    log.records.push_back(std::move(rec));
  }
  log.stop_round = ledger.rounds_played();
  log.consumed = ledger.consumed();
  return log;
}

void for_each_index(std::size_t count, std::size_t threads,
                    const std::function<void(std::size_t)>& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::uint64_t episode_seed(std::uint64_t master, std::size_t index) {
  return derive_seed(master, Stream::kEpisode, index);
}

std::size_t thread_limit() {
  if (const char* env = std::getenv("LINCBWK_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

OracleResult compute_oracle(const ExperimentConfig& config, const LinearEnvironment& env) {
  const std::size_t n = config.oracle_samples ? config.oracle_samples
                                              : default_oracle_samples(config.horizon);
  return opt_oracle(env, config.resolved_budget(), config.horizon, n,
                    derive_seed(config.seed, Stream::kOracle));
}

EpisodeLog baseline(const std::string& name, LinearEnvironment& env, std::size_t horizon,
                    double budget, std::uint64_t seed, const OracleResult* oracle, double delta) {
  if (name == "unconstrained-linucb") {
    return run_episode(env, CoreParams{budget, horizon, 0.0, delta});
  }
  if (name == "uniform-random") {
    Engine engine = make_engine(seed, Stream::kPolicy);
    return play_fixed(env, horizon, budget, [&](const ContextSlate& slate) {
      const auto k = static_cast<std::size_t>(slate.cols());
      return std::min<ArmIndex>(k, 1 + static_cast<ArmIndex>(uniform01(engine) * static_cast<double>(k)));
    });
  }
  if (name == "oracle-static") {
    if (!oracle) throw Error(ErrorCode::kInvalidInput, "oracle-static needs the oracle solution");
    const StaticPolicy policy(env, *oracle);
    Engine engine = make_engine(seed, Stream::kPolicy);
    return play_fixed(env, horizon, budget,
                      [&](const ContextSlate& slate) { return policy.act(slate, engine); });
  }
  throw Error(ErrorCode::kUnknownBaseline, "unknown baseline '" + name + "'");
}

EpisodeLog run_algorithm(const ExperimentConfig& config, LinearEnvironment& env,
                         const OracleResult& oracle, std::uint64_t seed) {
  const double budget = config.resolved_budget();
  if (config.algorithm == "full") {
    return run_full(env, BootstrapParams{budget, config.horizon, config.exploration_rounds,
                                         config.delta});
  }
  if (config.algorithm == "core") {
    return run_episode(env, CoreParams{budget, config.horizon, config.z.value_or(0.0), config.delta});
  }
  return baseline(config.algorithm, env, config.horizon, budget, seed, &oracle, config.delta);
}

void write_round_csv(std::ostream& out, const EpisodeLog& log, std::size_t d) {
  out << "t,phase,arm,reward";
  for (std::size_t j = 1; j <= d; ++j) out << ",v_" << j;
  for (std::size_t j = 1; j <= d; ++j) out << ",theta_" << j;
  out << ",theta_dummy,cum_reward";
  for (std::size_t j = 1; j <= d; ++j) out << ",budget_left_" << j;
  out << '\n';

  const auto di = static_cast<Eigen::Index>(d);
  Vector left = Vector::Constant(di, log.budget);
  double cum = 0.0;
  for (const RoundRecord& r : log.records) {
    cum += r.reward;
    left -= r.consumption;
    out << r.t << ',' << to_string(r.phase) << ',' << r.arm << ',' << fmt9(r.reward);
    for (Eigen::Index j = 0; j < di; ++j) out << ',' << fmt9(r.consumption[j]);
    for (Eigen::Index j = 0; j < di; ++j) out << ',' << fmt9(r.theta.active[j]);
    out << ',' << fmt9(r.theta.dummy) << ',' << fmt9(cum);
    for (Eigen::Index j = 0; j < di; ++j) out << ',' << fmt9(left[j]);
    out << '\n';
  }
}

nlohmann::json summary_json(const ExperimentSummary& s) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const SeedResult& r : s.seeds) {
    seeds.push_back({{"index", r.index},
                     {"seed", r.seed},
                     {"total_reward", r.total_reward},
                     {"opt", r.opt},
                     {"regret", r.regret},
                     {"stop_reason", to_string(r.stop_reason)},
                     {"stop_round", r.stop_round},
                     {"z_used", r.z_used},
                     {"consumed", std::vector<double>(r.consumed.data(),
                                                      r.consumed.data() + r.consumed.size())}});
  }
  return {{"algorithm", s.algorithm},   {"T", s.horizon},
          {"B", s.budget},              {"opt", s.opt},
          {"median_reward", s.median_reward}, {"median_regret", s.median_regret},
          {"q1_regret", s.q1_regret},   {"q3_regret", s.q3_regret},
          {"seeds", seeds}};
}

ExperimentSummary run(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const LinearEnvironment base = build_environment(config.env, config.seed);
  const OracleResult oracle = compute_oracle(config, base);

  ExperimentSummary summary;
  summary.algorithm = config.algorithm;
  summary.horizon = config.horizon;
  summary.budget = config.resolved_budget();
  summary.opt = oracle.value;
  summary.seeds.resize(config.repeats);
  std::vector<EpisodeLog> logs(options.write_files ? config.repeats : 0);

  const std::size_t threads = options.threads ? options.threads : thread_limit();
  for_each_index(config.repeats, threads, [&](std::size_t i) {
    const std::uint64_t seed = episode_seed(config.seed, i);
    LinearEnvironment env = base.with_seed(seed);
    EpisodeLog log = run_algorithm(config, env, oracle, seed);
    SeedResult& r = summary.seeds[i];
    r.index = i;
    r.seed = seed;
    r.total_reward = log.total_reward;
    r.opt = oracle.value;
    r.regret = oracle.value - log.total_reward;
    r.stop_reason = log.stop_reason;
    r.stop_round = log.stop_round;
    r.z_used = log.z_used;
    r.consumed = log.consumed;
    if (options.write_files) logs[i] = std::move(log);
  });

  std::vector<double> rewards, regrets;
  for (const auto& r : summary.seeds) {
    rewards.push_back(r.total_reward);
    regrets.push_back(r.regret);
  }
  summary.median_reward = quantile(rewards, 0.5);
  summary.median_regret = quantile(regrets, 0.5);
  summary.q1_regret = quantile(regrets, 0.25);
  summary.q3_regret = quantile(regrets, 0.75);

  if (options.write_files && !config.out_dir.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw Error(ErrorCode::kIoError, "cannot create " + config.out_dir);
    for (std::size_t i = 0; i < logs.size(); ++i) {
      const auto path = fs::path(config.out_dir) / ("episode_" + std::to_string(i) + ".csv");
      std::ofstream out(path);
      if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
      write_round_csv(out, logs[i], base.d());
    }
    std::ofstream json_out(fs::path(config.out_dir) / "summary.json");
    std::ofstream env_out(fs::path(config.out_dir) / "environment.txt");
    if (!json_out || !env_out) throw Error(ErrorCode::kIoError, "cannot write summary files");
    json_out << summary_json(summary).dump(2) << '\n';
    base.export_parameters(env_out);
  }
  return summary;
}

SweepResult sweep(const ExperimentConfig& base, const std::string& axis,
                  const std::vector<double>& values, const RunOptions& options) {
  if (axis != "T" && axis != "B" && axis != "m") {
    throw Error(ErrorCode::kConfigInvalid, "sweep axis must be T, B or m");
  }
  if (values.empty()) throw Error(ErrorCode::kConfigInvalid, "sweep needs at least one value");
  SweepResult result;
  result.axis = axis;
  result.values = values;
  for (double v : values) {
    ExperimentConfig cfg = base;
    if (!(v > 0.0)) throw Error(ErrorCode::kConfigInvalid, "sweep values must be positive");
    if (axis == "T") cfg.horizon = static_cast<std::size_t>(std::llround(v));
    if (axis == "B") {
      cfg.budget = v;
      cfg.budget_factor.reset();
    }
    if (axis == "m") {
      if (cfg.env.kind != "linear") throw Error(ErrorCode::kConfigInvalid, "m axis needs env.kind = linear");
      cfg.env.m = static_cast<std::size_t>(std::llround(v));
    }
    if (!cfg.out_dir.empty()) {
      cfg.out_dir = (std::filesystem::path(cfg.out_dir) / (axis + "_" + fmt9(v))).string();
    }
    result.summaries.push_back(run(cfg, options));
  }
  result.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k < result.summaries.size(); ++k) {
    result.ratios.push_back(result.summaries[k].median_regret /
                            result.summaries[k - 1].median_regret);
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "axis,value,T,B,opt,median_reward,median_regret,q1_regret,q3_regret,ratio\n";
  for (std::size_t k = 0; k < result.summaries.size(); ++k) {
    const ExperimentSummary& s = result.summaries[k];
    out << result.axis << ',' << fmt9(result.values[k]) << ',' << s.horizon << ','
        << fmt9(s.budget) << ',' << fmt9(s.opt) << ',' << fmt9(s.median_reward) << ','
        << fmt9(s.median_regret) << ',' << fmt9(s.q1_regret) << ',' << fmt9(s.q3_regret) << ','
        << fmt9(result.ratios[k]) << '\n';
  }
}

}  // namespace lincbwk
