#include "lincbwk/oracle.hpp"

#include "lincbwk/error.hpp"

#include <algorithm>

namespace lincbwk {

namespace {

void fill_block(PackingInstance& instance, std::size_t block, const LinearEnvironment& env,
                const ContextSlate& slate) {
  for (Eigen::Index a = 0; a < slate.cols(); ++a) {
    const Vector x = slate.col(a);
    const Vector v = env.expected_consumption(x).cwiseMax(0.0);
    instance.set_option(block, static_cast<std::size_t>(a + 1), env.expected_reward(x), v);
  }
}

}  // namespace

std::size_t default_oracle_samples(std::size_t horizon) {
  return std::max<std::size_t>(10000, 10 * horizon);
}

OracleResult opt_oracle(const LinearEnvironment& env, double budget, std::size_t horizon,
                        std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw Error(ErrorCode::kInvalidInput, "oracle needs n_samples >= 1");
  if (!(budget >= 0.0)) throw Error(ErrorCode::kInvalidBudget, "budget must be nonnegative");
  const Vector caps = Vector::Constant(static_cast<Eigen::Index>(env.d()), budget);
  const double t = static_cast<double>(horizon);

  OracleResult result;
  if (env.context_law().kind == SlateLaw::Kind::kDiscrete) {
    const auto& support = env.context_law().slates;
    PackingInstance instance(support.size(), env.arms(), caps, t / static_cast<double>(support.size()));
    for (std::size_t i = 0; i < support.size(); ++i) fill_block(instance, i, env, support[i]);
    const PackingSolution sol = solve(instance);
    result.value = sol.value;
    result.duals = sol.duals;
    for (std::size_t i = 0; i < support.size(); ++i) {
      Vector dist(static_cast<Eigen::Index>(instance.options()));
      for (std::size_t a = 0; a < instance.options(); ++a) {
        dist[static_cast<Eigen::Index>(a)] = sol.pi(i, a, instance.options());
      }
      result.support_distributions.push_back(std::move(dist));
    }
    return result;
  }

  const LinearEnvironment sampler = env.with_seed(derive_seed(seed, Stream::kOracle));
  PackingInstance instance(n_samples, env.arms(), caps, t / static_cast<double>(n_samples));
  for (std::size_t i = 0; i < n_samples; ++i) fill_block(instance, i, env, sampler.sample_slate(i));
  const PackingSolution sol = solve(instance);
  result.value = sol.value;
  result.duals = sol.duals;
  return result;
}

StaticPolicy::StaticPolicy(const LinearEnvironment& env, OracleResult oracle)
    : env_(&env), oracle_(std::move(oracle)) {}

ArmIndex StaticPolicy::act(const ContextSlate& slate, Engine& engine) const {
  const auto& support = env_->context_law().slates;
  if (!oracle_.support_distributions.empty()) {
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i] != slate) continue;
      const Vector& dist = oracle_.support_distributions[i];
      double u = uniform01(engine) * dist.sum();
      ArmIndex last = kNoOp;
      for (Eigen::Index a = 0; a < dist.size(); ++a) {
        if (dist[a] <= 0.0) continue;
        last = static_cast<ArmIndex>(a);
        u -= dist[a];
        if (u < 0.0) return last;
      }
      return last;
    }
  }
  ArmIndex best = kNoOp;
  double best_score = 0.0;
  for (Eigen::Index a = 0; a < slate.cols(); ++a) {
    const Vector x = slate.col(a);
    const double s = env_->expected_reward(x) - oracle_.duals.dot(env_->expected_consumption(x));
    if (s > best_score) {
      best_score = s;
      best = static_cast<ArmIndex>(a + 1);
    }
  }
  return best;
}

}  // namespace lincbwk
