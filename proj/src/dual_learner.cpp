#include "lincbwk/dual_learner.hpp"

#include "lincbwk/error.hpp"

#include <algorithm>
#include <cmath>

namespace lincbwk {

DualConfig DualConfig::tuned(std::size_t d, std::size_t horizon) {
  if (d == 0) throw Error(ErrorCode::kInvalidDimension, "dual dimension must be positive");
  const double t = static_cast<double>(std::max<std::size_t>(horizon, 1));
  return DualConfig{d, std::sqrt(std::log(static_cast<double>(d) + 1.0) / t), horizon};
}

DualVector init_dual(const DualConfig& config) {
  if (config.d == 0) throw Error(ErrorCode::kInvalidDimension, "dual dimension must be positive");
  const double w = 1.0 / (static_cast<double>(config.d) + 1.0);
  return DualVector{Vector::Constant(static_cast<Eigen::Index>(config.d), w), w};
}

DualVector dual_step(const DualVector& theta, const Vector& payoff, const DualConfig& config) {
  const Eigen::Index d = theta.active.size();
  if (payoff.size() != d) throw Error(ErrorCode::kInvalidDimension, "payoff has wrong dimension");

  // Work in log space relative to the dummy so tiny weights never underflow
  // to an all-zero vector.
  Vector log_w(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double g = std::clamp(payoff[j], -1.0, 1.0);
    log_w[j] = std::log(theta.active[j]) + config.eta * g;
  }
  const double log_dummy = std::log(theta.dummy);
  const double top = std::max(log_dummy, d > 0 ? log_w.maxCoeff() : log_dummy);

  DualVector next;
  next.active = (log_w.array() - top).exp().matrix();
  next.dummy = std::exp(log_dummy - top);
  const double total = next.active.sum() + next.dummy;
  next.active /= total;
  next.dummy /= total;
  return next;
}

std::pair<DualVector, double> hindsight_best(std::span<const Vector> payoff_history) {
  if (payoff_history.empty()) throw Error(ErrorCode::kEmptyHistory, "no payoffs recorded");
  Vector sums = Vector::Zero(payoff_history.front().size());
  for (const Vector& p : payoff_history) sums += p;

  DualVector best{Vector::Zero(sums.size()), 1.0};
  double best_value = 0.0;
  Eigen::Index j = 0;
  if (sums.size() > 0 && sums.maxCoeff(&j) > best_value) {
    best_value = sums[j];
    best.active[j] = 1.0;
    best.dummy = 0.0;
  }
  return {best, best_value};
}

}  // namespace lincbwk
