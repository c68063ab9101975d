#include "lincbwk/estimation.hpp"

#include "lincbwk/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lincbwk {

namespace {

constexpr double kNormSlack = 1e-12;

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

EstimatorState::EstimatorState(std::size_t m, std::size_t d, double delta)
    : m_(m), d_(d), delta_(delta) {
  if (m == 0 || d == 0) {
    throw Error(ErrorCode::kInvalidDimension, "m and d must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::kInvalidConfidence, "delta must lie in (0,1)");
  }
  const auto mi = static_cast<Eigen::Index>(m);
  const auto di = static_cast<Eigen::Index>(d);
  gram_ = Matrix::Identity(mi, mi);
  gram_inv_ = Matrix::Identity(mi, mi);
  reward_moment_ = Vector::Zero(mi);
  consumption_moment_ = Matrix::Zero(mi, di);
  mu_hat_ = Vector::Zero(mi);
  w_hat_ = Matrix::Zero(mi, di);
}

void EstimatorState::check_context(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != m_) {
    throw Error(ErrorCode::kContextOutOfRange,
                "context has dimension " + std::to_string(x.size()) + ", expected " +
                    std::to_string(m_));
  }
  if (!x.allFinite() || x.squaredNorm() > static_cast<double>(m_) * (1.0 + kNormSlack)) {
    throw Error(ErrorCode::kContextOutOfRange, "context norm exceeds sqrt(m)");
  }
}

void EstimatorState::update(const Vector& x, double reward, const Vector& consumption) {
  check_context(x);
  if (static_cast<std::size_t>(consumption.size()) != d_) {
    throw Error(ErrorCode::kContextOutOfRange, "consumption has wrong dimension");
  }
  if (!in_unit_interval(reward)) {
    throw Error(ErrorCode::kContextOutOfRange, "reward outside [0,1]");
  }
  for (Eigen::Index j = 0; j < consumption.size(); ++j) {
    if (!in_unit_interval(consumption[j])) {
      throw Error(ErrorCode::kContextOutOfRange, "consumption outside [0,1]");
    }
  }

  gram_.noalias() += x * x.transpose();
  ++rounds_seen_;
  if (rounds_seen_ % kReinvertPeriod == 0) {
    reinvert();
  } else {
    const Vector u = gram_inv_ * x;
    const double denom = 1.0 + x.dot(u);
    gram_inv_.noalias() -= (u * u.transpose()) / denom;
    // Keep the inverse exactly symmetric.
    gram_inv_ = 0.5 * (gram_inv_ + gram_inv_.transpose()).eval();
  }

  reward_moment_ += reward * x;
  consumption_moment_.noalias() += x * consumption.transpose();
  mu_hat_.noalias() = gram_inv_ * reward_moment_;
  w_hat_.noalias() = gram_inv_ * consumption_moment_;
}

void EstimatorState::reinvert() {
  const auto mi = static_cast<Eigen::Index>(m_);
  gram_inv_ = gram_.llt().solve(Matrix::Identity(mi, mi));
  gram_inv_ = 0.5 * (gram_inv_ + gram_inv_.transpose()).eval();
}

double EstimatorState::radius() const {
  const double m = static_cast<double>(m_);
  const double d = static_cast<double>(d_);
  const double t = static_cast<double>(rounds_seen_);
  return std::sqrt(m * std::log((d + t * m * d) / delta_)) + std::sqrt(m);
}

double EstimatorState::mahalanobis_inv_norm(const Vector& x) const {
  return std::sqrt(std::max(0.0, x.dot(gram_inv_ * x)));
}

double EstimatorState::optimistic_reward(const Vector& x) const {
  check_context(x);
  return x.dot(mu_hat_) + radius() * mahalanobis_inv_norm(x);
}

Vector EstimatorState::optimistic_consumption(const Vector& x) const {
  check_context(x);
  const double bonus = radius() * mahalanobis_inv_norm(x);
  Vector out = w_hat_.transpose() * x;
  out.array() -= bonus;
  return out;
}

double m_norm(const Vector& v, const Matrix& M) {
  return std::sqrt(std::max(0.0, v.dot(M * v)));
}

}  // namespace lincbwk
