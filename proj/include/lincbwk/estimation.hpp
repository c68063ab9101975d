#pragma once

#include "lincbwk/types.hpp"

#include <cstddef>

namespace lincbwk {

// Ridge (lambda = 1) estimates of the reward vector and the consumption
// matrix, plus the confidence radius shared by all of their ellipsoids.
//
// gram_inv is maintained by Sherman-Morrison updates and refreshed from a
// Cholesky factorization of gram every kReinvertPeriod updates.
class EstimatorState {
 public:
  static constexpr std::size_t kReinvertPeriod = 512;

  EstimatorState(std::size_t m, std::size_t d, double delta);

  // Folds in one observation (x, r, v). Requires ||x||_2 <= sqrt(m) and
  // outcomes in [0,1].
  void update(const Vector& x, double reward, const Vector& consumption);

  // sqrt(m ln((d + t m d) / delta)) + sqrt(m), t = rounds_seen().
  double radius() const;

  // sqrt(x^T M^{-1} x).
  double mahalanobis_inv_norm(const Vector& x) const;

  // max over the reward ellipsoid of x^T mu. Not clipped.
  double optimistic_reward(const Vector& x) const;

  // Entry j is min over the j-th consumption ellipsoid of x^T w_j. Not clipped.
  Vector optimistic_consumption(const Vector& x) const;

  std::size_t m() const { return m_; }
  std::size_t d() const { return d_; }
  double delta() const { return delta_; }
  std::size_t rounds_seen() const { return rounds_seen_; }

  const Matrix& gram() const { return gram_; }
  const Matrix& gram_inv() const { return gram_inv_; }
  const Vector& reward_moment() const { return reward_moment_; }
  const Matrix& consumption_moment() const { return consumption_moment_; }
  const Vector& mu_hat() const { return mu_hat_; }
  const Matrix& w_hat() const { return w_hat_; }

 private:
  void check_context(const Vector& x) const;
  void reinvert();

  std::size_t m_;
  std::size_t d_;
  double delta_;
  std::size_t rounds_seen_ = 0;

  Matrix gram_;
  Matrix gram_inv_;
  Vector reward_moment_;
  Matrix consumption_moment_;
  Vector mu_hat_;
  Matrix w_hat_;
};

// ||v||_M = sqrt(v^T M v) for positive semi-definite M.
double m_norm(const Vector& v, const Matrix& M);

}  // namespace lincbwk
