#pragma once

#include "lincbwk/estimation.hpp"
#include "lincbwk/rng.hpp"
#include "lincbwk/types.hpp"

#include <cmath>
#include <cstddef>

namespace lincbwk::testing {

inline double uniform(Engine& e, double lo, double hi) { return lo + (hi - lo) * uniform01(e); }

inline Vector random_vector(Engine& e, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uniform(e, lo, hi);
  return v;
}

// Context with entries in [0,1] and ||x||_2 <= sqrt(m).
inline Vector random_context(Engine& e, std::size_t m) { return random_vector(e, m, 0.0, 1.0); }

inline Matrix random_spd(Engine& e, std::size_t m) {
  Matrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = uniform(e, -1.0, 1.0);
  }
  return a * a.transpose() + 0.1 * Matrix::Identity(a.rows(), a.cols());
}

// Estimator after `n` random observations.
inline EstimatorState random_state(Engine& e, std::size_t m, std::size_t d, std::size_t n,
                                   double delta = 0.1) {
  EstimatorState s(m, d, delta);
  for (std::size_t k = 0; k < n; ++k) {
    s.update(random_context(e, m), uniform01(e), random_vector(e, d, 0.0, 1.0));
  }
  return s;
}

}  // namespace lincbwk::testing
