#pragma once

#include "lincbwk/types.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace lincbwk {

// Point of {theta >= 0, ||theta||_1 <= 1}, stored as a (d+1)-simplex point
// whose last coordinate is the zero-payoff dummy.
struct DualVector {
  Vector active;
  double dummy = 0.0;

  std::size_t d() const { return static_cast<std::size_t>(active.size()); }
  double value(const Vector& payoff) const { return active.dot(payoff); }
};

struct DualConfig {
  std::size_t d = 1;
  double eta = 0.0;
  std::size_t horizon = 1;

  // eta = sqrt(ln(d+1) / T).
  static DualConfig tuned(std::size_t d, std::size_t horizon);
};

// Uniform start: every coordinate, dummy included, is 1/(d+1).
DualVector init_dual(const DualConfig& config);

// Exponentiated-gradient ascent step. Payoffs are clamped to [-1,1]; the
// dummy coordinate always receives payoff 0.
DualVector dual_step(const DualVector& theta, const Vector& payoff, const DualConfig& config);

// Best fixed point of the domain in hindsight for linear payoffs. The
// maximizer is a vertex: either 0 or some e_j.
std::pair<DualVector, double> hindsight_best(std::span<const Vector> payoff_history);

}  // namespace lincbwk
