#pragma once

#include "lincbwk/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace lincbwk {

// Block-structured packing LP:
//
//   maximize    scale * sum_i sum_a pi_i(a) reward_i(a)
//   subject to  scale * sum_i sum_a pi_i(a) consumption_i(a) <= caps
//               pi_i in the simplex over options {0..K}
//
// Option 0 of every block is the no-op (zero reward and consumption), so the
// LP is always feasible and its value is nonnegative.
class PackingInstance {
 public:
  PackingInstance() = default;
  PackingInstance(std::size_t blocks, std::size_t arms, Vector caps, double scale);

  std::size_t blocks() const { return blocks_; }
  std::size_t arms() const { return arms_; }
  std::size_t options() const { return arms_ + 1; }
  std::size_t d() const { return static_cast<std::size_t>(caps_.size()); }
  double scale() const { return scale_; }
  const Vector& caps() const { return caps_; }
  void set_caps(Vector caps);

  // Option a in 1..K of block i.
  void set_option(std::size_t block, std::size_t option, double reward, const Vector& consumption);

  double reward(std::size_t block, std::size_t option) const {
    return rewards_[block * options() + option];
  }
  const double* consumption(std::size_t block, std::size_t option) const {
    return &consumption_[(block * options() + option) * d()];
  }

  // Throws invalid-input when the no-op is not zero, caps are negative or
  // entries are not finite.
  void validate() const;

 private:
  std::size_t blocks_ = 0;
  std::size_t arms_ = 0;
  Vector caps_;
  double scale_ = 1.0;
  std::vector<double> rewards_;
  std::vector<double> consumption_;
};

struct PackingSolution {
  double value = 0.0;
  // blocks x (K+1), row-major; row i is the distribution of block i.
  std::vector<double> distributions;
  // Multipliers on the d coupling constraints.
  Vector duals;
  // Lagrangian bound at `duals`; an upper bound on the LP value.
  double dual_bound = 0.0;

  double pi(std::size_t block, std::size_t option, std::size_t options) const {
    return distributions[block * options + option];
  }
};

struct PackingResiduals {
  double simplex = 0.0;          // max |sum_a pi_i(a) - 1| and max(-pi)
  double feasibility = 0.0;      // max_j (scaled consumption_j - cap_j)^+
  double slackness = 0.0;        // max_j |dual_j (cap_j - scaled consumption_j)|
  double gap = 0.0;              // dual_bound - value
  double objective_error = 0.0;  // |value - objective(distributions)|
};

inline constexpr double kFeasibilityTol = 1e-6;
inline constexpr double kGapTol = 1e-6;
inline constexpr std::size_t kSimplexVariableLimit = 5000;

// Dispatches on size: the full simplex up to kSimplexVariableLimit variables,
// the Lagrangian decomposition above it. Every result is checked against the
// feasibility and duality-gap tolerances; failures throw lp-numerics.
PackingSolution solve(const PackingInstance& instance);

// Dense primal simplex with Bland's rule on the whole LP.
PackingSolution solve_simplex(const PackingInstance& instance);

// Column generation on pure per-block policies. The pricing step is the
// closed-form per-block maximization of the Lagrangian at the master duals.
PackingSolution solve_decomposition(const PackingInstance& instance);

// lambda . caps + scale * sum_i max_a (reward_i(a) - lambda . consumption_i(a)).
double lagrangian_bound(const PackingInstance& instance, const Vector& lambda);

PackingResiduals residuals(const PackingInstance& instance, const PackingSolution& solution);

// Plain-text triage format:
//   line 1: T0 K d scale
//   line 2: caps (d numbers)
//   then T0*(K+1) lines "reward v_1 .. v_d", block-major, no-op first.
void write_instance(std::ostream& out, const PackingInstance& instance);
PackingInstance read_instance(std::istream& in);

// Writes the instance to a dump file under the system temp directory and
// returns its path; used when a solve fails.
std::string dump_instance(const PackingInstance& instance, const std::string& tag);

// Dense LP max c^T x s.t. A x <= b, x >= 0 with b >= 0, by the tableau simplex
// with Bland's rule. Exposed for the decomposition master and for tests.
struct DenseLpResult {
  double value = 0.0;
  Vector x;
  Vector y;  // constraint duals
  std::size_t pivots = 0;
};
DenseLpResult solve_dense_lp(const Matrix& A, const Vector& b, const Vector& c);

}  // namespace lincbwk
