#pragma once

#include "lincbwk/environment.hpp"
#include "lincbwk/packing_lp.hpp"
#include "lincbwk/rng.hpp"
#include "lincbwk/types.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lincbwk {

// Optimal static context-dependent policy against the true parameters,
// computed from a packing LP over sampled slates (or over the whole support
// when the context law is discrete).
struct OracleResult {
  double value = 0.0;  // approximation of OPT = T r(pi*)
  Vector duals;        // resource prices of the LP optimum
  // Discrete laws only: distribution over options 0..K for each support slate.
  std::vector<Vector> support_distributions;
};

// n_samples >= 1. Slates come from a stream derived from `seed` that the
// learner never sees.
OracleResult opt_oracle(const LinearEnvironment& env, double budget, std::size_t horizon,
                        std::size_t n_samples, std::uint64_t seed);

// max(10^4, 10 T).
std::size_t default_oracle_samples(std::size_t horizon);

// Plays the oracle's static policy: the support distribution on discrete
// laws, otherwise the argmax of mu*^T x - duals . W*^T x (no-op included).
class StaticPolicy {
 public:
  StaticPolicy(const LinearEnvironment& env, OracleResult oracle);
  ArmIndex act(const ContextSlate& slate, Engine& engine) const;

 private:
  const LinearEnvironment* env_;
  OracleResult oracle_;
};

}  // namespace lincbwk
