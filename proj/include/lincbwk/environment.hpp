#pragma once

#include "lincbwk/rng.hpp"
#include "lincbwk/types.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace lincbwk {

// Distribution of the per-round slate.
struct SlateLaw {
  enum class Kind { kUniformBox, kDiscrete };

  Kind kind = Kind::kUniformBox;
  std::size_t m = 1;
  std::size_t arms = 1;
  // kUniformBox: every entry i.i.d. uniform on [0, box_upper].
  double box_upper = 1.0;
  // kDiscrete: one of `slates`, chosen uniformly.
  std::vector<ContextSlate> slates;

  static SlateLaw uniform_box(std::size_t m, std::size_t arms);  // box_upper = 1/sqrt(m)
  static SlateLaw discrete(std::vector<ContextSlate> slates);

  std::string name() const;
};

struct NoiseLaw {
  enum class Kind { kNone, kTwoPoint };

  Kind kind = Kind::kTwoPoint;
  // Two-point law: mean p moves to p +/- scale * min(p, 1-p) with equal
  // probability, so outcomes stay in [0,1] and the noise has mean zero.
  double scale = 1.0;

  std::string name() const;
};

// Synthetic instance with E[r | x] = mu*^T x and E[v | x] = W*^T x.
class LinearEnvironment {
 public:
  // Throws invalid-input when a dimension is inconsistent, a norm bound is
  // violated, or some context in the law's support maps outside [0,1].
  LinearEnvironment(Vector mu_star, Matrix w_star, SlateLaw context_law, NoiseLaw noise_law,
                    std::uint64_t seed);

  std::size_t m() const { return context_law_.m; }
  std::size_t d() const { return static_cast<std::size_t>(w_star_.cols()); }
  std::size_t arms() const { return context_law_.arms; }
  std::uint64_t seed() const { return seed_; }

  const Vector& mu_star() const { return mu_star_; }
  const Matrix& w_star() const { return w_star_; }
  const SlateLaw& context_law() const { return context_law_; }
  const NoiseLaw& noise_law() const { return noise_law_; }

  // Slate of round t; a pure function of (seed, t).
  ContextSlate sample_slate(std::size_t t) const;

  // Noisy outcome of playing context x. The zero context is the no-op and
  // returns (0, 0) without drawing noise.
  std::pair<double, Vector> realize(const Vector& x);

  double expected_reward(const Vector& x) const;
  Vector expected_consumption(const Vector& x) const;

  // Same parameters and laws, fresh streams derived from `seed`.
  LinearEnvironment with_seed(std::uint64_t seed) const;

  // Plain-text sidecar with mu*, W* and the law descriptions.
  void export_parameters(std::ostream& out) const;

 private:
  double noisy(double mean, Engine& engine) const;

  Vector mu_star_;
  Matrix w_star_;
  SlateLaw context_law_;
  NoiseLaw noise_law_;
  std::uint64_t seed_;
  Engine reward_noise_;
  Engine consumption_noise_;
};

// Default generator: mu* and every column of W* have i.i.d. uniform [0,1]
// entries rescaled to l1 norm sqrt(m), contexts are uniform on
// [0, 1/sqrt(m)]^m. Parameters depend on `param_seed` only.
LinearEnvironment make_linear(std::size_t m, std::size_t d, std::size_t arms,
                              std::uint64_t param_seed, NoiseLaw noise, std::uint64_t seed);

// Bandits with knapsacks: identity contexts, m = K.
// consumption_means is d x K. Throws invalid-means outside [0,1].
LinearEnvironment make_bwk(const Vector& reward_means, const Matrix& consumption_means,
                           NoiseLaw noise, std::uint64_t seed);

// Online stochastic packing: each option set is a (d+1) x K matrix whose
// columns are (reward, consumption) vectors. m = d+1, mu* = e_1, W* selects
// the remaining rows, no noise. Throws invalid-options outside [0,1].
LinearEnvironment make_ospp(std::vector<Matrix> option_sets, std::uint64_t seed);

}  // namespace lincbwk
