#pragma once

// Brute-force lower bound for small packing LPs: enumerate every joint
// choice of per-block distributions on the grid {k/N} and keep the best
// feasible objective. Independent of the solver code paths.

#include "lincbwk/packing_lp.hpp"
#include "lincbwk/rng.hpp"
#include "test_util.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace lincbwk::testing {

struct GridResult {
  double value = 0.0;
  double step = 1.0;
};

inline double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

namespace detail {

struct GridPoint {
  double reward;
  std::vector<double> use;
};

inline void compositions(std::size_t parts, std::size_t total, std::vector<std::size_t>& cur,
                         std::vector<std::vector<std::size_t>>& out) {
  if (parts == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::size_t k = 0; k <= total; ++k) {
    cur.push_back(k);
    compositions(parts - 1, total - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

// Uses the finest grid N <= 50 whose joint size stays within `budget`.
inline GridResult grid_enumerate(const PackingInstance& inst, double budget) {
  const std::size_t opts = inst.options();
  const std::size_t d = inst.d();
  std::size_t n = 50;
  while (n > 1 && std::pow(binomial(n + opts - 1, opts - 1), static_cast<double>(inst.blocks())) > budget) --n;

  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::size_t> cur;
  detail::compositions(opts, n, cur, comps);

  // Per-block grid points.
  std::vector<std::vector<detail::GridPoint>> points(inst.blocks());
  for (std::size_t i = 0; i < inst.blocks(); ++i) {
    for (const auto& c : comps) {
      detail::GridPoint p{0.0, std::vector<double>(d, 0.0)};
      for (std::size_t a = 0; a < opts; ++a) {
        const double w = static_cast<double>(c[a]) / static_cast<double>(n);
        p.reward += w * inst.reward(i, a);
        const double* v = inst.consumption(i, a);
        for (std::size_t j = 0; j < d; ++j) p.use[j] += w * v[j];
      }
      points[i].push_back(std::move(p));
    }
  }

  double best = 0.0;
  std::vector<double> use(d, 0.0);
  auto recurse = [&](auto&& self, std::size_t block, double reward) -> void {
    if (block == inst.blocks()) {
      for (std::size_t j = 0; j < d; ++j) {
        if (inst.scale() * use[j] > inst.caps()[static_cast<Eigen::Index>(j)]) return;
      }
      best = std::max(best, inst.scale() * reward);
      return;
    }
    for (const auto& p : points[block]) {
      for (std::size_t j = 0; j < d; ++j) use[j] += p.use[j];
      self(self, block + 1, reward + p.reward);
      for (std::size_t j = 0; j < d; ++j) use[j] -= p.use[j];
    }
  };
  recurse(recurse, 0, 0.0);
  return {best, 1.0 / static_cast<double>(n)};
}

// T0 <= max_blocks, K <= max_arms, d <= max_d; entries uniform in [0,1],
// scale 1 and caps uniform in [0, 0.7 T0] so constraints often bind.
inline PackingInstance random_packing_instance(Engine& e, std::size_t max_blocks,
                                               std::size_t max_arms, std::size_t max_d) {
  auto pick = [&](std::size_t hi) {
    return 1 + std::min(hi - 1, static_cast<std::size_t>(uniform01(e) * static_cast<double>(hi)));
  };
  const std::size_t blocks = pick(max_blocks);
  const std::size_t arms = pick(max_arms);
  const std::size_t d = pick(max_d);
  PackingInstance inst(blocks, arms,
                       random_vector(e, d, 0.0, 0.7 * static_cast<double>(blocks)), 1.0);
  for (std::size_t i = 0; i < blocks; ++i) {
    for (std::size_t a = 1; a <= arms; ++a) {
      inst.set_option(i, a, uniform01(e), random_vector(e, d, 0.0, 1.0));
    }
  }
  return inst;
}

}  // namespace lincbwk::testing
