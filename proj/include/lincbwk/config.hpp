#pragma once

#include "lincbwk/environment.hpp"
#include "lincbwk/types.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lincbwk {

struct EnvSpec {
  std::string kind = "linear";  // linear | bwk | ospp
  std::size_t m = 3;
  std::size_t d = 2;
  std::size_t arms = 10;
  std::uint64_t param_seed = 1;
  NoiseLaw noise;
  Vector reward_means;           // bwk
  Matrix consumption_means;      // bwk, d x K
  std::vector<Matrix> option_sets;  // ospp, each (d+1) x K

  std::size_t context_dim() const;
};

// One experiment, read from a flat "dotted.key = value" file.
//
//   env.kind env.m env.d env.K env.param_seed env.noise env.noise_scale
//   env.reward_means env.consumption_means env.option_sets
//   algo.name algo.z algo.T0
//   run.T run.B run.B_factor run.delta run.repeats run.seed run.out
//   run.oracle_samples
//
// Lists are comma separated; matrix rows are separated by ';'. Option sets
// are separated by '|', and within a set each ';' item is one option
// "r, v_1, .., v_d". run.B_factor = c means B = c * m * T^(3/4). Unknown or
// repeated keys are errors.
struct ExperimentConfig {
  EnvSpec env;
  std::string algorithm = "full";
  std::optional<double> z;
  std::size_t exploration_rounds = 0;  // 0 = ceil(sqrt(T))
  std::size_t horizon = 0;
  std::optional<double> budget;
  std::optional<double> budget_factor;
  double delta = 0.05;
  std::size_t repeats = 1;
  std::uint64_t seed = 1;
  std::string out_dir;
  std::size_t oracle_samples = 0;  // 0 = max(10^4, 10 T)

  double resolved_budget() const;
  // Throws config-invalid on inconsistent settings.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Environment described by an EnvSpec, with episode streams seeded by `seed`.
LinearEnvironment build_environment(const EnvSpec& spec, std::uint64_t seed);

bool is_known_algorithm(const std::string& name);

}  // namespace lincbwk
