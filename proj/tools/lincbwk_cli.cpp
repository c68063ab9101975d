// Command-line runner for linear contextual bandits with knapsacks.
//
//   lincbwk run      --config PATH [--out DIR] [--seed N]
//   lincbwk sweep    --config PATH --axis T|B|m --values v1,v2,...
//   lincbwk oracle   --config PATH
//   lincbwk baseline --name NAME --config PATH
//
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include "lincbwk/config.hpp"
#include "lincbwk/error.hpp"
#include "lincbwk/harness.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 1;

int exit_code(lincbwk::ErrorCode code) {
  using lincbwk::ErrorCode;
  switch (code) {
    case ErrorCode::kLpNumerics: return kExitNumeric;
    case ErrorCode::kIoError: return kExitIo;
    default: return kExitConfig;
  }
}

void print_summary(const lincbwk::ExperimentSummary& s) {
  std::cout << "algorithm " << s.algorithm << "  T " << s.horizon << "  B " << s.budget
            << "  OPT " << s.opt << '\n'
            << "median reward " << s.median_reward << "  median regret " << s.median_regret
            << "  (q1 " << s.q1_regret << ", q3 " << s.q3_regret << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear contextual bandits with knapsacks: experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::string axis;
  std::vector<double> values;
  std::string baseline_name;

  auto* run_cmd = app.add_subcommand("run", "Run the configured experiment");
  run_cmd->add_option("--config", config_path, "Experiment config file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides run.out)");
  run_cmd->add_option("--seed", seed, "Master seed (overrides run.seed)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run the experiment over a list of axis values");
  sweep_cmd->add_option("--config", config_path, "Experiment config file")->required();
  sweep_cmd->add_option("--axis", axis, "Axis to vary")->required()->check(CLI::IsMember({"T", "B", "m"}));
  sweep_cmd->add_option("--values", values, "Comma-separated axis values")->required()->delimiter(',');
  sweep_cmd->add_option("--out", out_dir, "Output directory (overrides run.out)");

  auto* oracle_cmd = app.add_subcommand("oracle", "Print the oracle OPT for the configured environment");
  oracle_cmd->add_option("--config", config_path, "Experiment config file")->required();

  auto* baseline_cmd = app.add_subcommand("baseline", "Run a baseline policy");
  baseline_cmd->add_option("--name", baseline_name, "oracle-static | unconstrained-linucb | uniform-random")
      ->required();
  baseline_cmd->add_option("--config", config_path, "Experiment config file")->required();
  baseline_cmd->add_option("--out", out_dir, "Output directory (overrides run.out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    lincbwk::ExperimentConfig config = lincbwk::load_config(config_path);
    if (out_dir) config.out_dir = *out_dir;
    if (seed) config.seed = *seed;

    if (*run_cmd) {
      print_summary(lincbwk::run(config));
    } else if (*baseline_cmd) {
      if (baseline_name != "oracle-static" && baseline_name != "unconstrained-linucb" &&
          baseline_name != "uniform-random") {
        throw lincbwk::Error(lincbwk::ErrorCode::kUnknownBaseline, baseline_name);
      }
      config.algorithm = baseline_name;
      print_summary(lincbwk::run(config));
    } else if (*oracle_cmd) {
      const auto env = lincbwk::build_environment(config.env, config.seed);
      std::cout.precision(12);
      std::cout << lincbwk::compute_oracle(config, env).value << '\n';
    } else if (*sweep_cmd) {
      const auto result = lincbwk::sweep(config, axis, values);
      if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::ofstream csv(std::filesystem::path(config.out_dir) / "sweep.csv");
        if (!csv) throw lincbwk::Error(lincbwk::ErrorCode::kIoError, "cannot write sweep.csv");
        lincbwk::write_sweep_csv(csv, result);
      }
      lincbwk::write_sweep_csv(std::cout, result);
    }
  } catch (const lincbwk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
