#include "lincbwk/config.hpp"

#include "lincbwk/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace lincbwk {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::kConfigInvalid, key + ": " + why);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) bad(key, "expected a number, got '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad(key, "expected a nonnegative integer, got '" + v + "'");
  return out;
}

Vector to_vector(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.empty()) bad(key, "empty list");
  Vector out(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) out[static_cast<Eigen::Index>(i)] = to_double(key, parts[i]);
  return out;
}

Matrix to_matrix(const std::string& key, const std::string& v) {
  const auto rows = split(v, ';');
  if (rows.empty()) bad(key, "empty matrix");
  std::vector<Vector> parsed;
  for (const auto& r : rows) parsed.push_back(to_vector(key, r));
  Matrix out(static_cast<Eigen::Index>(parsed.size()), parsed.front().size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].size() != out.cols()) bad(key, "ragged matrix rows");
    out.row(static_cast<Eigen::Index>(i)) = parsed[i].transpose();
  }
  return out;
}

// "r,v1,..;r,v1,..|..." -> list of (d+1) x K matrices.
std::vector<Matrix> to_option_sets(const std::string& key, const std::string& v) {
  std::vector<Matrix> sets;
  for (const auto& set : split(v, '|')) sets.push_back(to_matrix(key, set).transpose());
  return sets;
}

}  // namespace

std::size_t EnvSpec::context_dim() const {
  if (kind == "bwk") return static_cast<std::size_t>(reward_means.size());
  if (kind == "ospp") return option_sets.empty() ? 0 : static_cast<std::size_t>(option_sets.front().rows());
  return m;
}

double ExperimentConfig::resolved_budget() const {
  if (budget) return *budget;
  return budget_factor.value_or(0.0) * static_cast<double>(env.context_dim()) *
         std::pow(static_cast<double>(horizon), 0.75);
}

void ExperimentConfig::validate() const {
  if (!is_known_algorithm(algorithm)) bad("algo.name", "unknown algorithm '" + algorithm + "'");
  if (algorithm == "core" && !z) bad("algo.z", "required when algo.name = core");
  if (z && !(*z >= 0.0)) bad("algo.z", "must be nonnegative");
  if (horizon == 0) bad("run.T", "must be positive");
  if (budget.has_value() == budget_factor.has_value()) {
    bad("run.B", "exactly one of run.B and run.B_factor must be set");
  }
  if (!(resolved_budget() > 0.0)) bad("run.B", "budget must be positive");
  if (!(delta > 0.0 && delta < 1.0)) bad("run.delta", "must lie in (0,1)");
  if (repeats == 0) bad("run.repeats", "must be at least 1");
  if (env.kind == "linear") {
    if (env.m == 0 || env.d == 0 || env.arms == 0) bad("env", "m, d and K must be positive");
  } else if (env.kind == "bwk") {
    if (env.reward_means.size() == 0) bad("env.reward_means", "required for bwk");
    if (env.consumption_means.size() == 0) bad("env.consumption_means", "required for bwk");
  } else if (env.kind == "ospp") {
    if (env.option_sets.empty()) bad("env.option_sets", "required for ospp");
  } else {
    bad("env.kind", "unknown environment kind '" + env.kind + "'");
  }
}

bool is_known_algorithm(const std::string& name) {
  static const std::set<std::string> known{"full", "core", "oracle-static",
                                           "unconstrained-linucb", "uniform-random"};
  return known.count(name) > 0;
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"env.kind", [&](auto&, auto& v) { cfg.env.kind = v; }},
      {"env.m", [&](auto& k, auto& v) { cfg.env.m = to_uint(k, v); }},
      {"env.d", [&](auto& k, auto& v) { cfg.env.d = to_uint(k, v); }},
      {"env.K", [&](auto& k, auto& v) { cfg.env.arms = to_uint(k, v); }},
      {"env.param_seed", [&](auto& k, auto& v) { cfg.env.param_seed = to_uint(k, v); }},
      {"env.noise",
       [&](auto& k, auto& v) {
         if (v == "none") {
           cfg.env.noise.kind = NoiseLaw::Kind::kNone;
         } else if (v == "two_point") {
           cfg.env.noise.kind = NoiseLaw::Kind::kTwoPoint;
         } else {
           bad(k, "expected none or two_point");
         }
       }},
      {"env.noise_scale", [&](auto& k, auto& v) { cfg.env.noise.scale = to_double(k, v); }},
      {"env.reward_means", [&](auto& k, auto& v) { cfg.env.reward_means = to_vector(k, v); }},
      {"env.consumption_means",
       [&](auto& k, auto& v) { cfg.env.consumption_means = to_matrix(k, v); }},
      {"env.option_sets", [&](auto& k, auto& v) { cfg.env.option_sets = to_option_sets(k, v); }},
      {"algo.name", [&](auto&, auto& v) { cfg.algorithm = v; }},
      {"algo.z", [&](auto& k, auto& v) { cfg.z = to_double(k, v); }},
      {"algo.T0", [&](auto& k, auto& v) { cfg.exploration_rounds = to_uint(k, v); }},
      {"run.T", [&](auto& k, auto& v) { cfg.horizon = to_uint(k, v); }},
      {"run.B", [&](auto& k, auto& v) { cfg.budget = to_double(k, v); }},
      {"run.B_factor", [&](auto& k, auto& v) { cfg.budget_factor = to_double(k, v); }},
      {"run.delta", [&](auto& k, auto& v) { cfg.delta = to_double(k, v); }},
      {"run.repeats", [&](auto& k, auto& v) { cfg.repeats = to_uint(k, v); }},
      {"run.seed", [&](auto& k, auto& v) { cfg.seed = to_uint(k, v); }},
      {"run.out", [&](auto&, auto& v) { cfg.out_dir = v; }},
      {"run.oracle_samples", [&](auto& k, auto& v) { cfg.oracle_samples = to_uint(k, v); }},
  };

  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfigInvalid, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) bad(key, "unknown key (line " + std::to_string(line_no) + ")");
    if (!seen.insert(key).second) bad(key, "repeated key");
    it->second(key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigInvalid, "cannot open config file " + path);
  return parse_config(in);
}

LinearEnvironment build_environment(const EnvSpec& spec, std::uint64_t seed) {
  if (spec.kind == "bwk") return make_bwk(spec.reward_means, spec.consumption_means, spec.noise, seed);
  if (spec.kind == "ospp") return make_ospp(spec.option_sets, seed);
  return make_linear(spec.m, spec.d, spec.arms, spec.param_seed, spec.noise, seed);
}

}  // namespace lincbwk
