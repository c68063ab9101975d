#include "lincbwk/packing_lp.hpp"

#include "lincbwk/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace lincbwk {

PackingInstance::PackingInstance(std::size_t blocks, std::size_t arms, Vector caps, double scale)
    : blocks_(blocks),
      arms_(arms),
      caps_(std::move(caps)),
      scale_(scale),
      rewards_(blocks * (arms + 1), 0.0),
      consumption_(blocks * (arms + 1) * static_cast<std::size_t>(caps_.size()), 0.0) {}

void PackingInstance::set_caps(Vector caps) {
  if (caps.size() != caps_.size()) throw Error(ErrorCode::kInvalidInput, "cap dimension mismatch");
  caps_ = std::move(caps);
}

void PackingInstance::set_option(std::size_t block, std::size_t option, double reward,
                                 const Vector& consumption) {
  if (block >= blocks_ || option == 0 || option > arms_) {
    throw Error(ErrorCode::kInvalidInput, "option index out of range");
  }
  if (static_cast<std::size_t>(consumption.size()) != d()) {
    throw Error(ErrorCode::kInvalidInput, "consumption dimension mismatch");
  }
  const std::size_t k = block * options() + option;
  rewards_[k] = reward;
  std::copy(consumption.data(), consumption.data() + d(), consumption_.begin() + k * d());
}

void PackingInstance::validate() const {
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) {
    throw Error(ErrorCode::kInvalidInput, "scale must be positive");
  }
  for (Eigen::Index j = 0; j < caps_.size(); ++j) {
    if (!(caps_[j] >= 0.0) || !std::isfinite(caps_[j])) {
      throw Error(ErrorCode::kInvalidInput, "caps must be finite and nonnegative");
    }
  }
  for (std::size_t i = 0; i < blocks_; ++i) {
    if (reward(i, 0) != 0.0) throw Error(ErrorCode::kInvalidInput, "no-op must have zero reward");
    const double* c0 = consumption(i, 0);
    for (std::size_t j = 0; j < d(); ++j) {
      if (c0[j] != 0.0) throw Error(ErrorCode::kInvalidInput, "no-op must have zero consumption");
    }
  }
  for (double v : rewards_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidInput, "non-finite reward");
  }
  for (double v : consumption_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidInput, "non-finite consumption");
  }
}

// ---------------------------------------------------------------------------
// Dense tableau simplex.

DenseLpResult solve_dense_lp(const Matrix& A, const Vector& b, const Vector& c) {
  const Eigen::Index p = A.rows();
  const Eigen::Index n = A.cols();
  if (b.size() != p || c.size() != n) throw Error(ErrorCode::kInvalidInput, "LP shape mismatch");
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!(b[i] >= 0.0)) throw Error(ErrorCode::kInvalidInput, "LP right-hand side must be >= 0");
  }

  const Eigen::Index cols = n + p;
  const Eigen::Index rhs = cols;
  Matrix tab = Matrix::Zero(p + 1, cols + 1);
  tab.topLeftCorner(p, n) = A;
  tab.block(0, n, p, p).setIdentity();
  tab.col(rhs).head(p) = b;
  tab.row(p).head(n) = c.transpose();

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(p));
  for (Eigen::Index i = 0; i < p; ++i) basis[static_cast<std::size_t>(i)] = n + i;

  const double cost_eps = 1e-11 * (1.0 + (n > 0 ? c.cwiseAbs().maxCoeff() : 0.0));
  constexpr double kPivotEps = 1e-12;
  const std::size_t max_pivots = 200 * static_cast<std::size_t>(cols + 1) + 10000;

  DenseLpResult result;
  for (;;) {
    // Bland: lowest-index improving column.
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (tab(p, j) > cost_eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p; ++i) {
      const double a = tab(i, enter);
      if (a <= kPivotEps) continue;
      const double ratio = tab(i, rhs) / a;
      const bool tie = leave >= 0 && std::abs(ratio - best_ratio) <= 1e-15 * (1.0 + best_ratio);
      if (leave < 0 || (!tie && ratio < best_ratio)) {
        best_ratio = ratio;
        leave = i;
      } else if (tie &&
                 basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)]) {
        leave = i;
      }
    }
    if (leave < 0) throw Error(ErrorCode::kLpNumerics, "LP unbounded");

    const double piv = tab(leave, enter);
    tab.row(leave) /= piv;
    for (Eigen::Index i = 0; i <= p; ++i) {
      if (i == leave) continue;
      const double f = tab(i, enter);
      if (f != 0.0) tab.row(i) -= f * tab.row(leave);
    }
    tab(leave, enter) = 1.0;
    basis[static_cast<std::size_t>(leave)] = enter;

    if (++result.pivots > max_pivots) {
      throw Error(ErrorCode::kLpNumerics, "simplex pivot limit exceeded");
    }
  }

  result.x = Vector::Zero(n);
  for (Eigen::Index i = 0; i < p; ++i) {
    const Eigen::Index v = basis[static_cast<std::size_t>(i)];
    if (v < n) result.x[v] = std::max(0.0, tab(i, rhs));
  }
  result.y = (-tab.row(p).segment(n, p)).transpose().cwiseMax(0.0);
  result.value = c.dot(result.x);
  return result;
}

// ---------------------------------------------------------------------------

namespace {

double option_score(const PackingInstance& inst, std::size_t i, std::size_t a,
                    const Vector& lambda) {
  const double* v = inst.consumption(i, a);
  double s = inst.reward(i, a);
  for (std::size_t j = 0; j < inst.d(); ++j) s -= lambda[static_cast<Eigen::Index>(j)] * v[j];
  return s;
}

// Lowest-index maximizer of reward - lambda . consumption, no-op included.
std::size_t best_option(const PackingInstance& inst, std::size_t i, const Vector& lambda) {
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t a = 1; a < inst.options(); ++a) {
    const double s = option_score(inst, i, a, lambda);
    if (s > best_score) {
      best_score = s;
      best = a;
    }
  }
  return best;
}

void certify(const PackingInstance& instance, PackingSolution& solution) {
  solution.dual_bound = lagrangian_bound(instance, solution.duals);
  const PackingResiduals r = residuals(instance, solution);
  const double scale = 1.0 + std::abs(solution.value);
  if (r.simplex > 1e-9 || r.feasibility > kFeasibilityTol || r.slackness > kFeasibilityTol ||
      r.gap > kGapTol * scale || r.gap < -kGapTol * scale) {
    std::ostringstream msg;
    msg << "solution failed certification (simplex " << r.simplex << ", feasibility "
        << r.feasibility << ", slackness " << r.slackness << ", gap " << r.gap
        << "); instance dumped to " << dump_instance(instance, "certify");
    throw Error(ErrorCode::kLpNumerics, msg.str());
  }
}

}  // namespace

double lagrangian_bound(const PackingInstance& instance, const Vector& lambda) {
  double total = 0.0;
  for (std::size_t i = 0; i < instance.blocks(); ++i) {
    double best = 0.0;
    for (std::size_t a = 1; a < instance.options(); ++a) {
      best = std::max(best, option_score(instance, i, a, lambda));
    }
    total += best;
  }
  return lambda.dot(instance.caps()) + instance.scale() * total;
}

PackingResiduals residuals(const PackingInstance& instance, const PackingSolution& solution) {
  PackingResiduals r;
  const std::size_t opts = instance.options();
  const std::size_t d = instance.d();
  Vector used = Vector::Zero(static_cast<Eigen::Index>(d));
  double objective = 0.0;
  for (std::size_t i = 0; i < instance.blocks(); ++i) {
    double mass = 0.0;
    for (std::size_t a = 0; a < opts; ++a) {
      const double p = solution.pi(i, a, opts);
      mass += p;
      r.simplex = std::max(r.simplex, -p);
      objective += p * instance.reward(i, a);
      const double* v = instance.consumption(i, a);
      for (std::size_t j = 0; j < d; ++j) used[static_cast<Eigen::Index>(j)] += p * v[j];
    }
    r.simplex = std::max(r.simplex, std::abs(mass - 1.0));
  }
  used *= instance.scale();
  objective *= instance.scale();
  for (std::size_t j = 0; j < d; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double slack = instance.caps()[jj] - used[jj];
    r.feasibility = std::max(r.feasibility, -slack);
    r.slackness = std::max(r.slackness, std::abs(solution.duals[jj] * slack));
  }
  r.gap = solution.dual_bound - solution.value;
  r.objective_error = std::abs(objective - solution.value);
  return r;
}

PackingSolution solve_simplex(const PackingInstance& instance) {
  instance.validate();
  const std::size_t blocks = instance.blocks();
  const std::size_t arms = instance.arms();
  const std::size_t d = instance.d();
  const auto n = static_cast<Eigen::Index>(blocks * arms);
  const auto p = static_cast<Eigen::Index>(d + blocks);

  // Variables pi_i(a), a >= 1; the no-op is the slack of the block row.
  Matrix A = Matrix::Zero(p, n);
  Vector b(p);
  Vector c(n);
  b.head(static_cast<Eigen::Index>(d)) = instance.caps();
  b.tail(static_cast<Eigen::Index>(blocks)).setOnes();
  for (std::size_t i = 0; i < blocks; ++i) {
    for (std::size_t a = 1; a <= arms; ++a) {
      const auto col = static_cast<Eigen::Index>(i * arms + a - 1);
      c[col] = instance.scale() * instance.reward(i, a);
      const double* v = instance.consumption(i, a);
      for (std::size_t j = 0; j < d; ++j) {
        A(static_cast<Eigen::Index>(j), col) = instance.scale() * v[j];
      }
      A(static_cast<Eigen::Index>(d + i), col) = 1.0;
    }
  }

  const DenseLpResult lp = solve_dense_lp(A, b, c);

  PackingSolution sol;
  sol.value = lp.value;
  sol.duals = lp.y.head(static_cast<Eigen::Index>(d));
  sol.distributions.assign(blocks * instance.options(), 0.0);
  for (std::size_t i = 0; i < blocks; ++i) {
    double mass = 0.0;
    for (std::size_t a = 1; a <= arms; ++a) {
      const double v = std::min(1.0, lp.x[static_cast<Eigen::Index>(i * arms + a - 1)]);
      sol.distributions[i * instance.options() + a] = v;
      mass += v;
    }
    sol.distributions[i * instance.options()] = std::max(0.0, 1.0 - mass);
  }
  certify(instance, sol);
  return sol;
}

PackingSolution solve_decomposition(const PackingInstance& instance) {
  instance.validate();
  const std::size_t d = instance.d();
  const auto di = static_cast<Eigen::Index>(d);
  const std::size_t opts = instance.options();
  constexpr std::size_t kMaxColumns = 2000;

  // Each column is the pure policy priced at some lambda; the policy itself
  // is regenerated from that lambda when the final mixture is assembled.
  std::vector<Vector> column_lambda;
  std::vector<double> column_reward;
  std::vector<Vector> column_use;

  auto price = [&](const Vector& lambda) {
    double reward = 0.0;
    Vector use = Vector::Zero(di);
    for (std::size_t i = 0; i < instance.blocks(); ++i) {
      const std::size_t a = best_option(instance, i, lambda);
      if (a == 0) continue;
      reward += instance.reward(i, a);
      const double* v = instance.consumption(i, a);
      for (std::size_t j = 0; j < d; ++j) use[static_cast<Eigen::Index>(j)] += v[j];
    }
    column_lambda.push_back(lambda);
    column_reward.push_back(instance.scale() * reward);
    column_use.push_back(instance.scale() * use);
  };

  Vector lambda = Vector::Zero(di);
  price(lambda);

  DenseLpResult master;
  for (;;) {
    const auto k = static_cast<Eigen::Index>(column_reward.size());
    Matrix A(di + 1, k);
    Vector c(k);
    for (Eigen::Index col = 0; col < k; ++col) {
      A.col(col).head(di) = column_use[static_cast<std::size_t>(col)];
      A(di, col) = 1.0;
      c[col] = column_reward[static_cast<std::size_t>(col)];
    }
    Vector b(di + 1);
    b.head(di) = instance.caps();
    b[di] = 1.0;
    master = solve_dense_lp(A, b, c);
    lambda = master.y.head(di);
    const double upper = lagrangian_bound(instance, lambda);
    // Reduced cost of the next column equals upper - master value.
    if (upper - master.value <= 1e-10 * (1.0 + std::abs(master.value))) break;
    if (column_reward.size() >= kMaxColumns) {
      throw Error(ErrorCode::kLpNumerics, "decomposition did not converge; instance dumped to " +
                                              dump_instance(instance, "decomposition"));
    }
    price(lambda);
  }

  PackingSolution sol;
  sol.duals = lambda;
  sol.distributions.assign(instance.blocks() * opts, 0.0);
  double used_mass = 0.0;
  for (Eigen::Index col = 0; col < master.x.size(); ++col) {
    const double alpha = master.x[col];
    if (alpha <= 0.0) continue;
    used_mass += alpha;
    const Vector& at = column_lambda[static_cast<std::size_t>(col)];
    for (std::size_t i = 0; i < instance.blocks(); ++i) {
      sol.distributions[i * opts + best_option(instance, i, at)] += alpha;
    }
  }
  for (std::size_t i = 0; i < instance.blocks(); ++i) {
    sol.distributions[i * opts] += std::max(0.0, 1.0 - used_mass);
  }
  sol.value = master.value;
  certify(instance, sol);
  return sol;
}

PackingSolution solve(const PackingInstance& instance) {
  if (instance.blocks() * instance.arms() <= kSimplexVariableLimit) return solve_simplex(instance);
  return solve_decomposition(instance);
}

// ---------------------------------------------------------------------------

void write_instance(std::ostream& out, const PackingInstance& instance) {
  out.precision(17);
  out << instance.blocks() << ' ' << instance.arms() << ' ' << instance.d() << ' '
      << instance.scale() << '\n';
  for (std::size_t j = 0; j < instance.d(); ++j) {
    out << (j ? " " : "") << instance.caps()[static_cast<Eigen::Index>(j)];
  }
  out << '\n';
  for (std::size_t i = 0; i < instance.blocks(); ++i) {
    for (std::size_t a = 0; a < instance.options(); ++a) {
      out << instance.reward(i, a);
      const double* v = instance.consumption(i, a);
      for (std::size_t j = 0; j < instance.d(); ++j) out << ' ' << v[j];
      out << '\n';
    }
  }
}

PackingInstance read_instance(std::istream& in) {
  std::size_t blocks = 0, arms = 0, d = 0;
  double scale = 0.0;
  if (!(in >> blocks >> arms >> d >> scale)) {
    throw Error(ErrorCode::kInvalidInput, "malformed packing instance header");
  }
  Vector caps(static_cast<Eigen::Index>(d));
  for (std::size_t j = 0; j < d; ++j) {
    if (!(in >> caps[static_cast<Eigen::Index>(j)])) {
      throw Error(ErrorCode::kInvalidInput, "malformed caps line");
    }
  }
  PackingInstance instance(blocks, arms, caps, scale);
  Vector v(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < blocks; ++i) {
    for (std::size_t a = 0; a <= arms; ++a) {
      double r = 0.0;
      if (!(in >> r)) throw Error(ErrorCode::kInvalidInput, "malformed option line");
      for (std::size_t j = 0; j < d; ++j) {
        if (!(in >> v[static_cast<Eigen::Index>(j)])) {
          throw Error(ErrorCode::kInvalidInput, "malformed option line");
        }
      }
      if (a == 0) {
        if (r != 0.0 || v.cwiseAbs().sum() != 0.0) {
          throw Error(ErrorCode::kInvalidInput, "no-op line must be all zeros");
        }
        continue;
      }
      instance.set_option(i, a, r, v);
    }
  }
  return instance;
}

std::string dump_instance(const PackingInstance& instance, const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  const auto dir = std::filesystem::temp_directory_path(ec);
  if (ec) return "<no temp directory>";
  const auto path = dir / ("lincbwk-lp-" + tag + "-" + std::to_string(counter++) + ".txt");
  std::ofstream out(path);
  if (!out) return "<unwritable>";
  write_instance(out, instance);
  return path.string();
}

}  // namespace lincbwk
