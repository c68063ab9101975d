#include "lincbwk/environment.hpp"

#include "lincbwk/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace lincbwk {

namespace {

constexpr double kRangeSlack = 1e-12;

// Range of p^T x over the box [0, u]^m.
std::pair<double, double> box_range(const Vector& p, double u) {
  double lo = 0.0, hi = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    lo += std::min(0.0, p[i] * u);
    hi += std::max(0.0, p[i] * u);
  }
  return {lo, hi};
}

void require_unit_range(double lo, double hi, const char* what) {
  if (lo < -kRangeSlack || hi > 1.0 + kRangeSlack) {
    std::ostringstream msg;
    msg << what << " ranges over [" << lo << ", " << hi << "], outside [0,1]";
    throw Error(ErrorCode::kInvalidInput, msg.str());
  }
}

double to_unit(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

SlateLaw SlateLaw::uniform_box(std::size_t m, std::size_t arms) {
  SlateLaw law;
  law.kind = Kind::kUniformBox;
  law.m = m;
  law.arms = arms;
  law.box_upper = 1.0 / std::sqrt(static_cast<double>(m));
  return law;
}

SlateLaw SlateLaw::discrete(std::vector<ContextSlate> slates) {
  if (slates.empty()) throw Error(ErrorCode::kInvalidInput, "discrete law needs a slate");
  SlateLaw law;
  law.kind = Kind::kDiscrete;
  law.m = static_cast<std::size_t>(slates.front().rows());
  law.arms = static_cast<std::size_t>(slates.front().cols());
  for (const auto& s : slates) {
    if (static_cast<std::size_t>(s.rows()) != law.m ||
        static_cast<std::size_t>(s.cols()) != law.arms) {
      throw Error(ErrorCode::kInvalidInput, "discrete slates must share a shape");
    }
  }
  law.slates = std::move(slates);
  return law;
}

std::string SlateLaw::name() const {
  std::ostringstream out;
  if (kind == Kind::kUniformBox) {
    out << "uniform_box(upper=" << box_upper << ")";
  } else {
    out << "discrete(" << slates.size() << " slates)";
  }
  return out.str();
}

std::string NoiseLaw::name() const {
  if (kind == Kind::kNone) return "none";
  std::ostringstream out;
  out << "two_point(scale=" << scale << ")";
  return out.str();
}

LinearEnvironment::LinearEnvironment(Vector mu_star, Matrix w_star, SlateLaw context_law,
                                     NoiseLaw noise_law, std::uint64_t seed)
    : mu_star_(std::move(mu_star)),
      w_star_(std::move(w_star)),
      context_law_(std::move(context_law)),
      noise_law_(noise_law),
      seed_(seed),
      reward_noise_(make_engine(seed, Stream::kRewardNoise)),
      consumption_noise_(make_engine(seed, Stream::kConsumptionNoise)) {
  const std::size_t m = context_law_.m;
  if (m == 0 || context_law_.arms == 0 || w_star_.cols() == 0) {
    throw Error(ErrorCode::kInvalidDimension, "m, d and K must be positive");
  }
  if (static_cast<std::size_t>(mu_star_.size()) != m ||
      static_cast<std::size_t>(w_star_.rows()) != m) {
    throw Error(ErrorCode::kInvalidInput, "parameter dimensions disagree with the context law");
  }
  const double root_m = std::sqrt(static_cast<double>(m));
  if (mu_star_.norm() > root_m * (1.0 + kRangeSlack)) {
    throw Error(ErrorCode::kInvalidInput, "||mu*|| exceeds sqrt(m)");
  }
  for (Eigen::Index j = 0; j < w_star_.cols(); ++j) {
    if (w_star_.col(j).norm() > root_m * (1.0 + kRangeSlack)) {
      throw Error(ErrorCode::kInvalidInput, "a column of W* exceeds norm sqrt(m)");
    }
  }
  if (noise_law_.kind == NoiseLaw::Kind::kTwoPoint &&
      !(noise_law_.scale >= 0.0 && noise_law_.scale <= 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "two-point noise scale must lie in [0,1]");
  }

  if (context_law_.kind == SlateLaw::Kind::kUniformBox) {
    const double u = context_law_.box_upper;
    if (!(u > 0.0) || u * u * static_cast<double>(m) > static_cast<double>(m) * (1 + kRangeSlack)) {
      throw Error(ErrorCode::kInvalidInput, "box law violates ||x|| <= sqrt(m)");
    }
    auto [lo, hi] = box_range(mu_star_, u);
    require_unit_range(lo, hi, "mu*^T x");
    for (Eigen::Index j = 0; j < w_star_.cols(); ++j) {
      std::tie(lo, hi) = box_range(w_star_.col(j), u);
      require_unit_range(lo, hi, "W*^T x");
    }
  } else {
    for (const auto& slate : context_law_.slates) {
      for (Eigen::Index a = 0; a < slate.cols(); ++a) {
        const Vector x = slate.col(a);
        if (x.minCoeff() < 0.0 || x.maxCoeff() > 1.0) {
          throw Error(ErrorCode::kInvalidInput, "context entries must lie in [0,1]");
        }
        const double r = mu_star_.dot(x);
        require_unit_range(r, r, "mu*^T x");
        const Vector v = w_star_.transpose() * x;
        require_unit_range(v.minCoeff(), v.maxCoeff(), "W*^T x");
      }
    }
  }
}

ContextSlate LinearEnvironment::sample_slate(std::size_t t) const {
  const auto m = static_cast<Eigen::Index>(context_law_.m);
  const auto k = static_cast<Eigen::Index>(context_law_.arms);
  if (context_law_.kind == SlateLaw::Kind::kDiscrete) {
    const auto& slates = context_law_.slates;
    if (slates.size() == 1) return slates.front();
    Engine engine = make_engine(seed_, Stream::kContexts, t);
    const auto pick = static_cast<std::size_t>(uniform01(engine) * static_cast<double>(slates.size()));
    return slates[std::min(pick, slates.size() - 1)];
  }
  Engine engine = make_engine(seed_, Stream::kContexts, t);
  ContextSlate slate(m, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index i = 0; i < m; ++i) slate(i, a) = context_law_.box_upper * uniform01(engine);
  }
  return slate;
}

double LinearEnvironment::noisy(double mean, Engine& engine) const {
  const double p = to_unit(mean);
  if (noise_law_.kind == NoiseLaw::Kind::kNone) return p;
  const double half = noise_law_.scale * std::min(p, 1.0 - p);
  const double u = uniform01(engine);
  // Guards only against one-ulp excursions of p +/- half.
  return to_unit(u < 0.5 ? p + half : p - half);
}

std::pair<double, Vector> LinearEnvironment::realize(const Vector& x) {
  if (static_cast<std::size_t>(x.size()) != m()) {
    throw Error(ErrorCode::kContextOutOfRange, "context has wrong dimension");
  }
  const auto d = static_cast<Eigen::Index>(this->d());
  if (x.isZero(0.0)) return {0.0, Vector::Zero(d)};
  const double reward = noisy(mu_star_.dot(x), reward_noise_);
  Vector consumption = w_star_.transpose() * x;
  for (Eigen::Index j = 0; j < d; ++j) consumption[j] = noisy(consumption[j], consumption_noise_);
  return {reward, consumption};
}

double LinearEnvironment::expected_reward(const Vector& x) const { return mu_star_.dot(x); }

Vector LinearEnvironment::expected_consumption(const Vector& x) const {
  return w_star_.transpose() * x;
}

LinearEnvironment LinearEnvironment::with_seed(std::uint64_t seed) const {
  return LinearEnvironment(mu_star_, w_star_, context_law_, noise_law_, seed);
}

void LinearEnvironment::export_parameters(std::ostream& out) const {
  const Eigen::IOFormat row_format(Eigen::FullPrecision, Eigen::DontAlignCols, " ", "\n");
  out << "m " << m() << "\nd " << d() << "\nK " << arms() << "\nseed " << seed_ << '\n';
  out << "context_law " << context_law_.name() << '\n';
  out << "noise_law " << noise_law_.name() << '\n';
  out << "mu_star\n" << mu_star_.transpose().format(row_format) << '\n';
  out << "w_star\n" << w_star_.format(row_format) << '\n';
}

LinearEnvironment make_linear(std::size_t m, std::size_t d, std::size_t arms,
                              std::uint64_t param_seed, NoiseLaw noise, std::uint64_t seed) {
  if (m == 0 || d == 0 || arms == 0) {
    throw Error(ErrorCode::kInvalidDimension, "m, d and K must be positive");
  }
  Engine engine = make_engine(param_seed, Stream::kParameters);
  const auto mi = static_cast<Eigen::Index>(m);
  const double target = std::sqrt(static_cast<double>(m));
  auto draw = [&]() {
    Vector p(mi);
    for (Eigen::Index i = 0; i < mi; ++i) p[i] = uniform01(engine) + 1e-3;
    return Vector(p * (target / p.sum()));
  };
  Vector mu = draw();
  Matrix w(mi, static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < w.cols(); ++j) w.col(j) = draw();
  return LinearEnvironment(std::move(mu), std::move(w), SlateLaw::uniform_box(m, arms), noise,
                           seed);
}

LinearEnvironment make_bwk(const Vector& reward_means, const Matrix& consumption_means,
                           NoiseLaw noise, std::uint64_t seed) {
  const Eigen::Index k = reward_means.size();
  if (k == 0 || consumption_means.cols() != k || consumption_means.rows() == 0) {
    throw Error(ErrorCode::kInvalidMeans, "means must be K-vector and d x K matrix");
  }
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  for (Eigen::Index a = 0; a < k; ++a) {
    if (!in_unit(reward_means[a])) throw Error(ErrorCode::kInvalidMeans, "reward mean outside [0,1]");
    for (Eigen::Index j = 0; j < consumption_means.rows(); ++j) {
      if (!in_unit(consumption_means(j, a))) {
        throw Error(ErrorCode::kInvalidMeans, "consumption mean outside [0,1]");
      }
    }
  }
  return LinearEnvironment(reward_means, consumption_means.transpose(),
                           SlateLaw::discrete({Matrix::Identity(k, k)}), noise, seed);
}

LinearEnvironment make_ospp(std::vector<Matrix> option_sets, std::uint64_t seed) {
  if (option_sets.empty()) throw Error(ErrorCode::kInvalidOptions, "no option sets");
  const Eigen::Index rows = option_sets.front().rows();
  const Eigen::Index cols = option_sets.front().cols();
  if (rows < 2 || cols < 1) {
    throw Error(ErrorCode::kInvalidOptions, "options must be (d+1)-vectors with d >= 1");
  }
  for (const auto& set : option_sets) {
    if (set.rows() != rows || set.cols() != cols) {
      throw Error(ErrorCode::kInvalidOptions, "option sets must share a shape");
    }
    if (set.minCoeff() < 0.0 || set.maxCoeff() > 1.0) {
      throw Error(ErrorCode::kInvalidOptions, "option entries must lie in [0,1]");
    }
  }
  const Eigen::Index d = rows - 1;
  Vector mu = Vector::Zero(rows);
  mu[0] = 1.0;
  Matrix w = Matrix::Zero(rows, d);
  w.bottomRows(d).setIdentity();
  return LinearEnvironment(std::move(mu), std::move(w), SlateLaw::discrete(std::move(option_sets)),
                           NoiseLaw{NoiseLaw::Kind::kNone, 0.0}, seed);
}

}  // namespace lincbwk
