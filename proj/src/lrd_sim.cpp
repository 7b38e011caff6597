#include "lrdustat/lrd_sim.hpp"

#include "lrdustat/errors.hpp"
#include "lrdustat/quadrature.hpp"
#include "lrdustat/special.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lrdustat {

std::string to_string(CovarianceFamily family) {
  switch (family) {
    case CovarianceFamily::FGN:
      return "fgn";
    case CovarianceFamily::TweakedPowerLaw:
      return "tweaked";
  }
  return "unknown";
}

CovarianceFamily parse_family(const std::string& name) {
  if (name == "fgn" || name == "FGN") return CovarianceFamily::FGN;
  if (name == "tweaked" || name == "tweaked-power-law" || name == "TweakedPowerLaw") {
    return CovarianceFamily::TweakedPowerLaw;
  }
  throw ParameterError("unknown covariance family '" + name + "' (expected fgn or tweaked)");
}

void LrdParams::validate() const {
  if (!(D > 0.0 && D < 1.0)) {
    std::ostringstream msg;
    msg << "LRD exponent D must lie in the open interval (0,1); got " << D;
    throw ParameterError(msg.str());
  }
}

namespace {

// gamma(k) of fractional Gaussian noise, written through expm1/log1p so the
// second difference of k^{2H} does not cancel catastrophically at large lags.
double fgn_covariance(double hurst, Eigen::Index lag) {
  if (lag == 0) return 1.0;
  const double two_h = 2.0 * hurst;
  if (lag == 1) return 0.5 * (std::pow(2.0, two_h) - 2.0);
  const double k = static_cast<double>(lag);
  const double up = std::expm1(two_h * std::log1p(1.0 / k));
  const double down = std::expm1(two_h * std::log1p(-1.0 / k));
  return 0.5 * std::pow(k, two_h) * (up + down);
}

}  // namespace

Eigen::VectorXd fgn_autocovariance(double hurst, Eigen::Index max_lag) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError("Hurst index must lie in (0,1)");
  if (max_lag < 0) throw ParameterError("max_lag must be >= 0");
  Eigen::VectorXd gamma(max_lag + 1);
  for (Eigen::Index k = 0; k <= max_lag; ++k) gamma[k] = fgn_covariance(hurst, k);
  return gamma;
}

Eigen::VectorXd build_covariance(const LrdParams& params, Eigen::Index max_lag) {
  params.validate();
  if (max_lag < 0) throw ParameterError("max_lag must be >= 0");
  if (params.family == CovarianceFamily::FGN) return fgn_autocovariance(params.hurst(), max_lag);
  Eigen::VectorXd gamma(max_lag + 1);
  for (Eigen::Index k = 0; k <= max_lag; ++k) {
    gamma[k] = (k == 0) ? 1.0 : std::pow(1.0 + static_cast<double>(k), -params.D);
  }
  return gamma;
}

double asymptotic_L(const LrdParams& params, double n) {
  params.validate();
  switch (params.family) {
    case CovarianceFamily::FGN: {
      const double h = params.hurst();
      return h * (2.0 * h - 1.0);
    }
    case CovarianceFamily::TweakedPowerLaw:
      return std::pow(n / (1.0 + n), params.D);
  }
  return 1.0;
}

CirculantEmbedding::CirculantEmbedding(std::span<const double> covariance, std::string label) {
  if (covariance.size() < 2) throw ParameterError("circulant embedding needs gamma(0..N) with N >= 1");
  half_size_ = static_cast<Eigen::Index>(covariance.size()) - 1;
  const Eigen::Index m = 2 * half_size_;
  std::vector<std::complex<double>> row(static_cast<std::size_t>(m));
  for (Eigen::Index j = 0; j <= half_size_; ++j) row[static_cast<std::size_t>(j)] = covariance[j];
  for (Eigen::Index j = 1; j < half_size_; ++j) {
    row[static_cast<std::size_t>(m - j)] = covariance[static_cast<std::size_t>(j)];
  }
  std::vector<std::complex<double>> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, row);

  double max_eig = 0.0;
  min_eigenvalue_ = spectrum[0].real();
  for (const auto& z : spectrum) {
    max_eig = std::max(max_eig, z.real());
    min_eigenvalue_ = std::min(min_eigenvalue_, z.real());
  }
  if (min_eigenvalue_ < -kEmbedTolerance * max_eig) {
    std::ostringstream msg;
    msg << "circulant embedding of model '" << label << "' for length " << half_size_ + 1
        << " is not nonnegative definite (min eigenvalue " << min_eigenvalue_ << ", max "
        << max_eig << ")";
    throw NonEmbeddableError(msg.str());
  }
  scale_.resize(static_cast<std::size_t>(m));
  std::size_t clipped = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    double lambda = spectrum[static_cast<std::size_t>(j)].real();
    if (lambda < 0.0) {
      lambda = 0.0;
      ++clipped;
    }
    scale_[static_cast<std::size_t>(j)] = std::sqrt(lambda / static_cast<double>(m));
  }
  if (clipped > 0) {
    std::ostringstream msg;
    msg << "clipped " << clipped << " slightly negative embedding eigenvalue(s) of model '"
        << label << "' (min " << min_eigenvalue_ << ")";
    warnings_.push_back(msg.str());
  }
}

CirculantEmbedding CirculantEmbedding::for_model(const LrdParams& params, Eigen::Index n) {
  params.validate();
  Eigen::Index half = 1;
  while (half < n - 1) half *= 2;
  const Eigen::VectorXd gamma = build_covariance(params, half);
  std::ostringstream label;
  label << to_string(params.family) << "(D=" << params.D << ")";
  return CirculantEmbedding(std::span<const double>(gamma.data(), static_cast<std::size_t>(gamma.size())),
                            label.str());
}

void CirculantEmbedding::sample_pair(Eigen::Index n, Rng& rng, Eigen::VectorXd& first,
                                     Eigen::VectorXd* second) const {
  if (n < 0 || n > max_length()) throw ParameterError("requested length exceeds the embedding");
  thread_local Eigen::FFT<double> fft;
  const std::size_t m = scale_.size();
  std::vector<std::complex<double>> noise(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double re = rng.normal();
    const double im = rng.normal();
    noise[j] = std::complex<double>(re * scale_[j], im * scale_[j]);
  }
  std::vector<std::complex<double>> out;
  fft.fwd(out, noise);
  first.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) first[i] = out[static_cast<std::size_t>(i)].real();
  if (second != nullptr) {
    second->resize(n);
    for (Eigen::Index i = 0; i < n; ++i) (*second)[i] = out[static_cast<std::size_t>(i)].imag();
  }
}

GaussianPath simulate_gaussian(const LrdParams& params, Eigen::Index n, std::uint64_t seed) {
  params.validate();
  if (n < 2) throw ParameterError("path length n must be >= 2");
  const CirculantEmbedding embedding = CirculantEmbedding::for_model(params, n);
  Rng rng(seed);
  GaussianPath path;
  path.values = embedding.sample(n, rng);
  path.params = params;
  path.seed = seed;
  path.warnings = embedding.warnings();
  return path;
}

TargetDistribution TargetDistribution::standard_exponential() {
  return {"exponential", [](double s) { return -std::log(normal_sf(s)); },
          [](double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }};
}

TargetDistribution TargetDistribution::uniform01() {
  return {"uniform", [](double s) { return normal_cdf(s); },
          [](double x) { return std::clamp(x, 0.0, 1.0); }};
}

TargetDistribution TargetDistribution::pareto(double alpha) {
  if (!(alpha > 1.0)) throw ParameterError("Pareto tail index must exceed 1");
  std::ostringstream name;
  name << "pareto(" << alpha << ")";
  return {name.str(), [alpha](double s) { return std::pow(normal_sf(s), -1.0 / alpha); },
          [alpha](double x) { return x <= 1.0 ? 0.0 : 1.0 - std::pow(x, -alpha); }};
}

namespace {
constexpr int kCenteringNodes = 200;
constexpr double kSearchBound = 40.0;
}  // namespace

void Subordinator::finalize_center(bool clamp_tails) {
  const GaussHermiteRule& rule = gauss_hermite(kCenteringNodes);
  if (clamp_tails) {
    center_ = rule.expectation([&](double s) { return raw_(std::clamp(s, table_lo_, table_hi_)); });
  } else {
    center_ = rule.expectation(raw_);
  }
}

Subordinator Subordinator::identity() {
  Subordinator g;
  g.kind_ = Kind::Identity;
  g.name_ = "identity";
  g.raw_ = [](double x) { return x; };
  g.center_ = 0.0;
  g.monotonicity_ = Monotonicity::Increasing;
  return g;
}

Subordinator Subordinator::quantile_transform(TargetDistribution target) {
  Subordinator g;
  g.kind_ = Kind::QuantileTransform;
  g.name_ = "quantile:" + target.name;
  g.raw_ = target.from_normal;
  g.monotonicity_ = Monotonicity::Increasing;
  g.finalize_center(false);
  return g;
}

Subordinator Subordinator::tabulated(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ParameterError("tabulated transform needs matching xs/ys with at least two points");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw ParameterError("tabulated xs must be strictly increasing");
  }
  bool up = false;
  bool down = false;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    if (ys[i] > ys[i - 1]) up = true;
    if (ys[i] < ys[i - 1]) down = true;
  }
  Subordinator g;
  g.kind_ = Kind::Tabulated;
  g.name_ = "tabulated";
  g.monotonicity_ = (up && down) ? Monotonicity::None
                    : down       ? Monotonicity::Decreasing
                                 : Monotonicity::Increasing;
  g.table_lo_ = xs.front();
  g.table_hi_ = xs.back();
  g.raw_ = [xs = std::move(xs), ys = std::move(ys)](double x) {
    if (!(x >= xs.front() && x <= xs.back())) {
      std::ostringstream msg;
      msg << "tabulated transform evaluated at " << x << " outside [" << xs.front() << ", "
          << xs.back() << "]";
      throw ExtrapolationError(msg.str());
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return ys.back();
    const auto hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ys[lo] + t * (ys[hi] - ys[lo]);
  };
  g.finalize_center(true);
  return g;
}

double Subordinator::threshold(double x) const {
  if (monotonicity_ == Monotonicity::None) {
    throw UnsupportedError("class coefficients require a monotone transform; '" + name_ +
                           "' is not monotone");
  }
  if (kind_ == Kind::Identity) return x;
  double lo = (kind_ == Kind::Tabulated) ? table_lo_ : -kSearchBound;
  double hi = (kind_ == Kind::Tabulated) ? table_hi_ : kSearchBound;
  const bool increasing = monotonicity_ == Monotonicity::Increasing;
  const double inf = std::numeric_limits<double>::infinity();
  // below(s) == true iff G(s) <= x; for increasing G it holds on a left ray.
  auto below = [&](double s) { return (*this)(s) <= x; };
  if (increasing) {
    if (!below(lo)) return -inf;
    if (below(hi)) return inf;
  } else {
    if (!below(hi)) return inf;
    if (below(lo)) return -inf;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (below(mid) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::pair<double, double> Subordinator::domain() const {
  if (kind_ == Kind::Tabulated) return {table_lo_, table_hi_};
  const double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf};
}

double Subordinator::cdf(double x) const {
  const double t = threshold(x);
  return monotonicity_ == Monotonicity::Increasing ? normal_cdf(t) : normal_sf(t);
}

Eigen::VectorXd subordinate(const Eigen::Ref<const Eigen::VectorXd>& path, const Subordinator& g) {
  if (g.kind() == Subordinator::Kind::Identity) return path;
  Eigen::VectorXd out(path.size());
  for (Eigen::Index i = 0; i < path.size(); ++i) out[i] = g(path[i]);
  return out;
}

}  // namespace lrdustat
