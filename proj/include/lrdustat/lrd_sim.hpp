#ifndef LRDUSTAT_LRD_SIM_HPP
#define LRDUSTAT_LRD_SIM_HPP

#include "lrdustat/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lrdustat {

/// Autocovariance families with gamma(k) = L(k) k^{-D}.
///
/// FGN: fractional Gaussian noise with Hurst index H = 1 - D/2; gamma(k) is
/// asymptotically H(2H-1) k^{-D}.
/// TweakedPowerLaw: gamma(k) = (1+k)^{-D} for k >= 1, so L(k) = (k/(1+k))^D.
/// Neither family is singled out by the theory; both are modelling choices.
enum class CovarianceFamily { FGN, TweakedPowerLaw };

std::string to_string(CovarianceFamily family);
CovarianceFamily parse_family(const std::string& name);

struct LrdParams {
  double D = 0.4;
  CovarianceFamily family = CovarianceFamily::FGN;

  double hurst() const { return 1.0 - D / 2.0; }
  /// Throws ParameterError unless 0 < D < 1.
  void validate() const;
};

/// Autocovariance of unit-variance fractional Gaussian noise for any Hurst
/// index in (0, 1); H = 1/2 gives white noise.
Eigen::VectorXd fgn_autocovariance(double hurst, Eigen::Index max_lag);

/// gamma(0..max_lag) of the model; gamma(0) = 1.
Eigen::VectorXd build_covariance(const LrdParams& params, Eigen::Index max_lag);

/// Slowly varying factor L(n) used in the normalizations: H(2H-1) for FGN,
/// (n/(1+n))^D for the tweaked power law.
double asymptotic_L(const LrdParams& params, double n);

/// Circulant embedding of a stationary covariance sequence gamma(0..N) into a
/// circulant matrix of size 2N. Eigenvalues are computed once; every call to
/// sample() then costs one FFT of size 2N.
class CirculantEmbedding {
 public:
  /// Relative tolerance below which negative eigenvalues are clipped.
  static constexpr double kEmbedTolerance = 1e-10;

  /// `covariance` holds gamma(0..N), N >= 1. `label` names the model in errors.
  explicit CirculantEmbedding(std::span<const double> covariance, std::string label = "custom");

  /// Embedding for paths of length n from an LRD model; N is the next power
  /// of two >= n - 1.
  static CirculantEmbedding for_model(const LrdParams& params, Eigen::Index n);

  Eigen::Index max_length() const { return half_size_ + 1; }
  Eigen::Index embedding_size() const { return 2 * half_size_; }
  double min_eigenvalue() const { return min_eigenvalue_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Draws two independent exact samples (real and imaginary parts) of
  /// length n <= max_length(). `second` may be null.
  void sample_pair(Eigen::Index n, Rng& rng, Eigen::VectorXd& first,
                   Eigen::VectorXd* second) const;

  Eigen::VectorXd sample(Eigen::Index n, Rng& rng) const {
    Eigen::VectorXd out;
    sample_pair(n, rng, out, nullptr);
    return out;
  }

 private:

  Eigen::Index half_size_ = 0;
  std::vector<double> scale_;  // sqrt(lambda_j / M)
  double min_eigenvalue_ = 0.0;
  std::vector<std::string> warnings_;
};

struct GaussianPath {
  Eigen::VectorXd values;
  LrdParams params;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
};

/// Exact stationary Gaussian sample of length n >= 2 with the model covariance.
/// Deterministic in (params, n, seed).
GaussianPath simulate_gaussian(const LrdParams& params, Eigen::Index n, std::uint64_t seed);

/// Continuous target distributions reachable from a standard normal by
/// x -> Q(Phi(x)).
struct TargetDistribution {
  std::string name;
  /// Q(Phi(s)) evaluated in a tail-stable way.
  std::function<double(double)> from_normal;
  /// Distribution function of the target (before centering).
  std::function<double(double)> cdf;

  static TargetDistribution standard_exponential();
  static TargetDistribution uniform01();
  /// Pareto with scale 1 and tail index alpha (> 1 so the mean exists).
  static TargetDistribution pareto(double alpha);
};

/// A transform G applied to the Gaussian path, centered so that E[G(xi)] = 0.
/// The centering constant is the 200-node Gauss-Hermite estimate of the
/// uncentered mean.
class Subordinator {
 public:
  enum class Kind { Identity, QuantileTransform, Tabulated };
  enum class Monotonicity { Increasing, Decreasing, None };

  static Subordinator identity();
  static Subordinator quantile_transform(TargetDistribution target);
  /// Linear interpolation through (xs[i], ys[i]); xs strictly increasing.
  /// Evaluation outside [xs.front(), xs.back()] throws ExtrapolationError;
  /// the centering integral holds the edge values constant in the tails.
  static Subordinator tabulated(std::vector<double> xs, std::vector<double> ys);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double center() const { return center_; }
  Monotonicity monotonicity() const { return monotonicity_; }

  /// Centered value G(x).
  double operator()(double x) const { return raw_(x) - center_; }

  /// For monotone G: the threshold t with {s : G(s) <= x} = (-inf, t] when
  /// increasing or [t, inf) when decreasing. +/-inf when the set is everything
  /// or empty. Throws UnsupportedError for non-monotone G.
  double threshold(double x) const;

  /// Interval of standard-normal arguments on which G can be evaluated.
  std::pair<double, double> domain() const;

  /// Distribution function F of G(xi) (centered).
  double cdf(double x) const;

 private:
  Subordinator() = default;
  void finalize_center(bool clamp_tails);

  Kind kind_ = Kind::Identity;
  std::string name_;
  std::function<double(double)> raw_;
  double center_ = 0.0;
  Monotonicity monotonicity_ = Monotonicity::Increasing;
  double table_lo_ = 0.0;
  double table_hi_ = 0.0;
};

/// X_i = G(xi_i) elementwise.
Eigen::VectorXd subordinate(const Eigen::Ref<const Eigen::VectorXd>& path, const Subordinator& g);

}  // namespace lrdustat

#endif  // LRDUSTAT_LRD_SIM_HPP
