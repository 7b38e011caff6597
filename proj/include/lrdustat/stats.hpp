#ifndef LRDUSTAT_STATS_HPP
#define LRDUSTAT_STATS_HPP

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

namespace lrdustat {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error = 0.0;  // of the mean
  std::size_t count = 0;
};

SampleMoments sample_moments(std::span<const double> x);

/// Standard error of the sample variance, estimated from the fourth central moment.
double variance_std_error(std::span<const double> x);

/// Empirical quantile with linear interpolation between order statistics
/// (Hyndman-Fan type 7). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double level);

/// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Sample autocovariance at `lag` with the 1/n convention around the sample mean.
double sample_autocovariance(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index lag);

}  // namespace lrdustat

#endif  // LRDUSTAT_STATS_HPP
