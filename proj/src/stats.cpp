#include "lrdustat/stats.hpp"

#include "lrdustat/errors.hpp"

#include <algorithm>

namespace lrdustat {

SampleMoments sample_moments(std::span<const double> x) {
  SampleMoments m;
  m.count = x.size();
  if (x.empty()) return m;
  CompensatedSum s;
  for (double v : x) s += v;
  m.mean = s.value() / static_cast<double>(x.size());
  if (x.size() > 1) {
    CompensatedSum ss;
    for (double v : x) ss += (v - m.mean) * (v - m.mean);
    m.variance = ss.value() / static_cast<double>(x.size() - 1);
    m.std_error = std::sqrt(m.variance / static_cast<double>(x.size()));
  }
  return m;
}

double variance_std_error(std::span<const double> x) {
  const SampleMoments m = sample_moments(x);
  if (x.size() < 4) return 0.0;
  CompensatedSum m4;
  for (double v : x) {
    const double d = v - m.mean;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(x.size());
  const double mu4 = m4.value() / n;
  const double s2 = m.variance;
  return std::sqrt(std::max(0.0, (mu4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n));
}

double quantile_sorted(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  if (!(level >= 0.0 && level <= 1.0)) throw ParameterError("quantile level must lie in [0, 1]");
  const double h = level * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InputError("KS distance needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double sample_autocovariance(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index lag) {
  const Eigen::Index n = x.size();
  if (lag < 0 || lag >= n) throw ParameterError("lag out of range");
  const double mean = x.mean();
  const Eigen::VectorXd c = x.array() - mean;
  return c.head(n - lag).dot(c.tail(n - lag)) / static_cast<double>(n);
}

}  // namespace lrdustat
