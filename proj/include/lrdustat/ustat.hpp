#ifndef LRDUSTAT_USTAT_HPP
#define LRDUSTAT_USTAT_HPP

#include "lrdustat/hermite.hpp"
#include "lrdustat/kernel.hpp"

#include <Eigen/Dense>

#include <string>

namespace lrdustat {

enum class Normalization {
  None,
  Thm1,  // divide by d'_n * n
  Thm2,  // divide by d_n * n
};

std::string to_string(Normalization mode);
Normalization parse_normalization(const std::string& name);

/// U(k) = sum_{i <= k} sum_{j > k} h(X_i, X_j) for the splits k = 1..n-1.
///
/// The process U_n(lambda) is piecewise constant with jumps at k/n:
/// at(lambda) uses k = floor(lambda n), and k = 0 or k = n give 0.
struct UStatPath {
  /// Un-normalized values, index k-1 holds U(k).
  Eigen::VectorXd raw;
  /// Values after centering and normalization (equal to raw when None).
  Eigen::VectorXd values;
  Eigen::Index n = 0;
  std::string kernel_name;
  Normalization normalization = Normalization::None;
  /// Constant subtracted from the kernel before normalization.
  double centering = 0.0;
  /// Divisor applied to the centered values (1 when None).
  double divisor = 1.0;

  Eigen::Index splits() const { return raw.size(); }
  double at(double lambda) const;
};

/// Direct double sum per split, O(n^3). Reference oracle.
UStatPath ustat_naive(const Eigen::Ref<const Eigen::VectorXd>& data, const Kernel& h);

/// Running update U(k+1) = U(k) - sum_{i<=k} h(X_i, X_{k+1}) + sum_{j>k+1} h(X_{k+1}, X_j)
/// with compensated accumulation. O(n^2).
UStatPath ustat_incremental(const Eigen::Ref<const Eigen::VectorXd>& data, const Kernel& h);

/// U(k) = (n-k) S_k - k (S_n - S_k) from prefix sums, times `sign`. O(n).
UStatPath ustat_cusum(const Eigen::Ref<const Eigen::VectorXd>& data, int sign = 1);

/// Exact integer Wilcoxon path sum 1{X_i <= X_j} in O(n log n) with a
/// Fenwick tree over the coordinate-compressed prefix.
UStatPath ustat_wilcoxon(const Eigen::Ref<const Eigen::VectorXd>& data);

/// Picks the fast path from the kernel tags, otherwise the incremental one.
UStatPath ustat_compute(const Eigen::Ref<const Eigen::VectorXd>& data, const Kernel& h);

/// Subtracts k(n-k) * center and divides by n d'_n (Thm1) or n d_n (Thm2).
/// A path can be normalized once; a second call throws StateError.
UStatPath normalize(const UStatPath& path, const ScalingConstants& sc, Normalization mode,
                    double center);

struct ChangePoint {
  double statistic = 0.0;
  /// Split index attaining max_k |U(k)|; the first index wins ties.
  Eigen::Index k_star = 1;
};

ChangePoint changepoint_statistic(const UStatPath& path);
ChangePoint changepoint_statistic(const Eigen::Ref<const Eigen::VectorXd>& values);

}  // namespace lrdustat

#endif  // LRDUSTAT_USTAT_HPP
