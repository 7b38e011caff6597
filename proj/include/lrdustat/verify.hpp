#ifndef LRDUSTAT_VERIFY_HPP
#define LRDUSTAT_VERIFY_HPP

#include "lrdustat/hermite.hpp"
#include "lrdustat/kernel.hpp"
#include "lrdustat/limit_law.hpp"
#include "lrdustat/lrd_sim.hpp"
#include "lrdustat/ustat.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lrdustat {

/// One line of a report: a sample size and named summary numbers.
struct ReportRow {
  Eigen::Index n = 0;
  std::vector<std::pair<std::string, double>> columns;

  double get(const std::string& key) const;
  void set(const std::string& key, double value);
};

struct ExperimentReport {
  std::string name;
  /// Resolved parameters as key/value strings, in insertion order.
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<ReportRow> rows;
  /// Overall verdict against `tolerance`; empty when the experiment has none.
  std::optional<bool> pass;
  std::string tolerance;
  std::vector<std::uint64_t> seeds;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> warnings;
  /// Extra scalar results that do not belong to a single n.
  std::vector<std::pair<std::string, double>> summary;

  const ReportRow& row(Eigen::Index n) const;
  double summary_value(const std::string& key) const;
};

/// Var(sum_{i<=n} H_k(xi_i)) = k! sum_{i,j} gamma(|i-j|)^k, summed by lag.
double exact_hermite_sum_variance(int k, const Eigen::VectorXd& gamma, Eigen::Index n);

/// sum over all integer lags of gamma(d)^k for a summable power (D k > 1),
/// with the tail beyond the tabulated lags replaced by its power-law integral.
double short_range_constant(int k, const LrdParams& params, Eigen::Index lags = Eigen::Index{1} << 20);

/// Exact and Monte Carlo variance of Hermite partial sums against the
/// asymptote c_k n^{2-Dk} L^k (D k < 1) or k! C n (D k > 1).
/// Requires reps >= 100; D k = 1 is rejected.
ExperimentReport check_variance(int k, const LrdParams& params, const std::vector<Eigen::Index>& n_list,
                                Eigen::Index reps, std::uint64_t seed);

/// Mean over replications of sup_k |U(k) - k(n-k) a00 - P_m(k)| / (d'_n n),
/// where P_m is the degree-m Hermite projection of the U-process.
ExperimentReport check_reduction(const Kernel& h, const LrdParams& params,
                                 const std::vector<Eigen::Index>& n_list, Eigen::Index reps,
                                 std::uint64_t seed);

/// Projection of the U-process onto the degree-m Hermite terms:
/// sum_{a+b=m} a_ab/(a! b!) (sum_{i<=k} H_a(xi_i)) (sum_{j>k} H_b(xi_j)), k = 1..n-1.
Eigen::VectorXd hermite_projection_path(const Eigen::Ref<const Eigen::VectorXd>& xi,
                                        const std::vector<CoeffEntry>& coeffs);

struct SupSampleOptions {
  Normalization normalization = Normalization::Thm1;
  /// Transform applied to the Gaussian path before the kernel (identity when empty).
  std::optional<Subordinator> subordinator;
  /// Kernel mean subtracted before normalizing; a00 of the coefficient table when empty.
  std::optional<double> center;
  /// Hermite rank used for the scaling; the kernel rank when empty.
  std::optional<int> rank;
};

/// sup_k |normalized U(k)| for `reps` datasets; dataset r draws from seed ^ r.
std::vector<double> sup_statistics(const Kernel& h, const LrdParams& params, Eigen::Index n,
                                   Eigen::Index reps, std::uint64_t seed,
                                   const SupSampleOptions& options = {});

/// KS distance between simulated sup statistics and the sup of `limit`.
/// The limit must be a functional with the same D as `params`.
ExperimentReport check_weak_convergence(const Kernel& h, const LrdParams& params, Eigen::Index n,
                                        Eigen::Index reps, const LimitEnsemble& limit,
                                        std::uint64_t seed, double tolerance = 0.1,
                                        const SupSampleOptions& options = {});

}  // namespace lrdustat

#endif  // LRDUSTAT_VERIFY_HPP
