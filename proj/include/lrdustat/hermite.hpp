#ifndef LRDUSTAT_HERMITE_HPP
#define LRDUSTAT_HERMITE_HPP

#include "lrdustat/kernel.hpp"
#include "lrdustat/lrd_sim.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace lrdustat {

/// Probabilists' Hermite polynomial H_k(x) by the three-term recurrence
/// H_{k+1} = x H_k - k H_{k-1}.
template <typename Scalar>
  requires(!std::is_base_of_v<Eigen::DenseBase<Scalar>, Scalar>)
Scalar hermite_eval(int k, const Scalar& x) {
  if (k <= 0) return Scalar(1);
  Scalar prev(1);
  Scalar cur = x;
  for (int j = 1; j < k; ++j) {
    Scalar next = x * cur - Scalar(j) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// H_0(x)..H_kmax(x) written into `out`.
template <typename Scalar>
void hermite_all(int kmax, const Scalar& x, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& out) {
  out.resize(kmax + 1);
  out[0] = Scalar(1);
  if (kmax >= 1) out[1] = x;
  for (int j = 1; j < kmax; ++j) out[j + 1] = x * out[j] - Scalar(j) * out[j - 1];
}

/// Applies H_k elementwise.
Eigen::ArrayXd hermite_eval(int k, const Eigen::Ref<const Eigen::ArrayXd>& x);

enum class CoeffSource { Quadrature, ClosedForm, MonteCarlo };
std::string to_string(CoeffSource source);

/// Hermite coefficients a_{kl} = E[h(xi, eta) H_k(xi) H_l(eta)] for k + l <= Q.
struct HermiteCoeffTable {
  int max_total_degree = 0;
  /// (Q+1) x (Q+1); entries with k + l > Q are NaN.
  Eigen::MatrixXd entries;
  /// Monte Carlo standard errors, same layout (MonteCarlo source only).
  Eigen::MatrixXd std_errors;
  int quadrature_order = 0;
  CoeffSource source = CoeffSource::Quadrature;
  double tolerance = 0.0;
  /// Rank under `tolerance`, empty when no coefficient exceeds it.
  std::optional<int> rank;
  /// Quadrature estimate of E[h^2] (0 when unknown).
  double second_moment = 0.0;
  std::string kernel_name;
  std::vector<std::string> warnings;

  double a00() const { return entries(0, 0); }
  double operator()(int k, int l) const { return entries(k, l); }
  /// sqrt(E[h^2] - a00^2): the factor that would normalize the centered kernel.
  double normalizing_factor() const;
};

inline constexpr int kDefaultQuadOrder = 200;

/// Tensor Gauss-Hermite coefficients. tol <= 0 selects the default
/// 1e-8 * sqrt(1 + E[h^2]). Discontinuous kernels get a warning attached.
HermiteCoeffTable coeffs_2d(const Kernel& h, int Q, int quad_order = kDefaultQuadOrder,
                            double tol = 0.0);

/// Coefficients from the kernel's closed-form provider.
HermiteCoeffTable coeffs_closed_form(const Kernel& h, int Q, double tol = 1e-12);

/// Monte Carlo coefficients from `pairs` independent normal pairs.
/// tol <= 0 selects 5 times the largest standard error.
HermiteCoeffTable coeffs_monte_carlo(const Kernel& h, int Q, std::int64_t pairs,
                                     std::uint64_t seed, double tol = 0.0);

/// Closed-form source when available, otherwise quadrature; Discontinuous
/// kernels without a closed form fall back to Monte Carlo with 10^6 pairs.
HermiteCoeffTable coeffs_auto(const Kernel& h, int Q, std::uint64_t seed = 1);

/// Hermite coefficients of 1{x <= y}:
/// (-1)^{(l+3k-1)/2} Gamma((l+k)/2) / (2 pi) for k + l odd, 0 for k + l even
/// and positive, 1/2 for k = l = 0.
double wilcoxon_coeff_closed_form(int k, int l);

/// Smallest k + l >= 1 with |a_{kl}| > tol; throws RankNotFound otherwise.
int rank_2d(const HermiteCoeffTable& table, double tol);

/// Coefficients of the class {1{G(xi) <= x} - F(x)} on an x-grid.
struct ClassCoeffs {
  Eigen::VectorXd grid;
  /// Row k-1 holds J_k on the grid, k = 1..k_max.
  Eigen::MatrixXd values;
  int rank = 0;
  double tolerance = 0.0;

  int k_max() const { return static_cast<int>(values.rows()); }
  Eigen::VectorXd J(int k) const { return values.row(k - 1).transpose(); }
  /// J_k at x by linear interpolation on the grid (0 outside).
  double interpolate(int k, double x) const;
};

/// J_k(x) = E[1{G(xi) <= x} H_k(xi)] by adaptive quadrature over the
/// sublevel set of a monotone G. Throws RankNotFound if every J_k vanishes.
ClassCoeffs class_coeffs(const Subordinator& g, int k_max, const Eigen::VectorXd& grid,
                         double tol = 1e-10);

/// Grid covering the support of G(xi) up to +/- 8.5 standard-normal units.
Eigen::VectorXd default_class_grid(const Subordinator& g, Eigen::Index points = 8001);

/// E[J_k(G(xi))] = int J_k dF, by Gauss-Hermite over xi and grid interpolation.
double class_integral_dF(const ClassCoeffs& cc, const Subordinator& g, int k);

enum class SummabilityClass { ConvergentLikely, DivergentLikely, Inconclusive };
std::string to_string(SummabilityClass c);

struct SummabilityReport {
  std::vector<int> Q_list;
  /// S(Q) = sum_{1 <= k+l <= Q} |a_{kl}| / sqrt(k! l!).
  std::vector<double> partial_sums;
  /// Increment per unit of log Q between consecutive entries of Q_list.
  std::vector<double> log_slopes;
  SummabilityClass classification = SummabilityClass::Inconclusive;
};

using CoeffProvider = std::function<double(int, int)>;

/// Partial sums of the summability series and an advisory classification:
/// geometric decay of the log-slopes suggests convergence, a stable slope
/// (harmonic terms, S(Q) ~ c log Q) suggests divergence.
SummabilityReport summability_diagnostic(const CoeffProvider& provider, std::vector<int> Q_list);

CoeffProvider provider_from_table(const HermiteCoeffTable& table);

struct ScalingConstants {
  double D = 0.0;
  int m = 1;
  double n = 0.0;
  double c_m = 0.0;
  double d_n = 0.0;
  double d_n_prime = 0.0;
  double H = 0.0;
  double K_const = 0.0;
};

/// c_m = 2 m! / ((1 - Dm)(2 - Dm)), d'_n = sqrt(n^{2-mD} L^m), d_n = sqrt(c_m) d'_n,
/// H = 1 - Dm/2, K = 2 Gamma(D) cos(D pi / 2). Requires mD < 1.
ScalingConstants scaling(double D, int m, double n, double L_at_n);

/// c_m alone (also defined for m = 0 as 1).
double hermite_variance_constant(double D, int m);

/// 2 Gamma(D) cos(D pi / 2).
double spectral_constant(double D);

}  // namespace lrdustat

#endif  // LRDUSTAT_HERMITE_HPP
