#ifndef LRDUSTAT_LIMIT_LAW_HPP
#define LRDUSTAT_LIMIT_LAW_HPP

#include "lrdustat/hermite.hpp"
#include "lrdustat/kernel.hpp"
#include "lrdustat/lrd_sim.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace lrdustat {

struct ProcessDescriptor {
  enum class Kind { FBM, HermiteApprox, Functional };
  Kind kind = Kind::FBM;
  double H = 0.5;
  int m = 1;
  double D = 0.0;
  Eigen::Index n_aux = 0;
  /// Name of the functional (kernel name for limit functionals).
  std::string name;
  /// Names of the component processes a functional was built from.
  std::vector<std::string> components;

  std::string label() const;
};

/// Monte Carlo paths of a limit process on a lambda-grid.
struct LimitEnsemble {
  Eigen::VectorXd grid;
  /// reps x grid.size(); row r is replication r.
  Eigen::MatrixXd paths;
  ProcessDescriptor descriptor;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;

  Eigen::Index reps() const { return paths.rows(); }
  /// sup over the grid of |path| for every replication.
  Eigen::VectorXd sup_abs() const;
};

/// {k / cells : k = 0..cells}.
Eigen::VectorXd uniform_grid(Eigen::Index cells = 256);

/// Fractional Brownian motion with Var B_H(1) = 1 from cumulative sums of
/// exact fractional Gaussian noise at `resolution` points (0 picks a power of
/// two with at least 8 points per grid cell, minimum 2048). H = 1/2 gives
/// Brownian motion and is accepted for negative controls.
LimitEnsemble simulate_fbm(double H, const Eigen::VectorXd& grid, Eigen::Index reps,
                           std::uint64_t seed, Eigen::Index resolution = 0);

/// Hermite processes Z_1..Z_m through the finite-N approximation
/// Z_k(lambda) ~ d_N(k)^{-1} sum_{i <= [lambda N]} H_k(zeta_i), all orders
/// computed from the same auxiliary FGN path per replication.
/// Element k-1 of the result is the ensemble of Z_k.
std::vector<LimitEnsemble> simulate_hermite_joint(int m, double D, const Eigen::VectorXd& grid,
                                                  Eigen::Index reps, Eigen::Index n_aux,
                                                  std::uint64_t seed);

/// Ensemble of Z_m alone (see simulate_hermite_joint).
LimitEnsemble simulate_hermite(int m, double D, const Eigen::VectorXd& grid, Eigen::Index reps,
                               Eigen::Index n_aux, std::uint64_t seed);

inline constexpr Eigen::Index kDefaultAuxLength = Eigen::Index{1} << 15;
inline constexpr Eigen::Index kDefaultReps = 2000;

struct CoeffEntry {
  int k = 0;
  int l = 0;
  double a = 0.0;
};

/// Degree-m entries (k + l = m) of a coefficient table.
std::vector<CoeffEntry> degree_entries(const HermiteCoeffTable& table, int m);

/// Theorem-1 limit: sum_{k+l=m} a_{kl}/(k! l!) sqrt(c_k c_l) Z_k(lambda) (Z_l(1) - Z_l(lambda)),
/// with Z_0(lambda) = lambda and c_0 = 1. `components[k-1]` must hold Z_k on
/// a grid ending at 1, all from shared replications.
LimitEnsemble limit_thm1(const std::vector<CoeffEntry>& coeffs, double D,
                         const std::vector<LimitEnsemble>& components, std::string name = "");

struct Thm2Constants {
  /// int J(x) d h~(x)
  double A = 0.0;
  /// int ( int J(y) d_y h(x, y) ) dF(x)
  double B = 0.0;
  std::vector<std::string> warnings;
};

/// Stieltjes integrals of the Theorem-2 functional with J = J_m on the class grid.
/// A uses the Fubini form int ( int J(x) d_x h(x, y) ) dF(y); both outer
/// integrals run over Gauss-Hermite nodes y = G(s). Riemann-Stieltjes sums use
/// J at cell midpoints times increments of h.
Thm2Constants thm2_constants(const Kernel& h, const Subordinator& g, const ClassCoeffs& cc);

/// h~(x) = E[h(x, G(eta))] by 200-node Gauss-Hermite quadrature, or by
/// adaptive quadrature on [-12, 12] for discontinuous kernels.
double h_tilde(const Kernel& h, const Subordinator& g, double x);

/// Theorem-2 limit -(1-lambda) Z(lambda) A - lambda (Z(1) - Z(lambda)) B with
/// Z = Z_m / m!. `hermite_m` is the ensemble of Z_m (order = class rank).
LimitEnsemble limit_thm2(const Kernel& h, const Subordinator& g, const ClassCoeffs& cc,
                         const LimitEnsemble& hermite_m);

struct CriticalValueTable {
  std::string kernel_name;
  double D = 0.0;
  int m = 1;
  std::vector<double> levels;
  std::vector<double> values;
  Eigen::Index reps = 0;
  Eigen::Index grid_size = 0;
};

inline constexpr Eigen::Index kMinCriticalReps = 100;

/// Empirical quantiles of sup_lambda |path|. Throws if reps < 100.
CriticalValueTable critical_values(const LimitEnsemble& ensemble, const std::vector<double>& levels);

/// Same from an explicit sample of sup statistics.
CriticalValueTable critical_values_from_sample(std::vector<double> sups,
                                               const std::vector<double>& levels,
                                               std::string kernel_name, double D, int m,
                                               Eigen::Index grid_size);

}  // namespace lrdustat

#endif  // LRDUSTAT_LIMIT_LAW_HPP
