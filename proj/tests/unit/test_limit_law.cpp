#include <doctest.h>

#include "lrdustat/errors.hpp"
#include "lrdustat/limit_law.hpp"
#include "lrdustat/special.hpp"
#include "lrdustat/stats.hpp"

#include <cmath>
#include <vector>

using namespace lrdustat;

namespace {

std::vector<double> column(const LimitEnsemble& e, Eigen::Index g) {
  std::vector<double> out(static_cast<std::size_t>(e.reps()));
  for (Eigen::Index r = 0; r < e.reps(); ++r) out[static_cast<std::size_t>(r)] = e.paths(r, g);
  return out;
}

}  // namespace

TEST_SUITE("limit_law") {
  TEST_CASE("fBm has variance lambda^{2H}") {
    const Eigen::VectorXd grid = uniform_grid(4);
    const LimitEnsemble e = simulate_fbm(0.8, grid, 4000, 3);
    CHECK(e.paths.col(0).cwiseAbs().maxCoeff() == 0.0);
    for (Eigen::Index g : {2, 4}) {
      const auto x = column(e, g);
      const double expected = std::pow(grid[g], 1.6);
      CHECK(std::abs(sample_moments(x).variance - expected) < 4.0 * variance_std_error(x));
    }
    // increments over disjoint halves are positively correlated for H > 1/2
    const auto a = column(e, 2);
    const auto b = column(e, 4);
    double cov = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) cov += a[i] * (b[i] - a[i]);
    cov /= static_cast<double>(a.size());
    // Cov(B(1/2), B(1) - B(1/2)) = (1 - 2 * 2^{-1.6}) / 2
    CHECK(cov == doctest::Approx((1.0 - 2.0 * std::pow(0.5, 1.6)) / 2.0).epsilon(0.1));
  }

  TEST_CASE("Brownian motion is accepted, anti-persistent fBm is not") {
    CHECK_NOTHROW(simulate_fbm(0.5, uniform_grid(8), 10, 1));
    CHECK_THROWS_AS(simulate_fbm(0.4, uniform_grid(8), 10, 1), ParameterError);
    CHECK_THROWS_AS(simulate_fbm(1.0, uniform_grid(8), 10, 1), ParameterError);
  }

  TEST_CASE("fBm ensembles are reproducible per replication") {
    const auto a = simulate_fbm(0.7, uniform_grid(16), 20, 9);
    const auto b = simulate_fbm(0.7, uniform_grid(16), 30, 9);
    CHECK(a.paths == b.paths.topRows(20));
  }

  TEST_CASE("Hermite approximation shares one Gaussian path across orders") {
    const Eigen::VectorXd grid = uniform_grid(8);
    const auto joint = simulate_hermite_joint(2, 0.3, grid, 200, 1 << 12, 5);
    REQUIRE(joint.size() == 2);
    CHECK(joint[0].descriptor.m == 1);
    CHECK(joint[1].descriptor.m == 2);
    CHECK(joint[1].paths.col(0).cwiseAbs().maxCoeff() == 0.0);
    // for FGN the first-order normalization is exact: Var Z_1(1) = 1
    const auto z1 = column(joint[0], 8);
    CHECK(std::abs(sample_moments(z1).variance - 1.0) < 4.0 * variance_std_error(z1));
    CHECK(simulate_hermite(2, 0.3, grid, 200, 1 << 12, 5).paths == joint[1].paths);
    CHECK_THROWS_AS(simulate_hermite_joint(2, 0.5, grid, 10, 1 << 12, 1), RegimeError);
    CHECK_THROWS_AS(simulate_hermite_joint(1, 0.5, grid, 10, 1 << 10, 1), ParameterError);
  }

  TEST_CASE("Theorem-1 functional of the Wilcoxon kernel is a scaled bridge") {
    const Eigen::VectorXd grid = uniform_grid(32);
    const LimitEnsemble b = simulate_fbm(0.8, grid, 50, 2);
    const std::vector<CoeffEntry> coeffs{{1, 0, wilcoxon_coeff_closed_form(1, 0)},
                                         {0, 1, wilcoxon_coeff_closed_form(0, 1)}};
    const LimitEnsemble f = limit_thm1(coeffs, 0.4, {b}, "wilcoxon");
    const double scale = std::sqrt(hermite_variance_constant(0.4, 1)) / (2.0 * std::sqrt(kPi));
    for (Eigen::Index r = 0; r < 50; ++r) {
      for (Eigen::Index g = 0; g < grid.size(); ++g) {
        const double expected = scale * (grid[g] * b.paths(r, 32) - b.paths(r, g));
        CHECK(f.paths(r, g) == doctest::Approx(expected).epsilon(1e-12).scale(1.0));
      }
    }
    std::vector<CoeffEntry> doubled = coeffs;
    for (auto& e : doubled) e.a *= 2.0;
    CHECK(limit_thm1(doubled, 0.4, {b}).paths.isApprox(2.0 * f.paths, 1e-14));
    CHECK(limit_thm1({{1, 0, 0.0}, {0, 1, 0.0}}, 0.4, {b}).paths.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("Theorem-1 functional rejects inconsistent input") {
    const LimitEnsemble b = simulate_fbm(0.8, Eigen::VectorXd::LinSpaced(5, 0.0, 0.5), 10, 2);
    CHECK_THROWS_AS(limit_thm1({{1, 0, 1.0}}, 0.4, {b}), ParameterError);
    const LimitEnsemble ok = simulate_fbm(0.8, uniform_grid(4), 10, 2);
    CHECK_THROWS_AS(limit_thm1({{1, 0, 1.0}, {1, 1, 1.0}}, 0.4, {ok}), ParameterError);
    CHECK_THROWS_AS(limit_thm1({{2, 0, 1.0}}, 0.4, {ok}), ParameterError);
  }

  TEST_CASE("Theorem-2 constants for identity subordination") {
    const Subordinator g = Subordinator::identity();
    const ClassCoeffs cc = class_coeffs(g, 2, default_class_grid(g));
    const Thm2Constants cusum = thm2_constants(kernels::cusum(), g, cc);
    CHECK(cusum.A == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(cusum.B == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_FALSE(cusum.warnings.empty());
    const Thm2Constants wil = thm2_constants(kernels::wilcoxon(), g, cc);
    // a jump of h inside a grid cell meets J averaged over the cell, so the
    // error is of the order of the grid spacing (about 2e-3) times |J'|
    const double a = 1.0 / (2.0 * std::sqrt(kPi));
    CHECK(wil.A == doctest::Approx(a).epsilon(5e-4));
    CHECK(wil.B == doctest::Approx(-a).epsilon(5e-4));
    CHECK(h_tilde(kernels::wilcoxon(), g, 0.3) == doctest::Approx(normal_sf(0.3)).epsilon(1e-9));
    CHECK(h_tilde(kernels::cusum(), g, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  }

  TEST_CASE("Theorem-2 CUSUM functional is Z - lambda Z(1)") {
    const Subordinator g = Subordinator::identity();
    const ClassCoeffs cc = class_coeffs(g, 2, default_class_grid(g));
    const Eigen::VectorXd grid = uniform_grid(16);
    const LimitEnsemble z = simulate_fbm(0.8, grid, 20, 4);
    const LimitEnsemble f = limit_thm2(kernels::cusum(), g, cc, z);
    for (Eigen::Index r = 0; r < 20; ++r) {
      for (Eigen::Index j = 0; j < grid.size(); ++j) {
        CHECK(f.paths(r, j) == doctest::Approx(z.paths(r, j) - grid[j] * z.paths(r, 16)).epsilon(1e-5).scale(1.0));
      }
    }
  }

  TEST_CASE("critical values are monotone empirical quantiles") {
    const LimitEnsemble b = simulate_fbm(0.8, uniform_grid(32), 500, 6);
    const std::vector<CoeffEntry> coeffs{{1, 0, 1.0}, {0, 1, -1.0}};
    const LimitEnsemble f = limit_thm1(coeffs, 0.4, {b});
    const CriticalValueTable t = critical_values(f, {0.9, 0.95, 0.99});
    CHECK(t.values[0] < t.values[1]);
    CHECK(t.values[1] < t.values[2]);
    CHECK(t.reps == 500);
    const LimitEnsemble small = simulate_fbm(0.8, uniform_grid(8), 99, 6);
    CHECK_THROWS_AS(critical_values(small, {0.95}), ParameterError);
    CHECK_THROWS_AS(critical_values(f, {1.5}), ParameterError);
  }
}
