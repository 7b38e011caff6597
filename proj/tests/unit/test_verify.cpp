#include <doctest.h>

#include "lrdustat/errors.hpp"
#include "lrdustat/stats.hpp"
#include "lrdustat/verify.hpp"

#include <cmath>

using namespace lrdustat;

TEST_SUITE("verify") {
  TEST_CASE("exact variance by the lag double sum") {
    const LrdParams tweaked{0.5, CovarianceFamily::TweakedPowerLaw};
    const Eigen::VectorXd g = build_covariance(tweaked, 3);
    // 3 + 2 (2 gamma(1) + gamma(2)) with gamma(1) = 2^{-1/2}, gamma(2) = 3^{-1/2}
    const double oracle = 3.0 + 2.0 * (2.0 / std::sqrt(2.0) + 1.0 / std::sqrt(3.0));
    CHECK(exact_hermite_sum_variance(1, g, 3) == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(exact_hermite_sum_variance(1, g, 3) == doctest::Approx(6.98313).epsilon(1e-6));
    CHECK(exact_hermite_sum_variance(2, g, 1) == 2.0);
  }

  TEST_CASE("variance report: long-range branch") {
    const auto r = check_variance(1, {0.4, CovarianceFamily::FGN}, {256, 1024}, 200, 3);
    CHECK(r.pass.value());
    CHECK(r.row(1024).get("ratio") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.summary_value("mc_consistent") == 1.0);
    CHECK_THROWS_AS(check_variance(1, {0.4, CovarianceFamily::FGN}, {16}, 50, 3), ParameterError);
    CHECK_THROWS_AS(check_variance(2, {0.5, CovarianceFamily::FGN}, {16}, 100, 3), ParameterError);
  }

  TEST_CASE("variance report is reproducible") {
    const auto a = check_variance(2, {0.3, CovarianceFamily::TweakedPowerLaw}, {64}, 100, 8);
    const auto b = check_variance(2, {0.3, CovarianceFamily::TweakedPowerLaw}, {64}, 100, 8);
    CHECK(a.rows[0].columns == b.rows[0].columns);
  }

  TEST_CASE("short-range constant sums the covariance powers") {
    const LrdParams p{0.5, CovarianceFamily::TweakedPowerLaw};
    // 1 + 2 sum_{d>=1} (1+d)^{-1.5} = 1 + 2 (zeta(1.5) - 1)
    CHECK(short_range_constant(3, p) == doctest::Approx(1.0 + 2.0 * (2.612375348685488 - 1.0)).epsilon(1e-6));
  }

  TEST_CASE("reduction discrepancy vanishes for a finite Hermite kernel") {
    const auto r = check_reduction(kernels::hermite_difference(), {0.4, CovarianceFamily::FGN}, {100, 400}, 5, 2);
    for (const auto& row : r.rows) CHECK(row.get("mean_discrepancy") <= 1e-10);
    CHECK_THROWS_AS(check_reduction(kernels::gaussian_bump(), {0.4, CovarianceFamily::FGN}, {100}, 0, 2),
                    ParameterError);
    CHECK_THROWS_AS(check_reduction(kernels::zero(), {0.4, CovarianceFamily::FGN}, {100}, 2, 2), RankNotFound);
  }

  TEST_CASE("projection path by prefix sums") {
    Eigen::VectorXd xi(3);
    xi << 1.0, -2.0, 0.5;
    const Eigen::VectorXd p = hermite_projection_path(xi, {{1, 0, 1.0}, {0, 1, -1.0}});
    // k = 1: (n - k) xi_1 - k (xi_2 + xi_3)
    CHECK(p[0] == doctest::Approx(2.0 * 1.0 - 1.0 * (-1.5)));
    CHECK(p[1] == doctest::Approx(1.0 * (-1.0) - 2.0 * 0.5));
  }

  TEST_CASE("weak convergence against the matching and a mismatched limit") {
    const LrdParams p{0.4, CovarianceFamily::FGN};
    const Eigen::VectorXd grid = uniform_grid(64);
    const LimitEnsemble b = simulate_fbm(0.8, grid, 300, 77);
    const LimitEnsemble limit = limit_thm1({{1, 0, 1.0}, {0, 1, -1.0}}, 0.4, {b}, "cusum");
    const auto report = check_weak_convergence(kernels::cusum(), p, 500, 300, limit, 1);
    CHECK(report.summary_value("ks_distance") < 0.15);
    CHECK_THROWS_AS(check_weak_convergence(kernels::cusum(), p, 500, 10, b, 1), ParameterError);
    const LimitEnsemble other = limit_thm1({{1, 0, 1.0}, {0, 1, -1.0}}, 0.3, {b});
    CHECK_THROWS_AS(check_weak_convergence(kernels::cusum(), p, 500, 10, other, 1), ParameterError);
    const Eigen::VectorXd s = limit.sup_abs();
    CHECK(ks_two_sample({s.data(), s.data() + s.size()}, {s.data(), s.data() + s.size()}) == 0.0);
  }
}
