#include <doctest.h>

#include "lrdustat/errors.hpp"
#include "lrdustat/hermite.hpp"
#include "lrdustat/quadrature.hpp"
#include "lrdustat/special.hpp"

#include <cmath>

using namespace lrdustat;

namespace {

// a_{kl} of 1{x <= y} by nested adaptive integration of the defining double integral.
double wilcoxon_oracle(int k, int l) {
  auto inner = [k](double y) {
    return integrate_adaptive([k](double x) { return hermite_eval(k, x) * normal_pdf(x); }, -12.0, y,
                              1e-14, 1e-13)
        .value;
  };
  return integrate_adaptive([&](double y) { return hermite_eval(l, y) * normal_pdf(y) * inner(y); },
                            -12.0, 12.0, 1e-13, 1e-12)
      .value;
}

}  // namespace

TEST_SUITE("hermite") {
  TEST_CASE("polynomial values") {
    CHECK(hermite_eval(0, 3.0) == 1.0);
    CHECK(hermite_eval(1, 3.0) == 3.0);
    CHECK(hermite_eval(3, 2.0) == doctest::Approx(2.0));
    CHECK(hermite_eval(4, 1.5) == doctest::Approx(1.5 * 1.5 * 1.5 * 1.5 - 6 * 2.25 + 3));
    Eigen::ArrayXd x(2);
    x << 1.5, -1.0;
    const Eigen::ArrayXd h = hermite_eval(2, x);
    CHECK(h[0] == doctest::Approx(1.25));
    CHECK(h[1] == doctest::Approx(0.0));
  }

  TEST_CASE("orthogonality under the normal weight") {
    const auto& rule = gauss_hermite(60);
    for (int k = 0; k <= 8; ++k) {
      for (int l = 0; l <= 8; ++l) {
        const double e = rule.expectation([&](double s) { return hermite_eval(k, s) * hermite_eval(l, s); });
        CHECK(e == doctest::Approx(k == l ? factorial(k) : 0.0).epsilon(1e-10).scale(1.0));
      }
    }
  }

  TEST_CASE("CUSUM coefficients by quadrature") {
    const auto t = coeffs_2d(kernels::cusum(), 4);
    CHECK(t(1, 0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(t(0, 1) == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(std::abs(t(1, 1)) < 1e-10);
    CHECK(std::abs(t(2, 0)) < 1e-10);
    CHECK(std::abs(t.a00()) < 1e-12);
    CHECK(t.rank == 1);
    const auto flip = coeffs_2d(kernels::cusum(-1), 2);
    CHECK(flip(1, 0) == doctest::Approx(-1.0).epsilon(1e-8));
  }

  TEST_CASE("Wilcoxon closed form against nested integration") {
    CHECK(wilcoxon_coeff_closed_form(0, 0) == 0.5);
    CHECK(wilcoxon_coeff_closed_form(1, 0) == doctest::Approx(-1.0 / (2.0 * std::sqrt(kPi))).epsilon(1e-15));
    CHECK(wilcoxon_coeff_closed_form(1, 0) == doctest::Approx(-0.2820948).epsilon(1e-7));
    CHECK(wilcoxon_coeff_closed_form(2, 1) == doctest::Approx(-0.1410474).epsilon(1e-6));
    CHECK(wilcoxon_coeff_closed_form(1, 1) == 0.0);
    for (auto [k, l] : {std::pair{1, 0}, {0, 1}, {2, 1}, {1, 2}, {3, 0}, {0, 3}, {3, 2}, {4, 1}, {2, 2}}) {
      CHECK(wilcoxon_coeff_closed_form(k, l) == doctest::Approx(wilcoxon_oracle(k, l)).epsilon(1e-9).scale(1.0));
    }
  }

  TEST_CASE("Monte Carlo coefficients agree with the closed form") {
    const auto t = coeffs_monte_carlo(kernels::wilcoxon(), 3, 400000, 5);
    for (auto [k, l] : {std::pair{1, 0}, {0, 1}, {2, 1}}) {
      CHECK(std::abs(t(k, l) - wilcoxon_coeff_closed_form(k, l)) < 4.0 * t.std_errors(k, l));
    }
  }

  TEST_CASE("ranks") {
    CHECK(coeffs_auto(kernels::wilcoxon(), 6).rank == 1);
    const auto bump = coeffs_2d(kernels::gaussian_bump(), 6);
    CHECK(bump.rank == 2);
    // E[exp(-x^2)] = 1/sqrt(3), E[exp(-x^2)(x^2-1)] = (1/3 - 1)/sqrt(3)
    CHECK(bump(2, 0) == doctest::Approx((1.0 / 3.0 - 1.0) / 3.0).epsilon(1e-12));
    CHECK(bump.a00() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(coeffs_2d(kernels::hermite_product(2, 3), 6).rank == 5);
    CHECK_THROWS_AS(rank_2d(coeffs_2d(kernels::constant(2.0), 4), 1e-10), RankNotFound);
    CHECK_THROWS_AS(rank_2d(coeffs_2d(kernels::hermite_product(3, 3), 4), 1e-10), RankNotFound);
  }

  TEST_CASE("summability separates CUSUM and Wilcoxon") {
    const auto cusum = summability_diagnostic(kernels::cusum().coeff_provider, {8, 16, 32});
    for (double s : cusum.partial_sums) CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(cusum.classification == SummabilityClass::ConvergentLikely);
    const auto wil = summability_diagnostic(kernels::wilcoxon().coeff_provider, {8, 16, 32});
    CHECK(wil.partial_sums[1] - wil.partial_sums[0] > 0.2);
    CHECK(wil.partial_sums[2] - wil.partial_sums[1] > 0.2);
    CHECK(wil.classification == SummabilityClass::DivergentLikely);
  }

  TEST_CASE("class coefficients of the identity are derivatives of the density") {
    const Subordinator g = Subordinator::identity();
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(161, -8.0, 8.0);
    const ClassCoeffs cc = class_coeffs(g, 3, grid);
    CHECK(cc.rank == 1);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double x = grid[i];
      CHECK(cc.values(0, i) == doctest::Approx(-normal_pdf(x)).epsilon(1e-10).scale(1.0));
      CHECK(cc.values(1, i) == doctest::Approx(-x * normal_pdf(x)).epsilon(1e-10).scale(1.0));
      CHECK(cc.values(2, i) == doctest::Approx(-(x * x - 1) * normal_pdf(x)).epsilon(1e-10).scale(1.0));
    }
    const ClassCoeffs fine = class_coeffs(g, 1, default_class_grid(g));
    CHECK(class_integral_dF(fine, g, 1) == doctest::Approx(-1.0 / (2.0 * std::sqrt(kPi))).epsilon(1e-5));
  }

  TEST_CASE("class coefficients of an increasing transform use its threshold") {
    const Subordinator g = Subordinator::quantile_transform(TargetDistribution::standard_exponential());
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(41, -0.9, 3.0);
    const ClassCoeffs cc = class_coeffs(g, 2, grid);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      // G(s) <= x  iff  s <= Phi^{-1}(1 - exp(-(x + 1)))
      const double t = normal_quantile(-std::expm1(-(grid[i] + 1.0)));
      CHECK(cc.values(0, i) == doctest::Approx(-normal_pdf(t)).epsilon(1e-8).scale(1.0));
    }
  }

  TEST_CASE("scaling constants") {
    const auto sc = scaling(0.4, 1, 1000.0, 0.48);
    CHECK(sc.c_m == doctest::Approx(2.0 / (0.6 * 1.6)));
    CHECK(sc.d_n_prime == doctest::Approx(std::sqrt(std::pow(1000.0, 1.6) * 0.48)));
    CHECK(sc.d_n == doctest::Approx(std::sqrt(sc.c_m) * sc.d_n_prime));
    CHECK(sc.H == doctest::Approx(0.8));
    CHECK(sc.K_const == doctest::Approx(2.0 * std::tgamma(0.4) * std::cos(0.2 * kPi)));
    CHECK(hermite_variance_constant(0.3, 2) == doctest::Approx(4.0 / (0.4 * 1.4)));
    CHECK(hermite_variance_constant(0.3, 0) == 1.0);
    CHECK_THROWS_AS(scaling(0.5, 2, 100.0, 1.0), RegimeError);
    CHECK_THROWS_AS(scaling(0.6, 2, 100.0, 1.0), RegimeError);
  }

  TEST_CASE("discontinuous kernels carry a quadrature warning") {
    const auto t = coeffs_2d(kernels::wilcoxon(), 3);
    CHECK_FALSE(t.warnings.empty());
  }
}
