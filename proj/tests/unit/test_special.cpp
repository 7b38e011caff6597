#include <doctest.h>

#include "lrdustat/quadrature.hpp"
#include "lrdustat/special.hpp"

#include <cmath>

using namespace lrdustat;

TEST_SUITE("special") {
  TEST_CASE("Lanczos gamma agrees with the C library") {
    for (double x : {0.1, 0.5, 1.0, 1.5, 2.6, 7.25, 17.0, -0.5, -2.3}) {
      CHECK(gamma_lanczos(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    }
    for (double x : {0.3, 4.0, 55.5}) {
      CHECK(log_gamma_lanczos(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    }
  }

  TEST_CASE("factorials are exact for small arguments") {
    CHECK(factorial(0) == 1.0);
    CHECK(factorial(5) == 120.0);
    CHECK(factorial(20) == 2432902008176640000.0);
    CHECK(log_factorial(30) == doctest::Approx(std::lgamma(31.0)).epsilon(1e-14));
  }

  TEST_CASE("normal quantile inverts the cdf") {
    for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1 - 1e-9}) {
      CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
    CHECK(normal_sf(37.0) > 0.0);
    CHECK(normal_sf(8.0) == doctest::Approx(6.220960574271784e-16).epsilon(1e-12));
  }

  TEST_CASE("Gauss-Hermite rule reproduces normal moments") {
    const auto& rule = gauss_hermite(40);
    CHECK(rule.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rule.expectation([](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rule.expectation([](double x) { return std::pow(x, 4); }) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(rule.expectation([](double x) { return std::pow(x, 10); }) == doctest::Approx(945.0).epsilon(1e-12));
    CHECK(std::abs(rule.expectation([](double x) { return std::pow(x, 7); })) < 1e-12);
    // E[cos(x)] = exp(-1/2)
    CHECK(gauss_hermite(200).expectation([](double x) { return std::cos(x); }) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-13));
  }

  TEST_CASE("adaptive Gauss-Kronrod integrates smooth and kinked integrands") {
    const auto r = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(1.0 - std::cos(1.0)).epsilon(1e-14));
    const auto k = integrate_adaptive([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0);
    CHECK(k.value == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-12));
  }
}
