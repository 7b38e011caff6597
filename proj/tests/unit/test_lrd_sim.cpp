#include <doctest.h>

#include "lrdustat/errors.hpp"
#include "lrdustat/lrd_sim.hpp"
#include "lrdustat/special.hpp"
#include "lrdustat/stats.hpp"

#include <cmath>
#include <string>
#include <vector>

using namespace lrdustat;

namespace {

// Direct FGN covariance in long double, independent of the library formula.
double fgn_oracle(double H, int k) {
  const long double h2 = 2.0L * H;
  const long double kk = k;
  return static_cast<double>(0.5L * (std::pow(kk + 1.0L, h2) - 2.0L * std::pow(kk, h2) +
                                     std::pow(std::abs(kk - 1.0L), h2)));
}

}  // namespace

TEST_SUITE("lrd_sim") {
  TEST_CASE("FGN covariance matches the increment formula") {
    const LrdParams p{0.4, CovarianceFamily::FGN};
    const Eigen::VectorXd g = build_covariance(p, 2000);
    CHECK(g[0] == 1.0);
    // gamma(1) = (2^{1.6} - 2) / 2
    CHECK(g[1] == doctest::Approx((std::pow(2.0, 1.6) - 2.0) / 2.0).epsilon(1e-14));
    for (int k : {2, 3, 10, 100, 1999}) CHECK(g[k] == doctest::Approx(fgn_oracle(0.8, k)).epsilon(1e-9));
    // asymptotically H(2H-1) k^{-D}
    CHECK(g[2000] / std::pow(2000.0, -0.4) == doctest::Approx(asymptotic_L(p, 2000)).epsilon(1e-3));
    CHECK(asymptotic_L(p, 10) == doctest::Approx(0.8 * 0.6));
  }

  TEST_CASE("white noise at H = 1/2") {
    const Eigen::VectorXd g = fgn_autocovariance(0.5, 10);
    CHECK(g[0] == 1.0);
    for (int k = 1; k <= 10; ++k) CHECK(std::abs(g[k]) < 1e-15);
  }

  TEST_CASE("tweaked power law") {
    const LrdParams p{0.5, CovarianceFamily::TweakedPowerLaw};
    const Eigen::VectorXd g = build_covariance(p, 3);
    CHECK(g[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(g[2] == doctest::Approx(1.0 / std::sqrt(3.0)));
    CHECK(asymptotic_L(p, 3) == doctest::Approx(std::sqrt(0.75)));
  }

  TEST_CASE("parameter validation names the open interval") {
    for (double D : {0.0, 1.0, 1.5, -0.2}) {
      try {
        LrdParams{D, CovarianceFamily::FGN}.validate();
        FAIL("expected ParameterError");
      } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("(0,1)") != std::string::npos);
      }
    }
    CHECK_THROWS_AS(parse_family("arfima"), ParameterError);
    CHECK(parse_family("tweaked") == CovarianceFamily::TweakedPowerLaw);
  }

  TEST_CASE("embedding rejects indefinite covariances") {
    std::vector<double> bad{1.0, 1.5, 1.0};
    CHECK_THROWS_AS(CirculantEmbedding(bad, "bad"), NonEmbeddableError);
  }

  TEST_CASE("simulation is deterministic in the seed") {
    const LrdParams p{0.4, CovarianceFamily::FGN};
    const auto a = simulate_gaussian(p, 1000, 11);
    const auto b = simulate_gaussian(p, 1000, 11);
    const auto c = simulate_gaussian(p, 1000, 12);
    CHECK(a.values == b.values);
    CHECK(a.values != c.values);
    CHECK_THROWS_AS(simulate_gaussian(p, 1, 1), ParameterError);
  }

  TEST_CASE("sampled lag products match the model covariance within 4 standard errors") {
    for (auto family : {CovarianceFamily::FGN, CovarianceFamily::TweakedPowerLaw}) {
      const LrdParams p{0.3, family};
      const Eigen::Index n = 50;
      const CirculantEmbedding emb = CirculantEmbedding::for_model(p, n);
      const Eigen::VectorXd gamma = build_covariance(p, n);
      const int reps = 20000;
      std::vector<std::vector<double>> prods(4);
      const int lags[4] = {0, 1, 7, 40};
      for (int r = 0; r < reps; ++r) {
        Rng rng = Rng::for_replication(99, static_cast<std::uint64_t>(r));
        Eigen::VectorXd a, b;
        emb.sample_pair(n, rng, a, &b);
        for (int j = 0; j < 4; ++j) {
          prods[j].push_back(a[3] * a[3 + lags[j]]);
          prods[j].push_back(b[5] * b[5 + lags[j]]);
        }
      }
      for (int j = 0; j < 4; ++j) {
        const auto m = sample_moments(prods[j]);
        CHECK(std::abs(m.mean - gamma[lags[j]]) < 4.0 * m.std_error);
      }
    }
  }

  TEST_CASE("exponential quantile transform is centered") {
    const Subordinator g = Subordinator::quantile_transform(TargetDistribution::standard_exponential());
    // raw value at 0 is -log(1/2) and the exponential mean is 1
    CHECK(g.center() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g(0.0) == doctest::Approx(std::log(2.0) - 1.0).epsilon(1e-12));
    CHECK(g.cdf(g(0.7)) == doctest::Approx(normal_cdf(0.7)).epsilon(1e-10));
    CHECK(std::isfinite(g(38.0)));
  }

  TEST_CASE("tabulated transforms refuse to extrapolate") {
    const Subordinator g = Subordinator::tabulated({-3, 0, 3}, {-1, 0, 2});
    CHECK(g.monotonicity() == Subordinator::Monotonicity::Increasing);
    CHECK_THROWS_AS(g(3.5), ExtrapolationError);
    const Subordinator v = Subordinator::tabulated({-1, 0, 1}, {1, 0, 1});
    CHECK_THROWS_AS(v.threshold(0.5), UnsupportedError);
  }

  TEST_CASE("Pareto needs a finite mean") {
    CHECK_THROWS_AS(TargetDistribution::pareto(1.0), ParameterError);
    const Subordinator g = Subordinator::quantile_transform(TargetDistribution::pareto(3.0));
    CHECK(g.center() == doctest::Approx(1.5).epsilon(1e-3));
  }
}
