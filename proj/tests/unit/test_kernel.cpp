#include <doctest.h>

#include "lrdustat/errors.hpp"
#include "lrdustat/kernel.hpp"

#include <cmath>
#include <string>

using namespace lrdustat;

namespace {

bool has_warning(const TvProbe& p, const std::string& tag) {
  for (const auto& w : p.warnings) {
    if (w.rfind(tag, 0) == 0) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("named kernels evaluate as defined") {
    CHECK(kernels::cusum()(3.0, 1.0) == 2.0);
    CHECK(kernels::cusum(-1)(3.0, 1.0) == -2.0);
    CHECK(kernels::wilcoxon()(1.0, 1.0) == 1.0);
    CHECK(kernels::wilcoxon()(1.5, 1.0) == 0.0);
    CHECK(kernels::wilcoxon_complement()(1.5, 1.0) == 1.0);
    CHECK(kernels::gaussian_bump()(1.0, 0.5) == doctest::Approx(std::exp(-1.25)));
    CHECK(kernels::huber(1.0)(5.0, 0.0) == 1.0);
    CHECK(kernels::huber(1.0)(0.25, 0.0) == 0.25);
    CHECK(kernels::tukey_biweight(2.0)(3.0, 0.0) == 0.0);
    CHECK(kernels::tukey_biweight(2.0)(1.0, 0.0) == doctest::Approx(1.0 * 0.75 * 0.75));
    CHECK(kernels::hermite_product(2, 1)(2.0, 3.0) == doctest::Approx(3.0 * 3.0));
    CHECK(kernels::scaled(kernels::wilcoxon(), 2.0)(0.0, 1.0) == 2.0);
  }

  TEST_CASE("specs resolve to kernels and reject garbage") {
    CHECK(kernels::from_spec("cusum").has(KernelTag::FastCusum));
    CHECK(kernels::from_spec("cusum:flip").sign == -1);
    CHECK(kernels::from_spec("wilcoxon").has(KernelTag::FastWilcoxon));
    CHECK(kernels::from_spec("huber:2").name == "huber:2");
    CHECK(kernels::from_spec("tukey").name == "tukey:4.685");
    CHECK(kernels::from_spec("hermite:2,1")(2.0, 3.0) == doctest::Approx(9.0));
    CHECK_THROWS_AS(kernels::from_spec("huber:abc"), ParameterError);
    CHECK_THROWS_AS(kernels::from_spec("nope"), ParameterError);
    CHECK_THROWS_AS(kernels::huber(-1.0), ParameterError);
  }

  TEST_CASE("robust scores must be bounded") {
    CHECK_THROWS_AS(kernels::robust_score("identity", [](double t) { return t; }), ParameterError);
    CHECK_NOTHROW(kernels::robust_score("tanh", [](double t) { return std::tanh(t); }));
  }

  TEST_CASE("Wilcoxon complement coefficients mirror the Wilcoxon ones") {
    const Kernel w = kernels::wilcoxon();
    const Kernel c = kernels::wilcoxon_complement();
    CHECK(c.coeff_provider(0, 0) == doctest::Approx(0.5));
    CHECK(c.coeff_provider(2, 1) == doctest::Approx(-w.coeff_provider(2, 1)));
  }

  TEST_CASE("total-variation probe") {
    const TvProbe cusum = probe_total_variation(kernels::cusum());
    CHECK_FALSE(cusum.bounded_likely);
    CHECK(has_warning(cusum, "tv-unbounded"));
    const TvProbe wil = probe_total_variation(kernels::wilcoxon());
    CHECK(wil.bounded_likely);
    CHECK(wil.max_tv_first == doctest::Approx(1.0));
    CHECK(wil.warnings.empty());
    const TvProbe hub = probe_total_variation(kernels::huber(1.0));
    CHECK(hub.max_tv_second == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(hub.warnings.empty());
    const TvProbe tukey = probe_total_variation(kernels::tukey_biweight(4.685));
    CHECK(tukey.bounded_likely);
    CHECK(tukey.warnings.empty());
    Kernel lying = kernels::scaled(kernels::wilcoxon(), 3.0);
    lying.tv_bound = 1.0;
    CHECK(has_warning(probe_total_variation(lying), "tv-bound-exceeded"));
  }
}
