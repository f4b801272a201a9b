#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ipp/covariance.hpp"

using namespace ipp;

TEST_CASE("correlation closed forms") {
  const CorrelationModel gauss(CorrelationFamily::Gaussian, 0.1);
  CHECK(eval_correlation(gauss, 0.0) == doctest::Approx(1.0));
  CHECK(eval_correlation(gauss, 0.1) == doctest::Approx(std::exp(-1.0)));
  CHECK(eval_correlation(gauss, 0.2) == doctest::Approx(std::exp(-4.0)));

  const CorrelationModel expo(CorrelationFamily::Exponential, 0.1);
  CHECK(eval_correlation(expo, 0.0) == doctest::Approx(1.0));
  CHECK(eval_correlation(expo, 0.25) == doctest::Approx(std::exp(-2.5)));
}

TEST_CASE("Whittle-Matern nu = 1/2 reduces to the exponential") {
  const CorrelationModel wm(CorrelationFamily::WhittleMatern, 0.07, 0.5);
  const CorrelationModel expo(CorrelationFamily::Exponential, 0.07);
  for (double r : {0.01, 0.05, 0.1, 0.3})
    CHECK(eval_correlation(wm, r) ==
          doctest::Approx(eval_correlation(expo, r)).epsilon(1e-10));
  CHECK(eval_correlation(wm, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("spectral density closed forms match quadrature") {
  for (int d = 1; d <= 3; ++d) {
    const DppKernel g(80.0, CorrelationModel(CorrelationFamily::Gaussian, 0.05));
    const DppKernel e(50.0, CorrelationModel(CorrelationFamily::Exponential, 0.04));
    const DppKernel w(50.0, CorrelationModel(CorrelationFamily::WhittleMatern, 0.04, 1.5));
    for (double x : {0.0, 1.0, 5.0, 20.0}) {
      CHECK(spectral_density(g, x, d) ==
            doctest::Approx(spectral_density_quadrature(g, x, d)).epsilon(1e-6));
      CHECK(spectral_density(e, x, d) ==
            doctest::Approx(spectral_density_quadrature(e, x, d)).epsilon(1e-6));
      CHECK(spectral_density(w, x, d) ==
            doctest::Approx(spectral_density_quadrature(w, x, d)).epsilon(1e-6));
    }
  }
}

TEST_CASE("Gaussian spectral density peaks at the origin") {
  const DppKernel k(1000.0, CorrelationModel(CorrelationFamily::Gaussian, 0.015));
  // phi0(0) = rho * (sqrt(pi) * alpha)^d
  const double expect = 1000.0 * std::pow(std::sqrt(std::numbers::pi) * 0.015, 2);
  CHECK(spectral_density(k, 0.0, 2) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(spectral_density(k, 10.0, 2) < spectral_density(k, 0.0, 2));
}

TEST_CASE("DPP existence boundary, Gaussian kernel in d = 2") {
  const CorrelationModel corr(CorrelationFamily::Gaussian, 0.015);
  const double rho_max = 1.0 / (std::numbers::pi * 0.015 * 0.015);  // ~1414.7
  const auto ok = check_dpp_existence(DppKernel(1000.0, corr), 2);
  CHECK(ok.admissible);
  CHECK(ok.max_intensity == doctest::Approx(rho_max).epsilon(1e-6));
  const auto bad = check_dpp_existence(DppKernel(1500.0, corr), 2);
  CHECK(!bad.admissible);
}

TEST_CASE("family names round-trip") {
  for (auto f : {CorrelationFamily::Gaussian, CorrelationFamily::WhittleMatern,
                 CorrelationFamily::Exponential})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS(family_from_name("cauchy"));
}

TEST_CASE("invalid correlation parameters rejected") {
  CHECK_THROWS(CorrelationModel(CorrelationFamily::Gaussian, 0.0));
  CHECK_THROWS(CorrelationModel(CorrelationFamily::WhittleMatern, 0.1, -1.0));
}
