#include <doctest.h>

#include <cmath>

#include "ipp/condsim.hpp"
#include "ipp/gaussian_field.hpp"
#include "ipp/rng.hpp"

using namespace ipp;

namespace {

// Data points so far apart that the latent covariance is numerically diagonal.
std::vector<Point> far_points(int n) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i)
    pts.push_back({static_cast<double>(i), 0.0, 0.0});
  return pts;
}

const FieldSpec kappa_field(2.0, CorrelationModel(CorrelationFamily::Gaussian, 0.05));

}  // namespace

TEST_CASE("energy matches the hand-computed form") {
  const auto pts = far_points(3);
  const LatentEnergy e(kappa_field, pts, 2, 1);  // 2 retained, 1 deleted
  const std::vector<double> z{0.4, -1.1, 0.8};
  const double kappa = 2.0;
  const double quad = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]) / (2.0 * kappa);
  const double expect = 0.5 * z[0] * z[0] + 0.5 * z[1] * z[1] -
                        std::log(1.0 - std::exp(-0.5 * z[2] * z[2])) + quad;
  CHECK(e.energy(z) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("delta agrees with an energy difference (finite check)") {
  const auto pts = far_points(4);
  const LatentEnergy e(kappa_field, pts, 2, 1);
  std::vector<double> z{0.4, -1.1, 0.8, -0.3};
  const auto pz = e.precision_times(z);
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double zi = z[i] + 0.37;
    auto z2 = z;
    z2[i] = zi;
    CHECK(e.delta(z, pz, i, zi) ==
          doctest::Approx(e.energy(z2) - e.energy(z)).epsilon(1e-9));
  }
}

TEST_CASE("exact conditional: marginals are Normal(0, kappa/(1+kappa))") {
  // n_xbar = 0 and Gamma = kappa I: the posterior factorizes exactly
  const auto pts = far_points(6);
  const LatentEnergy e(kappa_field, pts, 6, 1);
  McmcSettings ms;
  ms.retained_draws = 4000;
  ms.thin = 5;
  ms.seed = 13;
  const auto draws = gibbs_sample_latent(e, ms);
  REQUIRE(draws.draws.size() == 4000);
  CHECK(draws.acceptance_rate > 0.2);
  CHECK(draws.acceptance_rate < 0.95);
  double mean = 0.0, var = 0.0;
  for (const auto& z : draws.draws) {
    mean += z[2];
    var += z[2] * z[2];
  }
  mean /= draws.draws.size();
  var /= draws.draws.size();
  const double target = 2.0 / 3.0;  // kappa/(1+kappa)
  CHECK(std::abs(mean) < 0.05);
  CHECK(var == doctest::Approx(target).epsilon(0.08));
}

TEST_CASE("deleted coordinates avoid the Pi = 1 singularity") {
  const auto pts = far_points(5);
  const LatentEnergy e(kappa_field, pts, 0, 1);  // everything deleted
  McmcSettings ms;
  ms.retained_draws = 200;
  ms.burn_in = 100;
  ms.seed = 3;
  const auto draws = gibbs_sample_latent(e, ms);
  for (const auto& z : draws.draws)
    for (double v : z) CHECK(v != 0.0);
}

TEST_CASE("conditional field pushes Pi up at retained and down at deleted points") {
  const auto sel = SelectionModel::chi2_from_q(
      1, 0.5, CorrelationModel(CorrelationFamily::Gaussian, 0.1));
  PointPattern x(Window::unit_square());
  x.points = {{0.25, 0.25, 0}, {0.3, 0.25, 0}, {0.25, 0.3, 0}};
  PointPattern xbar(x.window);
  xbar.points = {{0.75, 0.75, 0}, {0.7, 0.75, 0}, {0.75, 0.7, 0}};
  McmcSettings ms;
  ms.retained_draws = 300;
  ms.thin = 5;
  ms.seed = 17;
  const auto field = conditional_pi_field(sel, ThinnedPair(x, xbar), {17, 17, 1}, ms);
  REQUIRE(field.values.size() == 17 * 17);
  const auto at = [&](int ix, int iy) { return field.values[iy * 17 + ix]; };
  // node (4,4) = (0.25, 0.25) sits in the retained cluster, (12,12) in the deleted one
  CHECK(at(4, 4) > at(12, 12));
  for (double v : field.values) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("conditional simulation is restricted to the k = 1 chi-squared field") {
  const auto boolean = SelectionModel::boolean_from_q(
      0.5, RadiusLaw::deterministic(0.05), false, 2);
  PointPattern x(Window::unit_square());
  x.points = {{0.5, 0.5, 0}};
  CHECK_THROWS(conditional_pi_field(boolean, ThinnedPair(x, PointPattern(x.window)),
                                    {8, 8, 1}, {}));
  const auto chi2k2 = SelectionModel::chi2(
      2, 3.0, CorrelationModel(CorrelationFamily::Gaussian, 0.05));
  CHECK_THROWS(conditional_pi_field(chi2k2, ThinnedPair(x, PointPattern(x.window)),
                                    {8, 8, 1}, {}));
}
