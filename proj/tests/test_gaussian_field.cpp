#include <doctest.h>

#include <cmath>
#include <vector>

#include "ipp/gaussian_field.hpp"
#include "ipp/rng.hpp"

using namespace ipp;

namespace {

const FieldSpec spec(1.5, CorrelationModel(CorrelationFamily::Gaussian, 0.1));

}  // namespace

TEST_CASE("grid node layout: endpoints and x-fastest order") {
  const Window w(2, {0, 0, 0}, {1, 2, 0});
  const GridField g(w, {3, 5, 1});
  CHECK(g.node_count() == 15);
  const Point first = g.node(0);
  CHECK(first[0] == doctest::Approx(0.0));
  CHECK(first[1] == doctest::Approx(0.0));
  const Point second = g.node(1);  // x moves fastest
  CHECK(second[0] == doctest::Approx(0.5));
  CHECK(second[1] == doctest::Approx(0.0));
  const Point last = g.node(14);
  CHECK(last[0] == doctest::Approx(1.0));
  CHECK(last[1] == doctest::Approx(2.0));
}

TEST_CASE("pointwise sampling has the right first two moments") {
  const std::vector<Point> locs{{0.2, 0.2, 0}, {0.2, 0.27, 0}, {0.8, 0.8, 0}};
  const int n = 20000;
  double mean = 0.0, var = 0.0, cov01 = 0.0, cov02 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = sample_at_points(spec, locs, 2, derive_seed(11, i));
    mean += z[0];
    var += z[0] * z[0];
    cov01 += z[0] * z[1];
    cov02 += z[0] * z[2];
  }
  mean /= n;
  var /= n;
  cov01 /= n;
  cov02 /= n;
  // sd of the variance estimate is kappa*sqrt(2/n) ~ 0.015
  CHECK(std::abs(mean) < 0.03);
  CHECK(var == doctest::Approx(1.5).epsilon(0.05));
  CHECK(cov01 == doctest::Approx(spec.covariance(0.07)).epsilon(0.08));
  CHECK(std::abs(cov02 - spec.covariance(distance({0.2, 0.2, 0}, {0.8, 0.8, 0}, 2))) <
        0.05);
}

TEST_CASE("grid sampling via circulant embedding matches the dense moments") {
  // 96 x 96 forces the FFT path (dense cap is 64 x 64)
  const Window w = Window::unit_square();
  const int res = 96, reps = 300;
  double var = 0.0, covx = 0.0;
  const std::size_t i0 = 40 * 96 + 40;
  for (int i = 0; i < reps; ++i) {
    const GridField g = sample_grid(spec, w, {res, res, 1}, derive_seed(13, i));
    REQUIRE(g.values.size() == static_cast<std::size_t>(res * res));
    var += g.values[i0] * g.values[i0];
    covx += g.values[i0] * g.values[i0 + 3];  // lag 3/(res-1) in x
  }
  var /= reps;
  covx /= reps;
  const double lag = 3.0 / (res - 1);
  CHECK(var == doctest::Approx(1.5).epsilon(0.25));
  CHECK(covx == doctest::Approx(spec.covariance(lag)).epsilon(0.3));
}

TEST_CASE("conditioning reproduces observed values exactly") {
  const Window w = Window::unit_square();
  // observation sites placed on nodes of a 5 x 5 grid
  const std::vector<Point> locs{{0.0, 0.0, 0}, {0.5, 0.25, 0}, {1.0, 0.75, 0}};
  const std::vector<double> vals{0.7, -1.2, 0.4};
  const GridField g = condition_on_values(spec, locs, vals, w, {5, 5, 1}, 77);
  const auto node_index = [&](double x, double y) {
    return static_cast<std::size_t>(std::lround(y * 4) * 5 + std::lround(x * 4));
  };
  CHECK(g.values[node_index(0.0, 0.0)] == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(g.values[node_index(0.5, 0.25)] == doctest::Approx(-1.2).epsilon(1e-8));
  CHECK(g.values[node_index(1.0, 0.75)] == doctest::Approx(0.4).epsilon(1e-8));
}

TEST_CASE("conditioning shrinks variance near observations") {
  // long-range spec so the node one grid step from the site is well inside
  // the correlation range (corr(0.125) ~ 0.84 at scale 0.3)
  const FieldSpec wide(1.5, CorrelationModel(CorrelationFamily::Gaussian, 0.3));
  const Window w = Window::unit_square();
  const std::vector<Point> locs{{0.5, 0.5, 0}};
  const std::vector<double> vals{0.0};
  const int reps = 400;
  double var_near = 0.0, var_far = 0.0;
  for (int i = 0; i < reps; ++i) {
    const GridField g = condition_on_values(wide, locs, vals, w, {9, 9, 1},
                                            derive_seed(21, i));
    const double near = g.values[4 * 9 + 5];  // (0.625, 0.5), one step away
    const double far = g.values[0];           // (0, 0), distance ~0.71
    var_near += near * near;
    var_far += far * far;
  }
  var_near /= reps;
  var_far /= reps;
  CHECK(var_near < 0.5 * var_far);
  CHECK(var_far > 0.5);
}

TEST_CASE("empty observation set falls back to an unconditional draw") {
  const GridField g = condition_on_values(spec, {}, {}, Window::unit_square(),
                                          {4, 4, 1}, 5);
  CHECK(g.values.size() == 16);
}
