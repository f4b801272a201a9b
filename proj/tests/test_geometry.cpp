#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ipp/geometry.hpp"
#include "ipp/numerics.hpp"
#include "ipp/rng.hpp"

using namespace ipp;

TEST_CASE("window volume, containment, dilation") {
  const Window w(2, {0, 0, 0}, {2, 3, 0});
  CHECK(w.volume() == doctest::Approx(6.0));
  CHECK(w.min_side() == doctest::Approx(2.0));
  CHECK(w.contains({0.0, 0.0, 0.0}));
  CHECK(w.contains({2.0, 3.0, 0.0}));
  CHECK(!w.contains({2.0001, 1.0, 0.0}));
  const Window d = w.dilated(0.5);
  CHECK(d.lower[0] == doctest::Approx(-0.5));
  CHECK(d.upper[1] == doctest::Approx(3.5));
  CHECK(d.volume() == doctest::Approx(3.0 * 4.0));
}

TEST_CASE("distance respects the dimension") {
  const Point a{0, 0, 0}, b{3, 4, 12};
  CHECK(distance(a, b, 1) == doctest::Approx(3.0));
  CHECK(distance(a, b, 2) == doctest::Approx(5.0));
  CHECK(distance(a, b, 3) == doctest::Approx(13.0));
}

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
}

TEST_CASE("ball overlap: support and endpoints") {
  const double D = 0.3;
  for (int d = 1; d <= 3; ++d) {
    // full overlap at r = 0, empty at r >= 2D
    CHECK(ball_overlap_volume(0.0, D, d) ==
          doctest::Approx(unit_ball_volume(d) * std::pow(D, d)));
    CHECK(ball_overlap_volume(2.0 * D, D, d) == doctest::Approx(0.0));
    CHECK(ball_overlap_volume(5.0 * D, D, d) == doctest::Approx(0.0));
  }
  // 1-d closed form is exactly 2D - r
  CHECK(ball_overlap_volume(0.2, D, 1) == doctest::Approx(0.4));
}

// Hit-or-miss oracle: sample uniformly in the first ball and count the
// fraction that also lands in the second.
static double overlap_mc(double r, double D, int d, std::uint64_t seed, int n,
                         double* se) {
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(-D, D);
  int hits = 0, inside = 0;
  for (int i = 0; i < n; ++i) {
    Point p{0, 0, 0};
    double n2 = 0.0;
    for (int c = 0; c < d; ++c) {
      p[c] = unif(rng);
      n2 += p[c] * p[c];
    }
    if (n2 > D * D) continue;  // rejection into the ball
    ++inside;
    double m2 = (p[0] - r) * (p[0] - r);
    for (int c = 1; c < d; ++c) m2 += p[c] * p[c];
    if (m2 <= D * D) ++hits;
  }
  const double ball = unit_ball_volume(d) * std::pow(D, d);
  const double phat = static_cast<double>(hits) / inside;
  *se = ball * std::sqrt(phat * (1.0 - phat) / inside);
  return ball * phat;
}

TEST_CASE("ball overlap agrees with hit-or-miss Monte Carlo") {
  auto rng = make_rng(99);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int d = 1 + trial % 3;
    const double D = 0.1 + 0.5 * unif(rng);
    const double r = 2.2 * D * unif(rng);
    double se = 0.0;
    const double mc = overlap_mc(r, D, d, derive_seed(7, trial), 200000, &se);
    const double exact = ball_overlap_volume(r, D, d);
    CHECK(std::abs(exact - mc) < 3.0 * se + 1e-12);
  }
}

TEST_CASE("ball overlap rejects bad arguments") {
  CHECK_THROWS(ball_overlap_volume(-0.1, 0.3, 2));
  CHECK_THROWS(ball_overlap_volume(0.1, -0.3, 2));
  CHECK_THROWS(ball_overlap_volume(0.1, 0.3, 4));
}

TEST_CASE("min pairwise distance") {
  PointPattern p(Window::unit_square());
  p.points = {{0.1, 0.1, 0}, {0.9, 0.9, 0}, {0.1, 0.35, 0}};
  CHECK(min_pairwise_distance(p) == doctest::Approx(0.25));
}

TEST_CASE("adaptive Simpson and Gauss-Legendre on known integrals") {
  const auto f = [](double x) { return std::exp(-x) * std::sin(3.0 * x); };
  // int_0^2 e^{-x} sin(3x) dx = [ -e^{-x}(sin 3x + 3 cos 3x)/10 ]_0^2
  const double exact =
      (3.0 - std::exp(-2.0) * (std::sin(6.0) + 3.0 * std::cos(6.0))) / 10.0;
  CHECK(adaptive_simpson(f, 0.0, 2.0, 1e-10) == doctest::Approx(exact).epsilon(1e-9));
  CHECK(gauss_legendre_64(f, 0.0, 2.0) == doctest::Approx(exact).epsilon(1e-12));
  // polynomial is integrated exactly by Gauss-Legendre
  const auto poly = [](double x) { return 5.0 * x * x * x * x; };
  CHECK(gauss_legendre_64(poly, -1.0, 2.0) == doctest::Approx(33.0).epsilon(1e-13));
}

TEST_CASE("seed derivation is pure and collision-averse") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
}
