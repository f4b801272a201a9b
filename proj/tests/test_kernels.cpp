#include <doctest.h>

#include "ipp/base_process.hpp"
#include "ipp/rng.hpp"
#include "ipp/summaries.hpp"

using namespace ipp;

TEST_CASE("OMP kernels agree with the serial reference") {
  for (int i = 0; i < 5; ++i) {
    const auto p = simulate(BaseProcessModel::poisson(400.0), Window::unit_square(),
                            derive_seed(71, i));
    const auto grid = make_r_grid(0.2, 64);
    const double h = 0.15 / std::sqrt(static_cast<double>(p.size()));
    const auto gs = kernels::pcf_accumulate_serial(p, grid, h);
    const auto go = kernels::pcf_accumulate_omp(p, grid, h);
    const auto ks = kernels::k_accumulate_serial(p, grid);
    const auto ko = kernels::k_accumulate_omp(p, grid);
    REQUIRE(gs.size() == go.size());
    REQUIRE(ks.size() == ko.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      CHECK(gs[j] == doctest::Approx(go[j]).epsilon(1e-12));
      CHECK(ks[j] == doctest::Approx(ko[j]).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernels are deterministic across repeated calls") {
  const auto p = simulate(BaseProcessModel::poisson(300.0), Window::unit_square(), 81);
  const auto grid = make_r_grid(0.25, 32);
  const auto a = kernels::k_accumulate_omp(p, grid);
  const auto b = kernels::k_accumulate_omp(p, grid);
  CHECK(a == b);
}

TEST_CASE("kernels handle tiny patterns") {
  PointPattern p(Window::unit_square());
  const auto grid = make_r_grid(0.2, 8);
  CHECK(kernels::k_accumulate_serial(p, grid) == kernels::k_accumulate_omp(p, grid));
  p.points.push_back({0.5, 0.5, 0});
  CHECK(kernels::pcf_accumulate_serial(p, grid, 0.01) ==
        kernels::pcf_accumulate_omp(p, grid, 0.01));
}
