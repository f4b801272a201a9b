// Timing comparison of the serial reference kernels against the OpenMP ones.

#include <chrono>
#include <cstdio>
#include <vector>

#include "ipp/base_process.hpp"
#include "ipp/rng.hpp"
#include "ipp/summaries.hpp"

using namespace ipp;
using clk = std::chrono::steady_clock;

namespace {

template <class F>
double time_ms(F&& f, int reps) {
  const auto t0 = clk::now();
  for (int i = 0; i < reps; ++i) f();
  return std::chrono::duration<double, std::milli>(clk::now() - t0).count() / reps;
}

}  // namespace

int main() {
  const auto grid = make_r_grid(0.25, 128);
  std::printf("%8s %10s %12s %12s %8s\n", "points", "kernel", "serial[ms]", "omp[ms]",
              "speedup");
  for (double rho : {500.0, 2000.0, 8000.0}) {
    const auto p = simulate(BaseProcessModel::poisson(rho), Window::unit_square(), 1);
    const double h = 0.15 / std::sqrt(static_cast<double>(p.size()));
    const int reps = rho > 4000 ? 3 : 10;
    const double g_s = time_ms([&] { kernels::pcf_accumulate_serial(p, grid, h); }, reps);
    const double g_o = time_ms([&] { kernels::pcf_accumulate_omp(p, grid, h); }, reps);
    const double k_s = time_ms([&] { kernels::k_accumulate_serial(p, grid); }, reps);
    const double k_o = time_ms([&] { kernels::k_accumulate_omp(p, grid); }, reps);
    std::printf("%8zu %10s %12.3f %12.3f %8.2f\n", p.size(), "pcf", g_s, g_o, g_s / g_o);
    std::printf("%8zu %10s %12.3f %12.3f %8.2f\n", p.size(), "K", k_s, k_o, k_s / k_o);
  }
  return 0;
}
