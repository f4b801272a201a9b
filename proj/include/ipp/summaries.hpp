#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ipp/geometry.hpp"

namespace ipp {

enum class Stat { Pcf, K, F, G, J };

std::string stat_name(Stat s);
Stat stat_from_name(const std::string& name);

struct SummaryMeta {
  std::string estimator;
  std::string edge_correction;
  double bandwidth = 0.0;  // pcf only
};

struct SummaryFunction {
  Stat stat = Stat::Pcf;
  std::vector<double> r_grid;
  std::vector<double> values;
  SummaryMeta meta;
  // pointwise simulation envelopes, when present
  std::vector<double> lo, hi;
  double level = 0.0;
  int n_sim = 0;

  bool has_envelopes() const { return !lo.empty(); }
};

std::vector<double> make_r_grid(double r_max, int n);

// Translation-corrected kernel estimator of the pair correlation function
// (Epanechnikov kernel; Stoyan's rule h = 0.15/sqrt(rho_hat) by default).
SummaryFunction estimate_pcf(const PointPattern& p, const std::vector<double>& r_grid,
                             std::optional<double> bandwidth = std::nullopt);

// Translation-corrected empirical K-function.
SummaryFunction estimate_K(const PointPattern& p, const std::vector<double>& r_grid);

// Model-implied K from a pair correlation curve:
// K(r) = d * omega_d * int_0^r t^{d-1} g(t) dt (adaptive Simpson).
SummaryFunction model_K(const std::function<double(double)>& g,
                        const std::vector<double>& r_grid, int d);

struct FgjEstimates {
  SummaryFunction F, G, J;
};

// Border-corrected F (empty space, regular test grid) and G (nearest
// neighbour); J = (1-G)/(1-F), NaN once F reaches 1.
FgjEstimates estimate_FGJ(const PointPattern& p, const std::vector<double>& r_grid,
                          int f_grid_resolution = 128);

// Pointwise rank envelopes from n_sim simulated patterns. The generator must
// be pure in its index so simulations can run in parallel.
SummaryFunction envelopes(const PointPattern& observed,
                          const std::function<PointPattern(int)>& simulate_pattern,
                          Stat stat, const std::vector<double>& r_grid, int n_sim = 99,
                          double level = 0.95);

// Single-stat dispatch used by `envelopes` and the CLI.
SummaryFunction estimate_stat(Stat stat, const PointPattern& p,
                              const std::vector<double>& r_grid);

namespace kernels {

// Pairwise accumulation kernels behind estimate_pcf / estimate_K. The serial
// versions are the reference implementations; the omp versions are the ones
// used by default. Tested against each other and timed in bench/.
std::vector<double> pcf_accumulate_serial(const PointPattern& p,
                                          const std::vector<double>& r_grid, double h);
std::vector<double> pcf_accumulate_omp(const PointPattern& p,
                                       const std::vector<double>& r_grid, double h);
std::vector<double> k_accumulate_serial(const PointPattern& p,
                                        const std::vector<double>& r_grid);
std::vector<double> k_accumulate_omp(const PointPattern& p,
                                     const std::vector<double>& r_grid);

}  // namespace kernels

}  // namespace ipp
