#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ipp/covariance.hpp"
#include "ipp/geometry.hpp"

namespace ipp {

// Zero-mean stationary field with covariance K0(r) = variance * R0(r).
struct FieldSpec {
  double variance = 1.0;  // kappa
  CorrelationModel correlation;

  FieldSpec() = default;
  FieldSpec(double kappa, CorrelationModel corr);

  double covariance(double r) const { return variance * eval_correlation(correlation, r); }
};

// Raster of values on a regular grid over a window. Row-major with the x
// index fastest, then y, then z.
struct GridField {
  Window window;
  std::array<int, 3> resolution{2, 2, 1};
  std::vector<double> values;

  GridField() = default;
  GridField(Window w, std::array<int, 3> res);

  std::size_t node_count() const;
  Point node(std::size_t flat_index) const;
  std::vector<Point> nodes() const;
};

// One exact joint draw of the field at the given locations (symmetric
// factorization of the covariance matrix with a diagonal jitter ladder).
std::vector<double> sample_at_points(const FieldSpec& spec,
                                     const std::vector<Point>& locations, int dim,
                                     std::uint64_t seed);

// Stationary draw on a raster: dense factorization for small grids,
// circulant embedding (FFT) beyond, falling back to dense factorization when
// the embedding is not nonnegative definite.
GridField sample_grid(const FieldSpec& spec, const Window& window,
                      std::array<int, 3> resolution, std::uint64_t seed);

// Conditional draw on the raster given exact field values at locations
// (unconditional draw plus a simple-kriging correction of the residuals).
GridField condition_on_values(const FieldSpec& spec,
                              const std::vector<Point>& locations,
                              const std::vector<double>& values, const Window& window,
                              std::array<int, 3> resolution, std::uint64_t seed);

}  // namespace ipp
