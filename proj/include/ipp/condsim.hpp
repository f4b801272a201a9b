#pragma once

// Conditional reconstruction of the selection field given the retained and
// deleted points of a chi-squared (k = 1) interrupted process.  The latent
// Gaussian values at the data points are sampled by Metropolis-within-Gibbs
// and each draw is extended to a grid by conditional simulation.

#include <cstdint>
#include <vector>

#include "ipp/gaussian_field.hpp"
#include "ipp/geometry.hpp"
#include "ipp/selection.hpp"

namespace ipp {

struct McmcSettings {
  int retained_draws = 1000;
  int burn_in = -1;  // sweeps; -1 means 10 * (number of data points)
  int thin = 10;     // sweeps between retained draws
  std::uint64_t seed = 0;
};

// Negative log density (up to a constant) of the latent vector z given the
// retention pattern: the first n_retained coordinates belong to retained
// points (where exp(-z^2/2) >= U) and the rest to deleted points.
class LatentEnergy {
 public:
  LatentEnergy(const FieldSpec& field, const std::vector<Point>& locations,
               std::size_t n_retained, int dim);

  double energy(const std::vector<double>& z) const;
  // Energy change if coordinate i moves to value zi; pz must hold P*z for the
  // current state (P the precision matrix) and is updated on acceptance.
  double delta(const std::vector<double>& z, const std::vector<double>& pz,
               std::size_t i, double zi) const;

  std::size_t size() const { return n_; }
  std::size_t n_retained() const { return n_ret_; }
  double variance() const { return variance_; }
  std::vector<double> precision_times(const std::vector<double>& z) const;
  double precision(std::size_t i, std::size_t j) const;

 private:
  std::size_t n_, n_ret_;
  double variance_;
  std::vector<double> precision_;  // row-major n x n
};

struct LatentDraws {
  std::vector<std::vector<double>> draws;  // retained_draws x n
  double acceptance_rate = 0.0;
};

LatentDraws gibbs_sample_latent(const LatentEnergy& energy, const McmcSettings& settings);

// Posterior mean of the selection field Pi = exp(-Z^2/2) on a grid, given the
// retained/deleted classification of the base points.
GridField conditional_pi_field(const SelectionModel& selection, const ThinnedPair& data,
                               std::array<int, 3> resolution,
                               const McmcSettings& settings);

}  // namespace ipp
