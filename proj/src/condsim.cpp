#include "ipp/condsim.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ipp/rng.hpp"

namespace ipp {

namespace {

double data_term(double z, bool retained) {
  if (retained) return 0.5 * z * z;
  // -log P(deleted | z) = -log(1 - exp(-z^2/2))
  const double a = 0.5 * z * z;
  if (a <= 0.0) return std::numeric_limits<double>::infinity();
  // log(1 - e^{-a}) computed stably for small a
  const double log1me = a < 1e-8 ? std::log(a) : std::log1p(-std::exp(-a));
  return -log1me;
}

}  // namespace

LatentEnergy::LatentEnergy(const FieldSpec& field, const std::vector<Point>& locations,
                           std::size_t n_retained, int dim)
    : n_(locations.size()), n_ret_(n_retained), variance_(field.variance) {
  if (n_retained > n_) throw std::invalid_argument("LatentEnergy: n_retained > n");
  if (n_ == 0) throw std::invalid_argument("LatentEnergy: no locations");
  Eigen::MatrixXd gamma(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = field.covariance(distance(locations[i], locations[j], dim));
      gamma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
      gamma(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
    }
  gamma.diagonal().array() += 1e-10 * field.variance;
  const Eigen::MatrixXd prec =
      gamma.ldlt().solve(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n_),
                                                   static_cast<Eigen::Index>(n_)));
  precision_.resize(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      precision_[i * n_ + j] =
          0.5 * (prec(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                 prec(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
}

double LatentEnergy::precision(std::size_t i, std::size_t j) const {
  return precision_[i * n_ + j];
}

std::vector<double> LatentEnergy::precision_times(const std::vector<double>& z) const {
  std::vector<double> out(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    const double* row = precision_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) s += row[j] * z[j];
    out[i] = s;
  }
  return out;
}

double LatentEnergy::energy(const std::vector<double>& z) const {
  if (z.size() != n_) throw std::invalid_argument("energy: size mismatch");
  double u = 0.0;
  for (std::size_t i = 0; i < n_; ++i) u += data_term(z[i], i < n_ret_);
  const auto pz = precision_times(z);
  double quad = 0.0;
  for (std::size_t i = 0; i < n_; ++i) quad += z[i] * pz[i];
  return u + 0.5 * quad;
}

double LatentEnergy::delta(const std::vector<double>& z, const std::vector<double>& pz,
                           std::size_t i, double zi) const {
  const double d = zi - z[i];
  const double dq = d * pz[i] + 0.5 * d * d * precision(i, i);
  return data_term(zi, i < n_ret_) - data_term(z[i], i < n_ret_) + dq;
}

LatentDraws gibbs_sample_latent(const LatentEnergy& energy, const McmcSettings& settings) {
  const std::size_t n = energy.size();
  const int burn = settings.burn_in >= 0 ? settings.burn_in : 10 * static_cast<int>(n);
  const int thin = std::max(1, settings.thin);
  const int keep = std::max(1, settings.retained_draws);
  auto rng = make_rng(derive_seed(settings.seed, 0xc51d));
  std::normal_distribution<double> step(0.0, std::sqrt(energy.variance()));
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < energy.n_retained()) {
      z[i] = 0.0;
    } else {
      do {
        z[i] = step(rng);
      } while (std::abs(z[i]) < 1e-8);  // deleted points need Pi < 1
    }
  }
  auto pz = energy.precision_times(z);

  LatentDraws out;
  out.draws.reserve(static_cast<std::size_t>(keep));
  long long accepted = 0, proposed = 0;
  const auto sweep = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      const double zi = z[i] + step(rng);
      const double d = energy.delta(z, pz, i, zi);
      ++proposed;
      if (d <= 0.0 || unif(rng) < std::exp(-d)) {
        const double diff = zi - z[i];
        z[i] = zi;
        for (std::size_t j = 0; j < n; ++j) pz[j] += diff * energy.precision(j, i);
        ++accepted;
      }
    }
  };
  for (int s = 0; s < burn; ++s) sweep();
  for (int k = 0; k < keep; ++k) {
    for (int s = 0; s < thin; ++s) sweep();
    out.draws.push_back(z);
  }
  out.acceptance_rate = proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
  return out;
}

GridField conditional_pi_field(const SelectionModel& selection, const ThinnedPair& data,
                               std::array<int, 3> resolution,
                               const McmcSettings& settings) {
  if (selection.kind != SelectionKind::Chi2 || selection.k != 1)
    throw std::invalid_argument(
        "conditional_pi_field: only the chi-squared field with k = 1 is supported");
  const int dim = data.retained.dim();
  const FieldSpec field(selection.kappa, selection.correlation);
  std::vector<Point> locations = data.retained.points;
  locations.insert(locations.end(), data.deleted.points.begin(), data.deleted.points.end());
  if (locations.empty())
    throw std::invalid_argument("conditional_pi_field: no data points");

  const LatentEnergy energy(field, locations, data.retained.size(), dim);
  const LatentDraws draws = gibbs_sample_latent(energy, settings);

  GridField mean(data.retained.window, resolution);
  std::vector<double> accum(mean.node_count(), 0.0);
  for (std::size_t k = 0; k < draws.draws.size(); ++k) {
    const GridField zfield =
        condition_on_values(field, locations, draws.draws[k], data.retained.window,
                            resolution, derive_seed(settings.seed, 0xf1e1d + k));
    for (std::size_t i = 0; i < accum.size(); ++i)
      accum[i] += std::exp(-0.5 * zfield.values[i] * zfield.values[i]);
  }
  mean.values.resize(accum.size());
  for (std::size_t i = 0; i < accum.size(); ++i)
    mean.values[i] = accum[i] / static_cast<double>(draws.draws.size());
  return mean;
}

}  // namespace ipp
