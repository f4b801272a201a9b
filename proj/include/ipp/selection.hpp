#pragma once

#include <cstdint>
#include <vector>

#include "ipp/covariance.hpp"
#include "ipp/gaussian_field.hpp"
#include "ipp/geometry.hpp"

namespace ipp {

enum class RadiusKind { Deterministic, Beta };

// Ball-radius law for the Boolean germ-grain set; the Beta law is supported
// on (0,1) in window units.
struct RadiusLaw {
  RadiusKind kind = RadiusKind::Deterministic;
  double delta0 = 0.05;  // deterministic radius
  double alpha = 1.0;    // Beta parameters
  double beta = 1.0;

  static RadiusLaw deterministic(double d0);
  static RadiusLaw beta_law(double a, double b);

  double moment(int d) const;     // E[Delta0^d]
  double ess_sup() const;         // essential supremum of the radius
  // E[k_d(r, Delta0)]; 64-node Gauss-Legendre against the Beta density,
  // exact in the deterministic case.
  double mean_overlap(double r, int d) const;
};

enum class SelectionKind { Chi2, Boolean };

struct SelectionModel {
  SelectionKind kind = SelectionKind::Chi2;
  // chi^2 field: Pi = exp(-0.5 * sum_{i<=k} Z_i^2)
  int k = 1;
  double kappa = 1.0;
  CorrelationModel correlation;
  // Boolean indicator: Pi = 1(x in Xi), or its complement
  double germ_intensity = 1.0;
  RadiusLaw radius;
  bool complement = false;

  static SelectionModel chi2(int k, double kappa, CorrelationModel corr);
  // kappa derived by inverting q = (1+kappa)^{-k/2}
  static SelectionModel chi2_from_q(int k, double q, CorrelationModel corr);
  static SelectionModel boolean(double rho_psi, RadiusLaw radius, bool complement, int d);
  // germ intensity derived from the target volume fraction
  static SelectionModel boolean_from_q(double q, RadiusLaw radius, bool complement, int d);
};

// Mean selection probability q = E[Pi(o)].
double mean_selection_q(const SelectionModel& m, int d);

// Normalized second moment M0(r) = E[Pi(x1)Pi(x2)] / q^2 at distance r.
double m0(const SelectionModel& m, double r, int d);

std::vector<double> sample_pi_at_points(const SelectionModel& m,
                                        const std::vector<Point>& locations, int dim,
                                        std::uint64_t seed);

GridField sample_pi_grid(const SelectionModel& m, const Window& window,
                         std::array<int, 3> resolution, std::uint64_t seed);

}  // namespace ipp
