#pragma once

#include <string>

namespace ipp {

enum class CorrelationFamily { Gaussian, WhittleMatern, Exponential };

// Stationary isotropic correlation R0 with R0(0) = 1.
struct CorrelationModel {
  CorrelationFamily family = CorrelationFamily::Gaussian;
  double scale = 1.0;   // s (chi2 field) or alpha (DPP kernel)
  double shape = 1.0;   // nu; only Whittle-Matern uses it

  CorrelationModel() = default;
  CorrelationModel(CorrelationFamily f, double s, double nu = 1.0);
};

double eval_correlation(const CorrelationModel& m, double r);

// DPP kernel C0(r) = variance * R0(r); variance equals the intensity rho_Y.
struct DppKernel {
  double variance = 1.0;
  CorrelationModel correlation;

  DppKernel() = default;
  DppKernel(double rho, CorrelationModel corr);

  double eval(double r) const { return variance * eval_correlation(correlation, r); }
};

// Spectral density phi0 of C0 in dimension d (Fourier transform with the
// exp(-2*pi*i*x.u) convention). Closed forms for all three families.
double spectral_density(const DppKernel& k, double x, int d);

// Same transform evaluated by adaptive quadrature of the Hankel integral;
// kept as a cross-check for the closed forms.
double spectral_density_quadrature(const DppKernel& k, double x, int d);

struct DppExistence {
  bool admissible;
  double max_intensity;  // largest rho at this scale/shape with sup phi0 <= 1
};

DppExistence check_dpp_existence(const DppKernel& k, int d);

std::string family_name(CorrelationFamily f);
CorrelationFamily family_from_name(const std::string& name);

}  // namespace ipp
