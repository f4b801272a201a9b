#pragma once

#include <cstdint>
#include <optional>

#include "ipp/covariance.hpp"
#include "ipp/geometry.hpp"

namespace ipp {

enum class BaseProcessKind { Poisson, Dpp, MaternI, MaternII };

struct BaseProcessModel {
  BaseProcessKind kind = BaseProcessKind::Poisson;
  double rho = 1.0;        // Poisson intensity
  DppKernel kernel;        // Dpp
  double rho_phi = 1.0;    // Matern parent intensity
  double hardcore = 1.0;   // Matern deletion radius D

  static BaseProcessModel poisson(double rho);
  static BaseProcessModel dpp(DppKernel kernel);
  static BaseProcessModel matern1(double rho_phi, double D);
  static BaseProcessModel matern2(double rho_phi, double D);
};

// Closed-form intensity of the base process in dimension d.
double intensity(const BaseProcessModel& m, int d);

// Closed-form isotropic pair correlation g_{Y,0}(r).
double pcf(const BaseProcessModel& m, double r, int d);

// Fraction of spectral mass retained in the truncated Fourier expansion of
// the DPP sampler (accuracy knob; 0.999 default).
struct SimulateOptions {
  double dpp_spectral_mass = 0.999;
};

PointPattern simulate(const BaseProcessModel& m, const Window& w, std::uint64_t seed,
                      const SimulateOptions& opts = {});

// Type-I and type-II thinnings driven by one parent realization (so that the
// type-I pattern is contained in the type-II pattern).
struct MaternCoupled {
  PointPattern type1;
  PointPattern type2;
};
MaternCoupled simulate_matern_coupled(double rho_phi, double D, const Window& w,
                                      std::uint64_t seed);

}  // namespace ipp
