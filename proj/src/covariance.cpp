#include "ipp/covariance.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ipp/numerics.hpp"

namespace ipp {

CorrelationModel::CorrelationModel(CorrelationFamily f, double s, double nu)
    : family(f), scale(s), shape(nu) {
  if (!(scale > 0.0)) throw std::invalid_argument("CorrelationModel: scale <= 0");
  if (family == CorrelationFamily::WhittleMatern && !(shape > 0.0 && shape <= 50.0))
    throw std::invalid_argument("CorrelationModel: shape must lie in (0, 50]");
}

double eval_correlation(const CorrelationModel& m, double r) {
  if (r < 0.0) throw std::invalid_argument("eval_correlation: r < 0");
  if (r == 0.0) return 1.0;
  const double t = r / m.scale;
  switch (m.family) {
    case CorrelationFamily::Gaussian:
      return std::exp(-t * t);
    case CorrelationFamily::Exponential:
      return std::exp(-t);
    case CorrelationFamily::WhittleMatern: {
      const double nu = m.shape;
      // 2^{1-nu}/Gamma(nu) * t^nu * K_nu(t); underflows to 0 for large t.
      const double lg = (1.0 - nu) * std::numbers::ln2 - std::lgamma(nu) +
                        nu * std::log(t);
      const double bk = std::cyl_bessel_k(nu, t);
      if (bk <= 0.0) return 0.0;
      return std::exp(lg + std::log(bk));
    }
  }
  throw std::logic_error("eval_correlation: unknown family");
}

DppKernel::DppKernel(double rho, CorrelationModel corr)
    : variance(rho), correlation(corr) {
  if (!(variance > 0.0)) throw std::invalid_argument("DppKernel: variance <= 0");
}

double spectral_density(const DppKernel& k, double x, int d) {
  if (d < 1 || d > 3) throw std::invalid_argument("spectral_density: bad dim");
  if (x < 0.0) throw std::invalid_argument("spectral_density: x < 0");
  const double rho = k.variance;
  const double s = k.correlation.scale;
  switch (k.correlation.family) {
    case CorrelationFamily::Gaussian: {
      const double a = std::numbers::pi * s * x;
      return rho * std::pow(std::sqrt(std::numbers::pi) * s, d) * std::exp(-a * a);
    }
    case CorrelationFamily::Exponential:
    case CorrelationFamily::WhittleMatern: {
      const double nu = k.correlation.family == CorrelationFamily::Exponential
                            ? 0.5
                            : k.correlation.shape;
      const double w = 2.0 * std::numbers::pi * s * x;
      const double c = std::pow(2.0 * s, d) * std::pow(std::numbers::pi, 0.5 * d) *
                       std::exp(std::lgamma(nu + 0.5 * d) - std::lgamma(nu));
      return rho * c * std::pow(1.0 + w * w, -(nu + 0.5 * d));
    }
  }
  throw std::logic_error("spectral_density: unknown family");
}

double spectral_density_quadrature(const DppKernel& k, double x, int d) {
  // Hankel-transform form. Integrate in panels of one correlation length so
  // the adaptive rule cannot step over the support of C0 (the whole-interval
  // samples of e.g. a Gaussian kernel are all ~0 past a few lengths).
  const double s = k.correlation.scale;
  const int panels = 60;
  const auto c0 = [&](double r) { return k.eval(r); };
  const auto integrate = [&](auto&& f) {
    double total = 0.0;
    for (int j = 0; j < panels; ++j)
      total += adaptive_simpson(f, j * s, (j + 1) * s, 1e-14);
    return total;
  };
  if (d == 1) {
    return 2.0 * integrate([&](double t) {
             return c0(t) * std::cos(2.0 * std::numbers::pi * x * t);
           });
  }
  const double order = 0.5 * d - 1.0;
  if (x == 0.0) {
    if (d == 2)
      return 2.0 * std::numbers::pi * integrate([&](double t) { return c0(t) * t; });
    // d = 3: J_{1/2}(z) ~ sqrt(2z/pi)/... take the r->0 limit of the display.
    return 4.0 * std::numbers::pi *
           integrate([&](double t) { return c0(t) * t * t; });
  }
  const auto f = [&](double t) {
    return c0(t) * std::cyl_bessel_j(order, 2.0 * std::numbers::pi * x * t) *
           std::pow(t, 0.5 * d);
  };
  return 2.0 * std::numbers::pi / std::pow(x, order) * integrate(f);
}

DppExistence check_dpp_existence(const DppKernel& k, int d) {
  // phi0 is maximal at x = 0 for every implemented family and scales
  // linearly in rho, so the admissibility boundary is rho / phi0(0).
  const double peak = spectral_density(k, 0.0, d);
  const double max_rho = k.variance / peak;
  return DppExistence{peak <= 1.0, max_rho};
}

std::string family_name(CorrelationFamily f) {
  switch (f) {
    case CorrelationFamily::Gaussian: return "gaussian";
    case CorrelationFamily::Exponential: return "exponential";
    case CorrelationFamily::WhittleMatern: return "whittle_matern";
  }
  return "?";
}

CorrelationFamily family_from_name(const std::string& name) {
  if (name == "gaussian") return CorrelationFamily::Gaussian;
  if (name == "exponential") return CorrelationFamily::Exponential;
  if (name == "whittle_matern" || name == "matern") return CorrelationFamily::WhittleMatern;
  throw std::invalid_argument("unknown correlation family: " + name);
}

}  // namespace ipp
