#include "ipp/thinning.hpp"

#include <stdexcept>

#include "ipp/rng.hpp"

namespace ipp {

InterruptedModel::InterruptedModel(BaseProcessModel b, SelectionModel s, int d)
    : base(std::move(b)), selection(std::move(s)), dim(d) {
  if (d < 1 || d > 3) throw std::invalid_argument("InterruptedModel: bad dim");
  if (base.kind == BaseProcessKind::Dpp &&
      !check_dpp_existence(base.kernel, d).admissible)
    throw std::invalid_argument("InterruptedModel: DPP kernel inadmissible");
  if (!(intensity_x() > 0.0))
    throw std::invalid_argument("InterruptedModel: rho_X must be positive");
}

SimulatedTriple simulate_triple(const InterruptedModel& m, const Window& w,
                                std::uint64_t seed, const SimulateOptions& opts) {
  if (w.dim != m.dim) throw std::invalid_argument("simulate_triple: window dim mismatch");
  SimulatedTriple out;
  out.base = simulate(m.base, w, derive_seed(seed, 0), opts);
  out.pi_at_y = sample_pi_at_points(m.selection, out.base.points, m.dim,
                                    derive_seed(seed, 1));
  out.retained.window = w;
  out.deleted.window = w;
  // Uniforms attach to points in generation order under the derived seed.
  auto rng = make_rng(derive_seed(seed, 2));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < out.base.points.size(); ++i) {
    if (out.pi_at_y[i] >= unif(rng))
      out.retained.points.push_back(out.base.points[i]);
    else
      out.deleted.points.push_back(out.base.points[i]);
  }
  return out;
}

double pcf_x(const InterruptedModel& m, double r) {
  return m0(m.selection, r, m.dim) * pcf(m.base, r, m.dim);
}

double pcf_xbar(const InterruptedModel& m, double r) {
  const double q = m.q();
  if (q >= 1.0) throw std::invalid_argument("pcf_xbar: q = 1 leaves no deleted process");
  const double M = m0(m.selection, r, m.dim);
  return (1.0 - 2.0 * q + q * q * M) / ((1.0 - q) * (1.0 - q)) * pcf(m.base, r, m.dim);
}

double pcf_cross(const InterruptedModel& m, double r) {
  const double q = m.q();
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("pcf_cross: degenerate q");
  const double M = m0(m.selection, r, m.dim);
  return (q - q * q * M) / (q * (1.0 - q)) * pcf(m.base, r, m.dim);
}

double hardcore_radius(const InterruptedModel& m) {
  switch (m.base.kind) {
    case BaseProcessKind::MaternI:
    case BaseProcessKind::MaternII:
      return m.base.hardcore;
    default:
      return 0.0;
  }
}

}  // namespace ipp
