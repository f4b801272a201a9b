#include "ipp/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ipp/numerics.hpp"
#include "ipp/rng.hpp"

namespace ipp {

namespace {

double beta_log_norm(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

struct BooleanRealization {
  std::vector<Point> germs;
  std::vector<double> radii;
};

BooleanRealization draw_boolean(const SelectionModel& m, const Window& germ_window,
                                int dim, Rng& rng) {
  BooleanRealization out;
  std::poisson_distribution<int> count(m.germ_intensity * germ_window.volume());
  const int n = count(rng);
  out.germs.resize(static_cast<std::size_t>(n));
  out.radii.resize(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::gamma_distribution<double> ga(m.radius.alpha, 1.0);
  std::gamma_distribution<double> gb(m.radius.beta, 1.0);
  for (int i = 0; i < n; ++i) {
    auto& p = out.germs[static_cast<std::size_t>(i)];
    p = {0, 0, 0};
    for (int j = 0; j < dim; ++j)
      p[j] = germ_window.lower[j] + germ_window.side(j) * unif(rng);
    if (m.radius.kind == RadiusKind::Deterministic) {
      out.radii[static_cast<std::size_t>(i)] = m.radius.delta0;
    } else {
      const double x = ga(rng), y = gb(rng);
      out.radii[static_cast<std::size_t>(i)] = x / (x + y);
    }
  }
  return out;
}

bool covered(const BooleanRealization& b, const Point& x, int dim) {
  for (std::size_t i = 0; i < b.germs.size(); ++i)
    if (distance(b.germs[i], x, dim) <= b.radii[i]) return true;
  return false;
}

Window bounding_window(const std::vector<Point>& pts, int dim) {
  Window w;
  w.dim = dim;
  for (int i = 0; i < dim; ++i) {
    double lo = pts[0][i], hi = pts[0][i];
    for (const auto& p : pts) {
      lo = std::min(lo, p[i]);
      hi = std::max(hi, p[i]);
    }
    w.lower[i] = lo;
    w.upper[i] = hi;
  }
  return w;
}

}  // namespace

RadiusLaw RadiusLaw::deterministic(double d0) {
  if (!(d0 > 0.0)) throw std::invalid_argument("RadiusLaw: delta0 <= 0");
  RadiusLaw law;
  law.kind = RadiusKind::Deterministic;
  law.delta0 = d0;
  return law;
}

RadiusLaw RadiusLaw::beta_law(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("RadiusLaw: bad Beta parameters");
  RadiusLaw law;
  law.kind = RadiusKind::Beta;
  law.alpha = a;
  law.beta = b;
  return law;
}

double RadiusLaw::moment(int d) const {
  if (kind == RadiusKind::Deterministic) return std::pow(delta0, d);
  return std::exp(beta_log_norm(alpha + d, beta) - beta_log_norm(alpha, beta));
}

double RadiusLaw::ess_sup() const {
  return kind == RadiusKind::Deterministic ? delta0 : 1.0;
}

double RadiusLaw::mean_overlap(double r, int d) const {
  if (kind == RadiusKind::Deterministic) return ball_overlap_volume(r, delta0, d);
  const double lo = std::min(1.0, 0.5 * r);  // k_d vanishes for radius <= r/2
  if (lo >= 1.0) return 0.0;
  const double log_b = beta_log_norm(alpha, beta);
  return gauss_legendre_64(
      [&](double t) {
        const double pdf = std::exp((alpha - 1.0) * std::log(t) +
                                    (beta - 1.0) * std::log1p(-t) - log_b);
        return ball_overlap_volume(r, t, d) * pdf;
      },
      lo, 1.0);
}

SelectionModel SelectionModel::chi2(int k, double kappa, CorrelationModel corr) {
  if (k < 1) throw std::invalid_argument("chi2: k < 1");
  if (!(kappa > 0.0)) throw std::invalid_argument("chi2: kappa <= 0");
  SelectionModel m;
  m.kind = SelectionKind::Chi2;
  m.k = k;
  m.kappa = kappa;
  m.correlation = corr;
  return m;
}

SelectionModel SelectionModel::chi2_from_q(int k, double q, CorrelationModel corr) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("chi2_from_q: q outside (0,1)");
  return chi2(k, std::pow(q, -2.0 / k) - 1.0, corr);
}

SelectionModel SelectionModel::boolean(double rho_psi, RadiusLaw radius, bool complement,
                                       int d) {
  if (!(rho_psi > 0.0)) throw std::invalid_argument("boolean: germ intensity <= 0");
  (void)d;
  SelectionModel m;
  m.kind = SelectionKind::Boolean;
  m.germ_intensity = rho_psi;
  m.radius = radius;
  m.complement = complement;
  return m;
}

SelectionModel SelectionModel::boolean_from_q(double q, RadiusLaw radius, bool complement,
                                              int d) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("boolean_from_q: q outside (0,1)");
  // q = p for the plain indicator, 1-p for the complement.
  const double p = complement ? 1.0 - q : q;
  const double rho_psi =
      -std::log1p(-p) / (unit_ball_volume(d) * radius.moment(d));
  return boolean(rho_psi, radius, complement, d);
}

double mean_selection_q(const SelectionModel& m, int d) {
  if (m.kind == SelectionKind::Chi2)
    return std::pow(1.0 + m.kappa, -0.5 * m.k);
  const double p =
      1.0 - std::exp(-m.germ_intensity * unit_ball_volume(d) * m.radius.moment(d));
  return m.complement ? 1.0 - p : p;
}

double m0(const SelectionModel& m, double r, int d) {
  if (r < 0.0) throw std::invalid_argument("m0: r < 0");
  if (m.kind == SelectionKind::Chi2) {
    const double q = mean_selection_q(m, d);
    const double rr = eval_correlation(m.correlation, r);
    const double a = 1.0 - std::pow(q, 2.0 / m.k);
    return std::pow(1.0 - a * a * rr * rr, -0.5 * m.k);
  }
  const double mean_kd = m.radius.mean_overlap(r, d);
  const double grown = std::exp(m.germ_intensity * mean_kd);
  if (m.complement) return grown;
  const double p = mean_selection_q(m, d);
  const double ratio = (1.0 - p) / p;
  return 2.0 / p - 1.0 / (p * p) + ratio * ratio * grown;
}

std::vector<double> sample_pi_at_points(const SelectionModel& m,
                                        const std::vector<Point>& locations, int dim,
                                        std::uint64_t seed) {
  std::vector<double> pi(locations.size(), 0.0);
  if (locations.empty()) return pi;
  if (m.kind == SelectionKind::Chi2) {
    const FieldSpec spec(m.kappa, m.correlation);
    std::vector<double> sum_sq(locations.size(), 0.0);
    for (int comp = 0; comp < m.k; ++comp) {
      const auto z = sample_at_points(spec, locations, dim,
                                      derive_seed(seed, static_cast<std::uint64_t>(comp)));
      for (std::size_t i = 0; i < z.size(); ++i) sum_sq[i] += z[i] * z[i];
    }
    for (std::size_t i = 0; i < pi.size(); ++i) pi[i] = std::exp(-0.5 * sum_sq[i]);
    return pi;
  }
  auto rng = make_rng(seed);
  const Window germ_window = bounding_window(locations, dim).dilated(m.radius.ess_sup());
  const BooleanRealization b = draw_boolean(m, germ_window, dim, rng);
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const bool in = covered(b, locations[i], dim);
    pi[i] = (in != m.complement) ? 1.0 : 0.0;
  }
  return pi;
}

GridField sample_pi_grid(const SelectionModel& m, const Window& window,
                         std::array<int, 3> resolution, std::uint64_t seed) {
  if (m.kind == SelectionKind::Chi2) {
    GridField pi(window, resolution);
    const FieldSpec spec(m.kappa, m.correlation);
    std::vector<double> sum_sq(pi.node_count(), 0.0);
    for (int comp = 0; comp < m.k; ++comp) {
      const GridField z = sample_grid(spec, window, resolution,
                                      derive_seed(seed, static_cast<std::uint64_t>(comp)));
      for (std::size_t i = 0; i < sum_sq.size(); ++i) sum_sq[i] += z.values[i] * z.values[i];
    }
    for (std::size_t i = 0; i < pi.values.size(); ++i)
      pi.values[i] = std::exp(-0.5 * sum_sq[i]);
    return pi;
  }
  GridField pi(window, resolution);
  auto rng = make_rng(seed);
  const Window germ_window = window.dilated(m.radius.ess_sup());
  const BooleanRealization b = draw_boolean(m, germ_window, window.dim, rng);
  for (std::size_t i = 0; i < pi.values.size(); ++i) {
    const bool in = covered(b, pi.node(i), window.dim);
    pi.values[i] = (in != m.complement) ? 1.0 : 0.0;
  }
  return pi;
}

}  // namespace ipp
