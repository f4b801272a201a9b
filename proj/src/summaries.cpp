#include "ipp/summaries.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ipp/numerics.hpp"

namespace ipp {

namespace {

double translation_weight(const Point& u, const Point& v, const Window& w) {
  double denom = 1.0;
  for (int i = 0; i < w.dim; ++i) denom *= w.side(i) - std::abs(u[i] - v[i]);
  return 1.0 / denom;
}

double epanechnikov(double t, double h) {
  const double u = t / h;
  if (std::abs(u) >= 1.0) return 0.0;
  return 0.75 * (1.0 - u * u) / h;
}

// One unordered pair's contribution to every pcf grid cell it touches.
template <typename Body>
void for_each_pair(const PointPattern& p, std::size_t i, const Body& body) {
  for (std::size_t j = i + 1; j < p.size(); ++j) body(j);
}

std::vector<double> pcf_row(const PointPattern& p, std::size_t i,
                            const std::vector<double>& r_grid, double h) {
  std::vector<double> acc(r_grid.size(), 0.0);
  const int d = p.dim();
  for_each_pair(p, i, [&](std::size_t j) {
    const double dist = distance(p.points[i], p.points[j], d);
    const double w = translation_weight(p.points[i], p.points[j], p.window);
    for (std::size_t m = 0; m < r_grid.size(); ++m) {
      const double k = epanechnikov(r_grid[m] - dist, h);
      if (k > 0.0) acc[m] += 2.0 * k * w;  // ordered pairs
    }
  });
  return acc;
}

std::vector<double> k_row(const PointPattern& p, std::size_t i,
                          const std::vector<double>& r_grid) {
  std::vector<double> acc(r_grid.size(), 0.0);
  const int d = p.dim();
  for_each_pair(p, i, [&](std::size_t j) {
    const double dist = distance(p.points[i], p.points[j], d);
    const double w = translation_weight(p.points[i], p.points[j], p.window);
    // r_grid is increasing: contribute to every cell with r >= dist.
    const auto it = std::lower_bound(r_grid.begin(), r_grid.end(), dist);
    for (auto m = static_cast<std::size_t>(it - r_grid.begin()); m < r_grid.size(); ++m)
      acc[m] += 2.0 * w;
  });
  return acc;
}

void require_grid(const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw std::invalid_argument("summary: empty r grid");
  for (std::size_t i = 1; i < r_grid.size(); ++i)
    if (!(r_grid[i] > r_grid[i - 1]))
      throw std::invalid_argument("summary: r grid must be increasing");
}

double boundary_distance(const Point& p, const Window& w) {
  double b = std::numeric_limits<double>::infinity();
  for (int i = 0; i < w.dim; ++i)
    b = std::min({b, p[i] - w.lower[i], w.upper[i] - p[i]});
  return b;
}

}  // namespace

namespace kernels {

std::vector<double> pcf_accumulate_serial(const PointPattern& p,
                                          const std::vector<double>& r_grid, double h) {
  std::vector<double> acc(r_grid.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto row = pcf_row(p, i, r_grid, h);
    for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += row[m];
  }
  return acc;
}

std::vector<double> pcf_accumulate_omp(const PointPattern& p,
                                       const std::vector<double>& r_grid, double h) {
  std::vector<double> acc(r_grid.size(), 0.0);
  const auto n = static_cast<std::ptrdiff_t>(p.size());
#pragma omp parallel
  {
    std::vector<double> local(r_grid.size(), 0.0);
#pragma omp for schedule(dynamic, 16) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto row = pcf_row(p, static_cast<std::size_t>(i), r_grid, h);
      for (std::size_t m = 0; m < local.size(); ++m) local[m] += row[m];
    }
#pragma omp critical
    for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += local[m];
  }
  return acc;
}

std::vector<double> k_accumulate_serial(const PointPattern& p,
                                        const std::vector<double>& r_grid) {
  std::vector<double> acc(r_grid.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto row = k_row(p, i, r_grid);
    for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += row[m];
  }
  return acc;
}

std::vector<double> k_accumulate_omp(const PointPattern& p,
                                     const std::vector<double>& r_grid) {
  std::vector<double> acc(r_grid.size(), 0.0);
  const auto n = static_cast<std::ptrdiff_t>(p.size());
#pragma omp parallel
  {
    std::vector<double> local(r_grid.size(), 0.0);
#pragma omp for schedule(dynamic, 16) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto row = k_row(p, static_cast<std::size_t>(i), r_grid);
      for (std::size_t m = 0; m < local.size(); ++m) local[m] += row[m];
    }
#pragma omp critical
    for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += local[m];
  }
  return acc;
}

}  // namespace kernels

std::string stat_name(Stat s) {
  switch (s) {
    case Stat::Pcf: return "pcf";
    case Stat::K: return "K";
    case Stat::F: return "F";
    case Stat::G: return "G";
    case Stat::J: return "J";
  }
  return "?";
}

Stat stat_from_name(const std::string& name) {
  if (name == "pcf" || name == "g") return Stat::Pcf;
  if (name == "K") return Stat::K;
  if (name == "F") return Stat::F;
  if (name == "G") return Stat::G;
  if (name == "J") return Stat::J;
  throw std::invalid_argument("unknown statistic: " + name);
}

std::vector<double> make_r_grid(double r_max, int n) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    grid[static_cast<std::size_t>(i)] = r_max * (i + 1) / static_cast<double>(n);
  return grid;
}

SummaryFunction estimate_pcf(const PointPattern& p, const std::vector<double>& r_grid,
                             std::optional<double> bandwidth) {
  require_grid(r_grid);
  if (p.size() < 2) throw std::invalid_argument("estimate_pcf: need at least 2 points");
  const int d = p.dim();
  const double n = static_cast<double>(p.size());
  const double vol = p.window.volume();
  const double rho_hat = n / vol;
  const double h = bandwidth.value_or(0.15 / std::sqrt(rho_hat));
  const double rho2 = n * (n - 1.0) / (vol * vol);

  SummaryFunction out;
  out.stat = Stat::Pcf;
  out.r_grid = r_grid;
  out.meta = {"kernel (Epanechnikov)", "translation", h};
  const auto acc = kernels::pcf_accumulate_omp(p, r_grid, h);
  out.values.resize(r_grid.size());
  for (std::size_t m = 0; m < r_grid.size(); ++m) {
    const double shell = d * unit_ball_volume(d) * std::pow(r_grid[m], d - 1);
    out.values[m] = acc[m] / (shell * rho2);
  }
  return out;
}

SummaryFunction estimate_K(const PointPattern& p, const std::vector<double>& r_grid) {
  require_grid(r_grid);
  if (p.size() < 2) throw std::invalid_argument("estimate_K: need at least 2 points");
  const double n = static_cast<double>(p.size());
  const double vol = p.window.volume();
  const double rho2 = n * (n - 1.0) / (vol * vol);

  SummaryFunction out;
  out.stat = Stat::K;
  out.r_grid = r_grid;
  out.meta = {"empirical K", "translation", 0.0};
  const auto acc = kernels::k_accumulate_omp(p, r_grid);
  out.values.resize(r_grid.size());
  for (std::size_t m = 0; m < r_grid.size(); ++m) out.values[m] = acc[m] / rho2;
  return out;
}

SummaryFunction model_K(const std::function<double(double)>& g,
                        const std::vector<double>& r_grid, int d) {
  require_grid(r_grid);
  SummaryFunction out;
  out.stat = Stat::K;
  out.r_grid = r_grid;
  out.meta = {"model K (quadrature)", "none", 0.0};
  out.values.resize(r_grid.size());
  const double c = d * unit_ball_volume(d);
  double prev_r = 0.0, acc = 0.0;
  for (std::size_t m = 0; m < r_grid.size(); ++m) {
    acc += adaptive_simpson([&](double t) { return std::pow(t, d - 1) * g(t); }, prev_r,
                            r_grid[m], 1e-9);
    out.values[m] = c * acc;
    prev_r = r_grid[m];
  }
  return out;
}

FgjEstimates estimate_FGJ(const PointPattern& p, const std::vector<double>& r_grid,
                          int f_grid_resolution) {
  require_grid(r_grid);
  if (p.size() == 0) throw std::invalid_argument("estimate_FGJ: empty pattern");
  const int d = p.dim();
  const Window& w = p.window;

  // Empty-space distances from a regular grid of test locations.
  std::size_t n_test = 1;
  for (int i = 0; i < d; ++i) n_test *= static_cast<std::size_t>(f_grid_resolution);
  std::vector<double> test_dist(n_test), test_bdry(n_test);
  const auto n_test_s = static_cast<std::ptrdiff_t>(n_test);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n_test_s; ++t) {
    Point loc{0, 0, 0};
    std::size_t rem = static_cast<std::size_t>(t);
    for (int i = 0; i < d; ++i) {
      const auto j = rem % static_cast<std::size_t>(f_grid_resolution);
      rem /= static_cast<std::size_t>(f_grid_resolution);
      loc[i] = w.lower[i] + w.side(i) * (static_cast<double>(j) + 0.5) / f_grid_resolution;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : p.points) best = std::min(best, distance(loc, q, d));
    test_dist[static_cast<std::size_t>(t)] = best;
    test_bdry[static_cast<std::size_t>(t)] = boundary_distance(loc, w);
  }

  // Nearest-neighbour distances of the data points.
  std::vector<double> nn_dist(p.size(), std::numeric_limits<double>::infinity());
  std::vector<double> nn_bdry(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j)
      if (j != i)
        nn_dist[i] = std::min(nn_dist[i], distance(p.points[i], p.points[j], d));
    nn_bdry[i] = boundary_distance(p.points[i], w);
  }

  const auto border_cdf = [&](const std::vector<double>& dist,
                              const std::vector<double>& bdry, double r) {
    std::size_t hits = 0, eligible = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (bdry[i] < r) continue;
      ++eligible;
      if (dist[i] <= r) ++hits;
    }
    if (eligible == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(hits) / static_cast<double>(eligible);
  };

  FgjEstimates out;
  out.F.stat = Stat::F;
  out.G.stat = Stat::G;
  out.J.stat = Stat::J;
  out.F.meta = {"empty space (grid)", "border", 0.0};
  out.G.meta = {"nearest neighbour", "border", 0.0};
  out.J.meta = {"(1-G)/(1-F)", "border", 0.0};
  out.F.r_grid = out.G.r_grid = out.J.r_grid = r_grid;
  out.F.values.resize(r_grid.size());
  out.G.values.resize(r_grid.size());
  out.J.values.resize(r_grid.size());
  bool f_saturated = false;
  for (std::size_t m = 0; m < r_grid.size(); ++m) {
    const double f = border_cdf(test_dist, test_bdry, r_grid[m]);
    const double g = border_cdf(nn_dist, nn_bdry, r_grid[m]);
    out.F.values[m] = f;
    out.G.values[m] = g;
    if (f_saturated || !(f < 1.0) || std::isnan(f) || std::isnan(g)) {
      f_saturated = f_saturated || f >= 1.0;
      out.J.values[m] = std::numeric_limits<double>::quiet_NaN();
    } else {
      out.J.values[m] = (1.0 - g) / (1.0 - f);
    }
  }
  return out;
}

SummaryFunction estimate_stat(Stat stat, const PointPattern& p,
                              const std::vector<double>& r_grid) {
  switch (stat) {
    case Stat::Pcf: return estimate_pcf(p, r_grid);
    case Stat::K: return estimate_K(p, r_grid);
    case Stat::F: return estimate_FGJ(p, r_grid).F;
    case Stat::G: return estimate_FGJ(p, r_grid).G;
    case Stat::J: return estimate_FGJ(p, r_grid).J;
  }
  throw std::logic_error("estimate_stat: unknown stat");
}

SummaryFunction envelopes(const PointPattern& observed,
                          const std::function<PointPattern(int)>& simulate_pattern,
                          Stat stat, const std::vector<double>& r_grid, int n_sim,
                          double level) {
  if (n_sim < 39) throw std::invalid_argument("envelopes: need n_sim >= 39");
  SummaryFunction out = estimate_stat(stat, observed, r_grid);
  std::vector<std::vector<double>> sims(static_cast<std::size_t>(n_sim));
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_sim; ++i) {
    const PointPattern p = simulate_pattern(i);
    sims[static_cast<std::size_t>(i)] = estimate_stat(stat, p, r_grid).values;
  }
  const int rank =
      static_cast<int>(std::ceil(0.5 * (1.0 - level) * (n_sim + 1)));
  out.lo.resize(r_grid.size());
  out.hi.resize(r_grid.size());
  std::vector<double> column(static_cast<std::size_t>(n_sim));
  for (std::size_t m = 0; m < r_grid.size(); ++m) {
    for (int i = 0; i < n_sim; ++i)
      column[static_cast<std::size_t>(i)] = sims[static_cast<std::size_t>(i)][m];
    std::sort(column.begin(), column.end());
    out.lo[m] = column[static_cast<std::size_t>(rank - 1)];
    out.hi[m] = column[static_cast<std::size_t>(n_sim - rank)];
  }
  out.level = level;
  out.n_sim = n_sim;
  return out;
}

}  // namespace ipp
