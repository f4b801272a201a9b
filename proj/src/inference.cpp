#include "ipp/inference.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ipp/rng.hpp"

namespace ipp {

namespace {

constexpr double kLogClamp = 1e-12;
constexpr double kPenalty = 1e8;

double logit(double p) { return std::log(p / (1.0 - p)); }
double expit(double t) { return 1.0 / (1.0 + std::exp(-t)); }

struct ParamBox {
  std::string name;
  double lo, hi;
  bool log_scale;  // log transform; otherwise logit on (lo, hi)

  double to_internal(double v) const {
    if (log_scale) return std::log(v);
    return logit((v - lo) / (hi - lo));
  }
  double to_natural(double t) const {
    if (log_scale) return std::min(hi, std::max(lo, std::exp(t)));
    return lo + (hi - lo) * expit(t);
  }
};

std::vector<ParamBox> boxes_for(const FitFamily& family, double min_side) {
  std::vector<ParamBox> boxes;
  boxes.push_back({"q", 0.02, 0.98, false});
  if (family.base_kind == BaseProcessKind::Dpp)
    boxes.push_back({"alpha", 1e-3 * min_side, 0.5 * min_side, true});
  if (family.selection_kind == SelectionKind::Chi2)
    boxes.push_back({"s", 1e-3 * min_side, 0.5 * min_side, true});
  else
    boxes.push_back({"delta0", 1e-3 * min_side, 0.5 * min_side, true});
  return boxes;
}

// Model curve pieces at a parameter point; nullopt when the point is
// infeasible (e.g. Matern intensity above its ceiling).
struct CurvePieces {
  BaseProcessModel base;
  SelectionModel selection;
};

std::optional<CurvePieces> curve_pieces(const FitFamily& family,
                                        const std::map<std::string, double>& params,
                                        double rho_hat_x, double hardcore_D, int dim) {
  const double q = params.at("q");
  if (!(q > 0.0 && q < 1.0)) return std::nullopt;
  const double rho_y = rho_hat_x / q;
  CurvePieces pieces;
  switch (family.base_kind) {
    case BaseProcessKind::Poisson:
      pieces.base = BaseProcessModel::poisson(rho_y);
      break;
    case BaseProcessKind::Dpp: {
      const DppKernel kernel(
          rho_y, CorrelationModel(family.dpp_family, params.at("alpha"), family.dpp_shape));
      // existence of the determinantal process bounds rho_y given the scale,
      // which in turn identifies q from below
      if (!check_dpp_existence(kernel, dim).admissible) return std::nullopt;
      pieces.base = BaseProcessModel::dpp(kernel);
      break;
    }
    case BaseProcessKind::MaternI:
    case BaseProcessKind::MaternII: {
      if (!(hardcore_D > 0.0)) return std::nullopt;
      const double b = unit_ball_volume(dim) * std::pow(hardcore_D, dim);
      if (rho_y * b >= 1.0) return std::nullopt;  // above the Matern II ceiling
      const double rho_phi = -std::log1p(-rho_y * b) / b;
      pieces.base = family.base_kind == BaseProcessKind::MaternII
                        ? BaseProcessModel::matern2(rho_phi, hardcore_D)
                        : BaseProcessModel::matern1(rho_phi, hardcore_D);
      break;
    }
  }
  if (family.selection_kind == SelectionKind::Chi2) {
    pieces.selection = SelectionModel::chi2_from_q(
        family.chi2_k, q,
        CorrelationModel(family.chi2_family, params.at("s"), family.chi2_shape));
  } else {
    pieces.selection = SelectionModel::boolean_from_q(
        q, RadiusLaw::deterministic(params.at("delta0")), family.boolean_complement, dim);
  }
  return pieces;
}

std::map<std::string, double> to_params(const std::vector<ParamBox>& boxes,
                                        const std::vector<double>& internal) {
  std::map<std::string, double> p;
  for (std::size_t i = 0; i < boxes.size(); ++i)
    p[boxes[i].name] = boxes[i].to_natural(internal[i]);
  return p;
}

double resolved_rl(const FitSettings& s, double min_side) {
  return s.r_l > 0.0 ? s.r_l : min_side / 100.0;
}
double resolved_ru(const FitSettings& s, double min_side) {
  return s.r_u > 0.0 ? s.r_u : min_side / 4.0;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    s += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return s;
}

struct PairClass {
  std::vector<double> xx, bb, cross;  // pair distances by retention class
};

PairClass collect_pairs(const ThinnedPair& t, double cutoff) {
  PairClass pc;
  const int d = t.retained.dim();
  const auto& x = t.retained.points;
  const auto& b = t.deleted.points;
  const auto keep = [&](double dist) { return cutoff <= 0.0 || dist <= cutoff; };
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dist = distance(x[i], x[j], d);
      if (keep(dist)) pc.xx.push_back(dist);
    }
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      const double dist = distance(b[i], b[j], d);
      if (keep(dist)) pc.bb.push_back(dist);
    }
  for (const auto& u : x)
    for (const auto& v : b) {
      const double dist = distance(u, v, d);
      if (keep(dist)) pc.cross.push_back(dist);
    }
  return pc;
}

double cl2_from_pairs(const PairClass& pc, const SelectionModel& sel, double q, int dim) {
  double ll = 0.0;
  for (double r : pc.xx)
    ll += std::log(std::max(kLogClamp, q * q * m0(sel, r, dim)));
  for (double r : pc.bb)
    ll += std::log(std::max(kLogClamp, 1.0 - 2.0 * q + q * q * m0(sel, r, dim)));
  for (double r : pc.cross)
    ll += std::log(std::max(kLogClamp, q - q * q * m0(sel, r, dim)));
  return ll;
}

SelectionModel selection_at(const FitFamily& family, double q, double theta, double shape,
                            int dim) {
  if (family.selection_kind == SelectionKind::Chi2)
    return SelectionModel::chi2_from_q(family.chi2_k, q,
                                       CorrelationModel(family.chi2_family, theta, shape));
  return SelectionModel::boolean_from_q(q, RadiusLaw::deterministic(theta),
                                        family.boolean_complement, dim);
}

struct ReplicateStats {
  double mean = 0.0, sd = 0.0, mse = 0.0;
  int n = 0;
};

ReplicateStats stats_vs(const std::vector<double>& values, double truth) {
  ReplicateStats s;
  s.n = static_cast<int>(values.size());
  if (s.n == 0) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.n;
  double var = 0.0, mse = 0.0;
  for (double v : values) {
    var += (v - s.mean) * (v - s.mean);
    mse += (v - truth) * (v - truth);
  }
  s.sd = s.n > 1 ? std::sqrt(var / (s.n - 1)) : 0.0;
  s.mse = mse / s.n;
  return s;
}

}  // namespace

std::string method_name(FitMethod m) {
  switch (m) {
    case FitMethod::CL1: return "CL1";
    case FitMethod::CL2: return "CL2";
    case FitMethod::MC_g: return "g";
    case FitMethod::MC_K: return "K";
    case FitMethod::AVG: return "AV";
  }
  return "?";
}

std::vector<std::string> free_parameters(const FitFamily& family) {
  std::vector<std::string> names{"q"};
  if (family.base_kind == BaseProcessKind::Dpp) names.push_back("alpha");
  names.push_back(family.selection_kind == SelectionKind::Chi2 ? "s" : "delta0");
  return names;
}

InterruptedModel instantiate(const FitFamily& family,
                             const std::map<std::string, double>& params,
                             double rho_hat_x, double hardcore_D, int dim) {
  const auto pieces = curve_pieces(family, params, rho_hat_x, hardcore_D, dim);
  if (!pieces) throw std::invalid_argument("instantiate: infeasible parameter point");
  return InterruptedModel(pieces->base, pieces->selection, dim);
}

double log_cl1(const ThinnedPair& t, double q) {
  if (!(q > 0.0 && q < 1.0)) {
    // degenerate q is only consistent with an empty class
    if (q == 1.0 && t.deleted.size() == 0) return 0.0;
    if (q == 0.0 && t.retained.size() == 0) return 0.0;
    return -std::numeric_limits<double>::infinity();
  }
  return static_cast<double>(t.retained.size()) * std::log(q) +
         static_cast<double>(t.deleted.size()) * std::log1p(-q);
}

double log_cl2(const ThinnedPair& t, const SelectionModel& selection, int dim,
               double range_cutoff) {
  const double q = mean_selection_q(selection, dim);
  return cl2_from_pairs(collect_pairs(t, range_cutoff), selection, q, dim);
}

FitResult fit_q_cl1(const ThinnedPair& t) {
  if (t.total() == 0) throw std::invalid_argument("fit_q_cl1: empty base pattern");
  FitResult res;
  res.method = FitMethod::CL1;
  const double q = static_cast<double>(t.retained.size()) / static_cast<double>(t.total());
  res.estimates["q"] = q;
  res.objective = log_cl1(t, q);
  res.converged = true;
  return res;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * (1.0 + std::abs(a) + std::abs(b))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

NelderMeadResult nelder_mead_min(const std::function<double(const std::vector<double>&)>& f,
                                 const std::vector<double>& x0, double step, int max_iter,
                                 double tol) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
  for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

  NelderMeadResult res;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    {
      std::vector<std::vector<double>> s2;
      std::vector<double> f2;
      for (auto idx : order) {
        s2.push_back(simplex[idx]);
        f2.push_back(fv[idx]);
      }
      simplex = std::move(s2);
      fv = std::move(f2);
    }
    if (std::abs(fv[n] - fv[0]) <= tol * (1.0 + std::abs(fv[0]))) {
      res.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < n; ++c) centroid[c] += simplex[i][c] / n;
    const auto blend = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t c = 0; c < n; ++c)
        x[c] = centroid[c] + coef * (simplex[n][c] - centroid[c]);
      return x;
    };
    const auto xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const auto xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[n] = xe;
        fv[n] = fe;
      } else {
        simplex[n] = xr;
        fv[n] = fr;
      }
    } else if (fr < fv[n - 1]) {
      simplex[n] = xr;
      fv[n] = fr;
    } else {
      const auto xc = blend(fr < fv[n] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fv[n])) {
        simplex[n] = xc;
        fv[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t c = 0; c < n; ++c)
            simplex[i][c] = 0.5 * (simplex[i][c] + simplex[0][c]);
          fv[i] = f(simplex[i]);
        }
      }
    }
  }
  res.x = simplex[0];
  res.value = fv[0];
  res.iterations = iter;
  return res;
}

FitResult fit_theta_cl2(const ThinnedPair& t, const FitFamily& family, double q_fixed,
                        const FitSettings& settings) {
  if (!(q_fixed > 0.0 && q_fixed < 1.0))
    throw std::invalid_argument("fit_theta_cl2: q_fixed outside (0,1)");
  const double min_side = t.retained.window.min_side();
  const double cutoff = settings.cl2_range < 0.0 ? resolved_ru(settings, min_side)
                                                 : settings.cl2_range;
  const PairClass pc = collect_pairs(t, cutoff);
  const int dim = t.retained.dim();
  const double theta_lo = 1e-3 * min_side, theta_hi = 0.5 * min_side;

  const bool profile_nu = family.selection_kind == SelectionKind::Chi2 &&
                          family.chi2_family == CorrelationFamily::WhittleMatern;
  const std::vector<double> nu_grid =
      profile_nu ? std::vector<double>{0.25, 0.5, 1.0, 2.0, 5.0}
                 : std::vector<double>{family.chi2_shape};

  FitResult res;
  res.method = FitMethod::CL2;
  res.settings = settings;
  res.objective = -std::numeric_limits<double>::infinity();
  for (double nu : nu_grid) {
    const auto obj = [&](double log_theta) {
      return cl2_from_pairs(
          pc, selection_at(family, q_fixed, std::exp(log_theta), nu, dim), q_fixed, dim);
    };
    const double best_log = golden_section_max(obj, std::log(theta_lo),
                                               std::log(theta_hi), 1e-8);
    const double value = obj(best_log);
    if (value > res.objective) {
      res.objective = value;
      res.estimates[family.selection_kind == SelectionKind::Chi2 ? "s" : "delta0"] =
          std::exp(best_log);
      if (profile_nu) res.estimates["nu"] = nu;
    }
  }
  res.estimates["q"] = q_fixed;
  res.converged = true;
  return res;
}

FitResult fit_min_contrast(const PointPattern& x, const FitFamily& family, Stat stat,
                           const FitSettings& settings) {
  if (stat != Stat::Pcf && stat != Stat::K)
    throw std::invalid_argument("fit_min_contrast: stat must be g or K");
  const int dim = x.dim();
  const double min_side = x.window.min_side();
  const double r_l = resolved_rl(settings, min_side);
  const double r_u = resolved_ru(settings, min_side);
  const double c = stat == Stat::Pcf ? settings.contrast_power_g : settings.contrast_power_K;
  const double rho_hat_x = static_cast<double>(x.size()) / x.window.volume();
  const bool matern_base = family.base_kind == BaseProcessKind::MaternI ||
                           family.base_kind == BaseProcessKind::MaternII;
  const double hardcore_D = matern_base ? estimate_hardcore_D(x) : 0.0;

  std::vector<double> grid(static_cast<std::size_t>(settings.contrast_grid));
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = r_l + (r_u - r_l) * static_cast<double>(i) / (grid.size() - 1);

  const SummaryFunction observed =
      stat == Stat::Pcf ? estimate_pcf(x, grid) : estimate_K(x, grid);
  std::vector<double> obs_pow(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    obs_pow[i] = std::pow(std::max(0.0, observed.values[i]), c);

  // Fine grid from 0 to r_u for the cumulative K integral inside the loop.
  const std::size_t fine_n = 2048;
  std::vector<double> fine(fine_n + 1);
  for (std::size_t i = 0; i <= fine_n; ++i)
    fine[i] = r_u * static_cast<double>(i) / static_cast<double>(fine_n);

  const auto boxes = boxes_for(family, min_side);
  const std::size_t np = boxes.size();

  const auto objective = [&](const std::vector<double>& internal) {
    const auto params = to_params(boxes, internal);
    const auto pieces = curve_pieces(family, params, rho_hat_x, hardcore_D, dim);
    if (!pieces) return kPenalty;
    std::vector<double> diff2(grid.size());
    if (stat == Stat::Pcf) {
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = m0(pieces->selection, grid[i], dim) * pcf(pieces->base, grid[i], dim);
        const double d = std::pow(g, c) - obs_pow[i];
        diff2[i] = d * d;
      }
    } else {
      // cumulative trapezoid of d*omega_d*t^{d-1} g(t)
      std::vector<double> cum(fine_n + 1, 0.0);
      const double cd = dim * unit_ball_volume(dim);
      double prev = 0.0;
      for (std::size_t i = 1; i <= fine_n; ++i) {
        const double g = m0(pieces->selection, fine[i], dim) * pcf(pieces->base, fine[i], dim);
        const double integrand = cd * std::pow(fine[i], dim - 1) * g;
        cum[i] = cum[i - 1] + 0.5 * (prev + integrand) * (fine[i] - fine[i - 1]);
        prev = integrand;
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double pos = grid[i] / r_u * fine_n;
        const auto lo = std::min(fine_n - 1, static_cast<std::size_t>(pos));
        const double frac = pos - static_cast<double>(lo);
        const double kmod = cum[lo] * (1.0 - frac) + cum[lo + 1] * frac;
        const double d = std::pow(std::max(0.0, kmod), c) - obs_pow[i];
        diff2[i] = d * d;
      }
    }
    return trapezoid(grid, diff2);
  };

  // Screened multistart: the objective is cheap relative to Nelder-Mead, so
  // scatter a large Latin-hypercube sample over the box, keep the best
  // `restarts` points, and polish only those. Starting the simplex from a few
  // random points misses narrow basins when the boxes span several decades.
  auto rng = make_rng(derive_seed(settings.seed, 0x6d63));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int R = std::max(1, settings.restarts);
  const int S = std::max(R, 64 * static_cast<int>(np));
  std::vector<std::vector<int>> strata(np, std::vector<int>(static_cast<std::size_t>(S)));
  for (auto& s : strata) {
    std::iota(s.begin(), s.end(), 0);
    std::shuffle(s.begin(), s.end(), rng);
  }
  std::vector<std::pair<double, std::vector<double>>> screened;
  screened.reserve(static_cast<std::size_t>(S));
  for (int k = 0; k < S; ++k) {
    std::vector<double> pt(np);
    for (std::size_t p = 0; p < np; ++p) {
      const double frac = (strata[p][static_cast<std::size_t>(k)] + unif(rng)) / S;
      const double lo = boxes[p].to_internal(boxes[p].lo * 1.0000001);
      const double hi = boxes[p].to_internal(boxes[p].hi * 0.9999999);
      pt[p] = lo + (hi - lo) * frac;
    }
    screened.emplace_back(objective(pt), std::move(pt));
  }
  std::partial_sort(screened.begin(), screened.begin() + R, screened.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });

  FitResult res;
  res.method = stat == Stat::Pcf ? FitMethod::MC_g : FitMethod::MC_K;
  res.settings = settings;
  res.settings.r_l = r_l;
  res.settings.r_u = r_u;
  res.objective = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < R; ++restart) {
    const auto nm =
        nelder_mead_min(objective, screened[static_cast<std::size_t>(restart)].second,
                        0.5, 300, 1e-11);
    if (nm.value < res.objective) {
      res.objective = nm.value;
      res.estimates = to_params(boxes, nm.x);
      res.converged = nm.converged;
      res.iterations = nm.iterations;
    }
  }
  // one polishing pass from the incumbent with a tighter simplex
  {
    std::vector<double> start(np);
    for (std::size_t p = 0; p < np; ++p)
      start[p] = boxes[p].to_internal(res.estimates.at(boxes[p].name));
    const auto nm = nelder_mead_min(objective, start, 0.1, 300, 1e-12);
    if (nm.value < res.objective) {
      res.objective = nm.value;
      res.estimates = to_params(boxes, nm.x);
    }
  }
  res.estimates["rho_x"] = rho_hat_x;
  res.estimates["rho_y"] = rho_hat_x / res.estimates["q"];
  if (matern_base) res.estimates["D"] = hardcore_D;
  return res;
}

FitResult average_estimators(const PointPattern& x, const FitFamily& family,
                             int bootstrap_count, const FitSettings& settings) {
  FitResult fit_g = fit_min_contrast(x, family, Stat::Pcf, settings);
  FitResult fit_K = fit_min_contrast(x, family, Stat::K, settings);
  const auto names = free_parameters(family);

  FitResult res;
  res.method = FitMethod::AVG;
  res.settings = settings;
  res.converged = fit_g.converged && fit_K.converged;

  const double rho_hat_x = static_cast<double>(x.size()) / x.window.volume();
  const bool matern_base = family.base_kind == BaseProcessKind::MaternI ||
                           family.base_kind == BaseProcessKind::MaternII;
  const double hardcore_D = matern_base ? estimate_hardcore_D(x) : 0.0;

  InterruptedModel generator = [&] {
    try {
      return instantiate(family, fit_g.estimates, rho_hat_x, hardcore_D, x.dim());
    } catch (const std::exception&) {
      // fall back to (1,0) weights if no feasible generating model exists
      throw;
    }
  }();

  // Parametric bootstrap replicates from the g-based fit.
  FitSettings boot = settings;
  boot.restarts = std::max(2, settings.restarts / 2);
  const int B = bootstrap_count;
  std::vector<std::map<std::string, double>> est_g(static_cast<std::size_t>(B)),
      est_K(static_cast<std::size_t>(B));
  std::vector<char> ok(static_cast<std::size_t>(B), 0);
#pragma omp parallel for schedule(dynamic)
  for (int b = 0; b < B; ++b) {
    try {
      const auto triple =
          simulate_triple(generator, x.window, derive_seed(settings.seed, 1000 + b));
      if (triple.retained.size() < 10) continue;
      FitSettings bs = boot;
      bs.seed = derive_seed(settings.seed, 2000 + b);
      est_g[static_cast<std::size_t>(b)] =
          fit_min_contrast(triple.retained, family, Stat::Pcf, bs).estimates;
      est_K[static_cast<std::size_t>(b)] =
          fit_min_contrast(triple.retained, family, Stat::K, bs).estimates;
      ok[static_cast<std::size_t>(b)] = 1;
    } catch (const std::exception&) {
      // failed replicate: skipped and counted below
    }
  }

  int used = 0;
  for (char o : ok) used += o;
  res.iterations = used;
  for (const auto& name : names) {
    double lam_g = 1.0, lam_K = 0.0;
    if (used >= 3) {
      const double truth = fit_g.estimates.at(name);
      double s11 = 0, s12 = 0, s22 = 0;
      for (int b = 0; b < B; ++b) {
        if (!ok[static_cast<std::size_t>(b)]) continue;
        const double eg = est_g[static_cast<std::size_t>(b)].at(name) - truth;
        const double eK = est_K[static_cast<std::size_t>(b)].at(name) - truth;
        s11 += eg * eg;
        s12 += eg * eK;
        s22 += eK * eK;
      }
      s11 /= used;
      s12 /= used;
      s22 /= used;
      const double det = s11 * s22 - s12 * s12;
      if (std::abs(det) > 1e-300) {
        // lambda = Sigma^{-1} 1 / (1' Sigma^{-1} 1)
        const double a = (s22 - s12) / det, b2 = (s11 - s12) / det;
        if (std::isfinite(a) && std::isfinite(b2) && std::abs(a + b2) > 1e-300) {
          lam_g = a / (a + b2);
          lam_K = b2 / (a + b2);
        }
      }
    }
    res.estimates[name] =
        lam_g * fit_g.estimates.at(name) + lam_K * fit_K.estimates.at(name);
    res.estimates["lambda_g_" + name] = lam_g;
    res.estimates["lambda_K_" + name] = lam_K;
  }
  res.estimates["rho_x"] = rho_hat_x;
  res.estimates["rho_y"] = rho_hat_x / res.estimates.at("q");
  res.objective = fit_g.objective;
  return res;
}

double estimate_hardcore_D(const PointPattern& x) { return min_pairwise_distance(x); }

InterruptedModel study_model(int id) {
  const Window w = Window::unit_square();
  const CorrelationModel dpp_corr(CorrelationFamily::Gaussian, 0.015);
  const CorrelationModel chi2_corr(CorrelationFamily::Gaussian, 0.05);
  const BaseProcessModel dpp = BaseProcessModel::dpp(DppKernel(1000.0, dpp_corr));
  const BaseProcessModel mat2 = BaseProcessModel::matern2(1736.0, 0.015);
  const SelectionModel chi2 = SelectionModel::chi2_from_q(1, 0.5, chi2_corr);
  const SelectionModel boolean =
      SelectionModel::boolean_from_q(0.5, RadiusLaw::deterministic(0.05), false, 2);
  switch (id) {
    case 1: return InterruptedModel(dpp, chi2, 2);
    case 2: return InterruptedModel(dpp, boolean, 2);
    case 3: return InterruptedModel(mat2, chi2, 2);
    case 4: return InterruptedModel(mat2, boolean, 2);
    default: throw std::invalid_argument("study_model: id must be 1..4");
  }
}

FitFamily study_family(int id) {
  FitFamily f;
  f.base_kind = id <= 2 ? BaseProcessKind::Dpp : BaseProcessKind::MaternII;
  f.dpp_family = CorrelationFamily::Gaussian;
  f.selection_kind = (id == 1 || id == 3) ? SelectionKind::Chi2 : SelectionKind::Boolean;
  f.chi2_k = 1;
  f.chi2_family = CorrelationFamily::Gaussian;
  return f;
}

std::string StudyTable::to_csv() const {
  std::ostringstream os;
  os << "model,parameter,method,mean,sd,mse,weight_g,weight_K,n_used,n_failed\n";
  for (const auto& r : rows)
    os << r.model << ',' << r.parameter << ',' << r.method << ',' << r.mean << ','
       << r.sd << ',' << r.mse << ',' << r.weight_g << ',' << r.weight_K << ','
       << r.n_used << ',' << r.n_failed << '\n';
  return os.str();
}

std::string StudyTable::to_markdown() const {
  std::ostringstream os;
  os << "| model | parameter | method | mean | sd | MSE | weights | used/failed |\n";
  os << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    os << "| " << r.model << " | " << r.parameter << " | " << r.method << " | " << r.mean
       << " | " << r.sd << " | " << r.mse << " | ";
    if (r.method == "AV")
      os << "(" << r.weight_g << "," << r.weight_K << ")";
    else
      os << "-";
    os << " | " << r.n_used << "/" << r.n_failed << " |\n";
  }
  return os.str();
}

namespace {

std::map<std::string, double> study_truth(int id) {
  std::map<std::string, double> t{{"q", 0.5}};
  if (id <= 2) t["alpha"] = 0.015;
  if (id == 1 || id == 3) t["s"] = 0.05;
  else t["delta0"] = 0.05;
  return t;
}

}  // namespace

StudyTable run_simulation_study(int table, int reps, std::uint64_t seed,
                                const std::vector<int>& models, int bootstrap_count) {
  if (table != 1 && table != 2)
    throw std::invalid_argument("run_simulation_study: table must be 1 or 2");
  StudyTable out;
  out.table = table;
  if (reps <= 0) return out;
  const Window w = Window::unit_square();

  for (int id : models) {
    const InterruptedModel model = study_model(id);
    const FitFamily family = study_family(id);
    const auto truth = study_truth(id);
    const std::string theta_name = (id == 1 || id == 3) ? "s" : "delta0";

    if (table == 1) {
      std::vector<double> theta_hat;
      int failed = 0;
      std::vector<std::optional<double>> results(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic)
      for (int rep = 0; rep < reps; ++rep) {
        try {
          const auto triple = simulate_triple(
              model, w, derive_seed(seed, static_cast<std::uint64_t>(id) * 100000 + rep));
          const ThinnedPair pair(triple.retained, triple.deleted);
          const double q_hat = fit_q_cl1(pair).estimates.at("q");
          const auto fit = fit_theta_cl2(pair, family, q_hat);
          results[static_cast<std::size_t>(rep)] = fit.estimates.at(theta_name);
        } catch (const std::exception&) {
        }
      }
      for (const auto& r : results) {
        if (r)
          theta_hat.push_back(*r);
        else
          ++failed;
      }
      const auto st = stats_vs(theta_hat, truth.at(theta_name));
      out.rows.push_back({id, theta_name, "CL2", st.mean, st.sd, st.mse, 0.0, 0.0, st.n,
                          failed});
      continue;
    }

    // Table 2: X observed only.
    struct Rep {
      std::map<std::string, double> g, K, avg;
      bool ok = false;
    };
    std::vector<Rep> results(static_cast<std::size_t>(reps));
#pragma omp parallel for schedule(dynamic)
    for (int rep = 0; rep < reps; ++rep) {
      try {
        const auto triple = simulate_triple(
            model, w, derive_seed(seed, static_cast<std::uint64_t>(id) * 100000 + rep));
        FitSettings fs;
        fs.seed = derive_seed(seed, static_cast<std::uint64_t>(id) * 100000 + 50000 + rep);
        auto& r = results[static_cast<std::size_t>(rep)];
        r.g = fit_min_contrast(triple.retained, family, Stat::Pcf, fs).estimates;
        r.K = fit_min_contrast(triple.retained, family, Stat::K, fs).estimates;
        r.avg = average_estimators(triple.retained, family, bootstrap_count, fs).estimates;
        r.ok = true;
      } catch (const std::exception&) {
      }
    }
    int failed = 0;
    for (const auto& r : results)
      if (!r.ok) ++failed;
    for (const auto& [name, true_value] : truth) {
      for (const std::string method : {std::string("g"), std::string("K"), std::string("AV")}) {
        std::vector<double> values;
        double wg = 0.0, wK = 0.0;
        int n_avg = 0;
        for (const auto& r : results) {
          if (!r.ok) continue;
          if (method == "g") values.push_back(r.g.at(name));
          if (method == "K") values.push_back(r.K.at(name));
          if (method == "AV") {
            values.push_back(r.avg.at(name));
            wg += r.avg.at("lambda_g_" + name);
            wK += r.avg.at("lambda_K_" + name);
            ++n_avg;
          }
        }
        const auto st = stats_vs(values, true_value);
        StudyRow row{id, name, method, st.mean, st.sd, st.mse, 0.0, 0.0, st.n, failed};
        if (method == "AV" && n_avg > 0) {
          row.weight_g = wg / n_avg;
          row.weight_K = wK / n_avg;
        }
        out.rows.push_back(row);
      }
    }
  }
  return out;
}

}  // namespace ipp
