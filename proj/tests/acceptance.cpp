// End-to-end acceptance checks. Each criterion prints one pass/fail line;
// the process exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "ipp/condsim.hpp"
#include "ipp/inference.hpp"
#include "ipp/rng.hpp"
#include "ipp/summaries.hpp"
#include "ipp/thinning.hpp"

using namespace ipp;
using clk = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, double seconds,
            const std::string& detail) {
  std::printf("[%s] criterion %2d: %-34s (%6.1fs) %s\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), seconds, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct Timer {
  clk::time_point t0 = clk::now();
  double secs() const { return std::chrono::duration<double>(clk::now() - t0).count(); }
};

struct Moments {
  double mean = 0.0, se = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  const auto n = static_cast<double>(v.size());
  for (double x : v) m.mean += x;
  m.mean /= n;
  double var = 0.0;
  for (double x : v) var += (x - m.mean) * (x - m.mean);
  m.se = std::sqrt(var / (n - 1) / n);
  return m;
}

double sd(const std::vector<double>& v) {
  const auto m = moments(v);
  return m.se * std::sqrt(static_cast<double>(v.size()));
}

double mse(const std::vector<double>& v, double truth) {
  double s = 0.0;
  for (double x : v) s += (x - truth) * (x - truth);
  return s / static_cast<double>(v.size());
}

// --- criterion 1: closed-form vs Monte Carlo M0 -----------------------------

void criterion_1() {
  Timer t;
  const auto chi = SelectionModel::chi2_from_q(
      1, 0.5, CorrelationModel(CorrelationFamily::Gaussian, 0.05));
  const auto boo = SelectionModel::boolean_from_q(0.5, RadiusLaw::deterministic(0.05),
                                                  false, 2);
  bool pass = true;
  std::string detail;
  const int n = 1000000;
  int which = 0;
  for (const auto* m : {&chi, &boo}) {
    const double q = mean_selection_q(*m, 2);
    for (double r : {0.0, 0.02, 0.05, 0.1}) {
      const std::vector<Point> locs{{0.3, 0.5, 0.0}, {0.3 + r, 0.5, 0.0}};
      double s = 0.0, s2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto pi =
            sample_pi_at_points(*m, locs, 2, derive_seed(1001 + which, i));
        const double v = pi[0] * pi[1];
        s += v;
        s2 += v * v;
      }
      const double mean = s / n;
      const double se = std::sqrt((s2 / n - mean * mean) / n) / (q * q);
      const double mc = mean / (q * q);
      const double closed = m0(*m, r, 2);
      if (std::abs(mc - closed) >= 3.0 * se + 1e-9) {
        pass = false;
        detail += (which == 0 ? "chi2" : "bool");
        detail += " r=" + std::to_string(r) + " |d|=" +
                  std::to_string(std::abs(mc - closed)) + " 3se=" +
                  std::to_string(3.0 * se) + "; ";
      }
    }
    ++which;
  }
  pass = pass && t.secs() < 120.0;
  report(1, "closed-form vs MC M0", pass, t.secs(), detail);
}

// --- criterion 2: thinning law ----------------------------------------------

void criterion_2() {
  Timer t;
  const Window w = Window::unit_square();
  const int reps = 200;
  bool pass = true;
  std::string detail;
  // models 1&2 share the DPP base realization, 3&4 the Matern one
  std::vector<std::vector<double>> ratio(5), count(5);
  for (int rep = 0; rep < reps; ++rep) {
    const auto dpp_base = simulate(study_model(1).base, w, derive_seed(2100, rep));
    const auto mat_base = simulate(study_model(3).base, w, derive_seed(2300, rep));
    for (int id = 1; id <= 4; ++id) {
      const auto& base = id <= 2 ? dpp_base : mat_base;
      const auto& sel = study_model(id).selection;
      const auto pi = sample_pi_at_points(sel, base.points, 2,
                                          derive_seed(2400 + id, rep));
      auto rng = make_rng(derive_seed(2500 + id, rep));
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      int kept = 0;
      for (double v : pi)
        if (v >= unif(rng)) ++kept;
      if (!base.points.empty())
        ratio[id].push_back(static_cast<double>(kept) / base.size());
      count[id].push_back(static_cast<double>(kept) / w.volume());
    }
  }
  for (int id = 1; id <= 4; ++id) {
    const auto mr = moments(ratio[id]);
    const auto mc = moments(count[id]);
    const double rho_x = 0.5 * intensity(study_model(id).base, 2);
    if (std::abs(mr.mean - 0.5) >= 3.0 * mr.se)
      pass = false, detail += "m" + std::to_string(id) + " ratio; ";
    if (std::abs(mc.mean - rho_x) >= 3.0 * mc.se)
      pass = false, detail += "m" + std::to_string(id) + " count " +
                              std::to_string(mc.mean) + " vs " +
                              std::to_string(rho_x) + "; ";
  }
  pass = pass && t.secs() < 300.0;
  report(2, "thinning law, models 1-4", pass, t.secs(), detail);
}

// --- criterion 3: composite-likelihood recovery ------------------------------

void criterion_3() {
  Timer t;
  const Window w = Window::unit_square();
  const int reps = 100;
  std::vector<double> s_hat, d_hat;
  for (int rep = 0; rep < reps; ++rep) {
    const auto base = simulate(study_model(1).base, w, derive_seed(3100, rep));
    for (int id = 1; id <= 2; ++id) {
      const auto& sel = study_model(id).selection;
      const auto pi = sample_pi_at_points(sel, base.points, 2,
                                          derive_seed(3200 + id, rep));
      auto rng = make_rng(derive_seed(3300 + id, rep));
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      PointPattern x(w), xbar(w);
      for (std::size_t i = 0; i < base.points.size(); ++i)
        (pi[i] >= unif(rng) ? x : xbar).points.push_back(base.points[i]);
      const ThinnedPair pair(x, xbar);
      const double q_hat = fit_q_cl1(pair).estimates.at("q");
      const auto fit = fit_theta_cl2(pair, study_family(id), q_hat);
      (id == 1 ? s_hat : d_hat)
          .push_back(fit.estimates.at(id == 1 ? "s" : "delta0"));
    }
  }
  const auto ms = moments(s_hat);
  const auto md = moments(d_hat);
  const double sd_s = sd(s_hat), sd_d = sd(d_hat);
  const bool pass = ms.mean >= 0.045 && ms.mean <= 0.055 && sd_s <= 0.01 &&
                    md.mean >= 0.046 && md.mean <= 0.054 && sd_d <= 0.008 &&
                    t.secs() < 1200.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "s: %.4f (sd %.4f), delta0: %.4f (sd %.4f)", ms.mean,
                sd_s, md.mean, sd_d);
  report(3, "CL recovery (table 1, scaled)", pass, t.secs(), buf);
}

// --- criterion 4: minimum contrast and averaging -----------------------------

void criterion_4() {
  Timer t;
  const Window w = Window::unit_square();
  const int reps = 25;
  std::vector<double> q2, a2, qg, qK, qavg;
  for (int rep = 0; rep < reps; ++rep) {
    FitSettings fs;
    fs.seed = derive_seed(4400, rep);
    // model 2: g-based recovery of (q, alpha)
    const auto t2 = simulate_triple(study_model(2), w, derive_seed(4100, rep));
    const auto f2 = fit_min_contrast(t2.retained, study_family(2), Stat::Pcf, fs);
    q2.push_back(f2.estimates.at("q"));
    a2.push_back(f2.estimates.at("alpha"));
    // model 4: g, K and averaged estimators of q
    const auto t4 = simulate_triple(study_model(4), w, derive_seed(4200, rep));
    const auto fg = fit_min_contrast(t4.retained, study_family(4), Stat::Pcf, fs);
    const auto fK = fit_min_contrast(t4.retained, study_family(4), Stat::K, fs);
    const auto fa = average_estimators(t4.retained, study_family(4), 20, fs);
    qg.push_back(fg.estimates.at("q"));
    qK.push_back(fK.estimates.at("q"));
    qavg.push_back(fa.estimates.at("q"));
  }
  const auto mq = moments(q2);
  const auto ma = moments(a2);
  const double mse_g = mse(qg, 0.5), mse_K = mse(qK, 0.5), mse_avg = mse(qavg, 0.5);
  const double best = std::min(mse_g, mse_K);
  const bool pass = mq.mean >= 0.45 && mq.mean <= 0.60 && ma.mean >= 0.013 &&
                    ma.mean <= 0.017 && mse_avg <= 1.2 * best && t.secs() < 2700.0;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "m2 q: %.3f alpha: %.4f; m4 MSE(q) g=%.2e K=%.2e avg=%.2e", mq.mean,
                ma.mean, mse_g, mse_K, mse_avg);
  report(4, "min contrast + averaging (table 2)", pass, t.secs(), buf);
}

// --- criterion 5: DPP existence gate ------------------------------------------

void criterion_5() {
  Timer t;
  const CorrelationModel corr(CorrelationFamily::Gaussian, 0.015);
  const double rho_max = 1.0 / (std::numbers::pi * 0.015 * 0.015);
  const auto ok = check_dpp_existence(DppKernel(1000.0, corr), 2);
  const auto bad = check_dpp_existence(DppKernel(1500.0, corr), 2);
  const bool pass = ok.admissible && !bad.admissible &&
                    std::abs(ok.max_intensity - rho_max) <= 1e-6 * rho_max;
  char buf[80];
  std::snprintf(buf, sizeof buf, "rho_max %.6f vs %.6f", ok.max_intensity, rho_max);
  report(5, "DPP existence gate", pass, t.secs(), buf);
}

// --- criterion 6: Matern closed forms ------------------------------------------

void criterion_6() {
  Timer t;
  const double rho_phi = 1736.0, D = 0.015;
  const Window w = Window::unit_square();
  const int reps = 200;
  std::vector<double> n1, n2;
  bool hard_ok = true, subset_ok = true;
  for (int rep = 0; rep < reps; ++rep) {
    const auto pair = simulate_matern_coupled(rho_phi, D, w, derive_seed(6100, rep));
    n1.push_back(static_cast<double>(pair.type1.size()));
    n2.push_back(static_cast<double>(pair.type2.size()));
    if (pair.type1.size() > 1 && !(min_pairwise_distance(pair.type1) > D))
      hard_ok = false;
    if (pair.type2.size() > 1 && !(min_pairwise_distance(pair.type2) > D))
      hard_ok = false;
    for (const auto& p : pair.type1.points) {
      bool found = false;
      for (const auto& q : pair.type2.points)
        if (p == q) { found = true; break; }
      if (!found) subset_ok = false;
    }
  }
  const auto m1 = moments(n1);
  const auto m2 = moments(n2);
  const double b = std::numbers::pi * D * D;
  const double rho1 = rho_phi * std::exp(-rho_phi * b);
  const double rho2 = (1.0 - std::exp(-rho_phi * b)) / b;
  const bool pass = std::abs(m1.mean - rho1) < 3.0 * m1.se &&
                    std::abs(m2.mean - rho2) < 3.0 * m2.se && hard_ok && subset_ok;
  char buf[160];
  std::snprintf(buf, sizeof buf, "n1 %.1f vs %.1f, n2 %.1f vs %.1f, hardcore %s, subset %s",
                m1.mean, rho1, m2.mean, rho2, hard_ok ? "ok" : "BAD",
                subset_ok ? "ok" : "BAD");
  report(6, "Matern closed forms + coupling", pass, t.secs(), buf);
}

// --- criterion 7: k_d hit-or-miss oracle ----------------------------------------

void criterion_7() {
  Timer t;
  auto rng = make_rng(7007);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  bool pass = true;
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + trial % 3;
    const double D = 0.05 + unif(rng);
    const double r = 2.2 * D * unif(rng);
    auto mc_rng = make_rng(derive_seed(7100, trial));
    std::uniform_real_distribution<double> box(-D, D);
    const int n = 1000000 / (d == 1 ? 2 : 1);
    int inside = 0, hits = 0;
    for (int i = 0; i < n; ++i) {
      double p0 = box(mc_rng), p1 = d >= 2 ? box(mc_rng) : 0.0,
             p2 = d >= 3 ? box(mc_rng) : 0.0;
      if (p0 * p0 + p1 * p1 + p2 * p2 > D * D) continue;
      ++inside;
      const double m0x = p0 - r;
      if (m0x * m0x + p1 * p1 + p2 * p2 <= D * D) ++hits;
    }
    const double ball = unit_ball_volume(d) * std::pow(D, d);
    const double phat = static_cast<double>(hits) / inside;
    const double est = ball * phat;
    const double se = ball * std::sqrt(phat * (1.0 - phat) / inside);
    if (std::abs(est - ball_overlap_volume(r, D, d)) >= 3.0 * se + 1e-12) ++bad;
  }
  // ~0.27% of triples are expected outside 3 se by chance
  pass = bad <= 12 && t.secs() < 180.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d/1000 outside 3se", bad);
  report(7, "k_d overlap vs hit-or-miss MC", pass, t.secs(), buf);
}

// --- criterion 8: algebraic identities -------------------------------------------

void criterion_8() {
  Timer t;
  bool pass = true;
  std::string detail;
  for (int id = 1; id <= 4; ++id) {
    const auto m = study_model(id);
    const double q = m.q();
    for (int j = 1; j <= 1000; ++j) {
      const double r = 0.3 * j / 1000.0;
      const double gy = pcf(m.base, r, 2);
      const double lhs = q * q * pcf_x(m, r) +
                         2.0 * q * (1.0 - q) * pcf_cross(m, r) +
                         (1.0 - q) * (1.0 - q) * pcf_xbar(m, r);
      if (std::abs(lhs - gy) > 1e-12 * std::max(1.0, std::abs(gy))) {
        pass = false;
        detail = "pcf identity m" + std::to_string(id);
        break;
      }
    }
  }
  auto rng = make_rng(808);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  for (int i = 0; i < 1000; ++i) {
    const double q = unif(rng);
    const double M = 1.0 + (1.0 / q - 1.0) * unif(rng);
    const double sum = q * q * M + (1.0 - 2.0 * q + q * q * M) + 2.0 * (q - q * q * M);
    if (std::abs(sum - 1.0) > 1e-12) {
      pass = false;
      detail += " pair-prob sum";
      break;
    }
  }
  report(8, "pcf + pair-probability identities", pass, t.secs(), detail);
}

// --- criterion 9: MCMC correctness -------------------------------------------------

double ks_p_value(std::vector<double> z, double sigma) {
  std::sort(z.begin(), z.end());
  const auto n = static_cast<double>(z.size());
  double dmax = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-z[i] / (sigma * std::numbers::sqrt2));
    dmax = std::max(dmax, std::abs(cdf - (i + 1) / n));
    dmax = std::max(dmax, std::abs(cdf - i / n));
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * dmax;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * (k % 2 == 1 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::min(1.0, std::max(0.0, p));
}

void criterion_9() {
  Timer t;
  const double kappa = 2.0;
  const FieldSpec field(kappa, CorrelationModel(CorrelationFamily::Gaussian, 0.05));
  // data points far apart: Gamma = kappa I to machine precision, all retained
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.push_back({static_cast<double>(10 * i), 0.0, 0.0});
  const LatentEnergy energy(field, pts, pts.size(), 1);
  McmcSettings ms;
  ms.retained_draws = 10000;
  ms.thin = 10;
  ms.seed = 909;
  const auto draws = gibbs_sample_latent(energy, ms);
  std::vector<double> z;
  z.reserve(draws.draws.size());
  for (const auto& d : draws.draws) z.push_back(d[3]);
  const double p = ks_p_value(std::move(z), std::sqrt(kappa / (1.0 + kappa)));

  // conditional field reproduces Pi at data points placed on grid nodes
  const Window w = Window::unit_square();
  const std::vector<Point> obs{{0.25, 0.25, 0}, {0.5, 0.75, 0}, {1.0, 0.0, 0}};
  const std::vector<double> zval{0.3, -1.4, 0.9};
  const GridField zf = condition_on_values(field, obs, zval, w, {5, 5, 1}, 4242);
  double max_err = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto ix = static_cast<std::size_t>(std::lround(obs[i][0] * 4));
    const auto iy = static_cast<std::size_t>(std::lround(obs[i][1] * 4));
    const double pi_grid = std::exp(-0.5 * zf.values[iy * 5 + ix] * zf.values[iy * 5 + ix]);
    const double pi_true = std::exp(-0.5 * zval[i] * zval[i]);
    max_err = std::max(max_err, std::abs(pi_grid - pi_true));
  }
  const bool pass = p > 0.01 && max_err < 1e-8 && t.secs() < 300.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "KS p=%.3f, Pi reproduction err=%.2e", p, max_err);
  report(9, "MCMC marginals + conditioning", pass, t.secs(), buf);
}

// --- criterion 10: envelope coverage -------------------------------------------------

void criterion_10() {
  Timer t;
  const auto model = study_model(4);
  const Window w = Window::unit_square();
  const auto grid = make_r_grid(0.1, 10);
  const std::size_t j_star = 7;  // fixed r = 0.08
  const int meta = 200;
  int covered = 0;
  for (int m = 0; m < meta; ++m) {
    const auto obs =
        simulate_triple(model, w, derive_seed(10100, m)).retained;
    const auto gen = [&](int i) {
      return simulate_triple(model, w, derive_seed(10200 + m, i)).retained;
    };
    const auto env = envelopes(obs, gen, Stat::K, grid, 99, 0.95);
    if (env.values[j_star] >= env.lo[j_star] && env.values[j_star] <= env.hi[j_star])
      ++covered;
  }
  const double cov = 100.0 * covered / meta;
  const bool pass = cov >= 90.0 && cov <= 100.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "coverage %.1f%% at r=%.2f", cov, grid[j_star]);
  report(10, "pointwise envelope coverage", pass, t.secs(), buf);
}

}  // namespace

int main() {
  criterion_5();
  criterion_8();
  criterion_1();
  criterion_7();
  criterion_6();
  criterion_9();
  criterion_2();
  criterion_3();
  criterion_10();
  criterion_4();
  if (g_failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
