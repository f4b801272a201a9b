#include "ipp/base_process.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ipp/rng.hpp"

namespace ipp {

namespace {

std::vector<Point> poisson_points(double rho, const Window& w, Rng& rng) {
  std::poisson_distribution<int> count(rho * w.volume());
  const int n = count(rng);
  std::vector<Point> pts(static_cast<std::size_t>(n));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto& p : pts) {
    p = {0, 0, 0};
    for (int i = 0; i < w.dim; ++i) p[i] = w.lower[i] + w.side(i) * unif(rng);
  }
  return pts;
}

std::vector<Point> clip(const std::vector<Point>& pts, const Window& w) {
  std::vector<Point> out;
  for (const auto& p : pts)
    if (w.contains(p)) out.push_back(p);
  return out;
}

// Parent realization with marks on the D-dilated window; retained flags per
// the type-I / type-II rules. Mark ties broken by point index.
struct MaternParent {
  std::vector<Point> pts;
  std::vector<double> marks;
};

MaternParent matern_parent(double rho_phi, double D, const Window& w, Rng& rng) {
  MaternParent parent;
  parent.pts = poisson_points(rho_phi, w.dilated(D), rng);
  parent.marks.resize(parent.pts.size());
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (auto& m : parent.marks) m = unif(rng);
  return parent;
}

std::vector<Point> matern_thin(const MaternParent& parent, double D, int dim,
                               bool type2) {
  std::vector<Point> kept;
  const std::size_t n = parent.pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < n && keep; ++j) {
      if (j == i) continue;
      if (distance(parent.pts[i], parent.pts[j], dim) > D) continue;
      if (!type2) {
        keep = false;
      } else {
        const bool j_older = parent.marks[j] < parent.marks[i] ||
                             (parent.marks[j] == parent.marks[i] && j < i);
        if (j_older) keep = false;
      }
    }
    if (keep) kept.push_back(parent.pts[i]);
  }
  return kept;
}

// Fourier modes of the truncated periodic approximation of the DPP kernel on
// the box, with Bernoulli-selected eigenvalues lambda_k = phi0(|k/L|).
struct DppModes {
  std::vector<std::array<int, 3>> k;
  std::vector<double> lambda;
  double mass = 0.0;
};

DppModes dpp_modes(const DppKernel& kernel, const Window& w, double mass_target) {
  const int d = w.dim;
  const double target = mass_target * kernel.variance * w.volume();
  constexpr int kCap = 400;
  int kmax = 4;
  DppModes modes;
  while (true) {
    modes.k.clear();
    modes.lambda.clear();
    modes.mass = 0.0;
    std::array<int, 3> idx{0, 0, 0};
    const int lo = -kmax, hi = kmax;
    for (int k0 = lo; k0 <= hi; ++k0) {
      idx[0] = k0;
      for (int k1 = (d >= 2 ? lo : 0); k1 <= (d >= 2 ? hi : 0); ++k1) {
        idx[1] = k1;
        for (int k2 = (d >= 3 ? lo : 0); k2 <= (d >= 3 ? hi : 0); ++k2) {
          idx[2] = k2;
          double x2 = 0.0;
          for (int i = 0; i < d; ++i) {
            const double f = idx[i] / w.side(i);
            x2 += f * f;
          }
          const double lam = spectral_density(kernel, std::sqrt(x2), d);
          if (lam > 1.0 + 1e-9)
            throw std::invalid_argument("simulate: DPP kernel inadmissible");
          modes.k.push_back(idx);
          modes.lambda.push_back(std::min(lam, 1.0));
          modes.mass += lam;
        }
      }
    }
    if (modes.mass >= target || kmax >= kCap) return modes;
    kmax *= 2;
  }
}

std::vector<Point> simulate_dpp(const DppKernel& kernel, const Window& w,
                                Rng& rng, double mass_target) {
  const int d = w.dim;
  const DppModes modes = dpp_modes(kernel, w, mass_target);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<std::array<int, 3>> sel;
  for (std::size_t j = 0; j < modes.k.size(); ++j)
    if (unif(rng) < modes.lambda[j]) sel.push_back(modes.k[j]);
  const auto n = static_cast<Eigen::Index>(sel.size());
  if (n == 0) return {};

  const double vol = w.volume();
  const double inv_sqrt_vol = 1.0 / std::sqrt(vol);
  int kmax = 0;
  for (const auto& k : sel)
    for (int i = 0; i < d; ++i) kmax = std::max(kmax, std::abs(k[i]));

  // Basis evaluation factorized per axis: v_j = prod_i exp(2 pi i k_ij x_i),
  // with the per-axis powers built by repeated multiplication.
  std::array<std::vector<std::complex<double>>, 3> axis;
  for (int i = 0; i < d; ++i) axis[i].resize(2 * static_cast<std::size_t>(kmax) + 1);
  const auto eval_basis = [&](const Point& p, Eigen::VectorXcd& v) {
    for (int i = 0; i < d; ++i) {
      const double frac = (p[i] - w.lower[i]) / w.side(i);
      const std::complex<double> base = std::polar(1.0, 2.0 * std::numbers::pi * frac);
      auto& ax = axis[i];
      ax[static_cast<std::size_t>(kmax)] = 1.0;
      for (int k = 1; k <= kmax; ++k) {
        ax[static_cast<std::size_t>(kmax + k)] = ax[static_cast<std::size_t>(kmax + k - 1)] * base;
        ax[static_cast<std::size_t>(kmax - k)] = std::conj(ax[static_cast<std::size_t>(kmax + k)]);
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& k = sel[static_cast<std::size_t>(j)];
      std::complex<double> e = axis[0][static_cast<std::size_t>(kmax + k[0])];
      for (int i = 1; i < d; ++i) e *= axis[i][static_cast<std::size_t>(kmax + k[i])];
      v[j] = inv_sqrt_vol * e;
    }
  };
  const auto propose = [&]() {
    Point p{0, 0, 0};
    for (int i = 0; i < d; ++i) p[i] = w.lower[i] + w.side(i) * unif(rng);
    return p;
  };

  // Sequential projection sampling with Gram-Schmidt updates. Proposals are
  // screened in batches with single-precision projections (fast GEMM); any
  // decision within `margin` of the accept threshold is replayed exactly in
  // double precision, so the sampled law is the double-precision one. Pooled
  // proposals stay valid across steps because their cached squared projection
  // is updated whenever a basis column is added (it only ever grows).
  Eigen::MatrixXcd basis(n, n);   // orthonormal columns u_0..u_{i-1}
  Eigen::MatrixXcf basis_f(n, n); // single-precision shadow
  const double norm2 = static_cast<double>(n) / vol;  // |v(x)|^2 is constant
  constexpr Eigen::Index kBatch = 128;
  constexpr double kMargin = 1e-2;
  std::vector<Point> pool(kBatch);
  Eigen::MatrixXcf pool_v(n, kBatch);
  Eigen::VectorXf pool_proj2(kBatch);
  Eigen::Index pool_pos = kBatch;  // empty

  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Point p{};
    constexpr long kMaxAttempts = 2000000;
    long attempt = 0;
    bool accepted = false;
    while (!accepted && attempt < kMaxAttempts) {
      if (pool_pos == kBatch) {
        for (Eigen::Index c = 0; c < kBatch; ++c) {
          pool[static_cast<std::size_t>(c)] = propose();
          eval_basis(pool[static_cast<std::size_t>(c)], v);
          pool_v.col(c) = v.cast<std::complex<float>>();
        }
        if (i > 0)
          pool_proj2 =
              (basis_f.leftCols(i).adjoint() * pool_v).colwise().squaredNorm().transpose();
        else
          pool_proj2.setZero();
        pool_pos = 0;
      }
      const Eigen::Index c = pool_pos++;
      ++attempt;
      const double u = unif(rng);
      const double accept_f = 1.0 - static_cast<double>(pool_proj2[c]) / norm2;
      if (std::abs(accept_f - u) < kMargin) {
        eval_basis(pool[static_cast<std::size_t>(c)], v);
        const double proj2 =
            i > 0 ? (basis.leftCols(i).adjoint() * v).squaredNorm() : 0.0;
        accepted = u < 1.0 - proj2 / norm2;
      } else {
        accepted = u < accept_f;
      }
      if (accepted) p = pool[static_cast<std::size_t>(c)];
    }
    if (!accepted)
      throw std::runtime_error("simulate: DPP rejection sampling stalled");
    pts.push_back(p);
    eval_basis(p, v);
    Eigen::VectorXcd wv = v;
    if (i > 0) {
      const Eigen::VectorXcd coef = basis.leftCols(i).adjoint() * v;
      wv -= basis.leftCols(i) * coef;
    }
    const double nw = wv.norm();
    if (nw < 1e-12) throw std::runtime_error("simulate: DPP Gram-Schmidt collapse");
    basis.col(i) = wv / nw;
    basis_f.col(i) = basis.col(i).cast<std::complex<float>>();
    if (pool_pos < kBatch) {
      const auto rest = Eigen::seq(pool_pos, kBatch - 1);
      pool_proj2(rest) +=
          (basis_f.col(i).adjoint() * pool_v(Eigen::all, rest)).cwiseAbs2().transpose();
    }
  }
  return pts;
}

}  // namespace

BaseProcessModel BaseProcessModel::poisson(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("poisson: rho <= 0");
  BaseProcessModel m;
  m.kind = BaseProcessKind::Poisson;
  m.rho = rho;
  return m;
}

BaseProcessModel BaseProcessModel::dpp(DppKernel kernel) {
  BaseProcessModel m;
  m.kind = BaseProcessKind::Dpp;
  m.kernel = kernel;
  return m;
}

BaseProcessModel BaseProcessModel::matern1(double rho_phi, double D) {
  if (!(rho_phi > 0.0) || !(D > 0.0))
    throw std::invalid_argument("matern1: parameters must be positive");
  BaseProcessModel m;
  m.kind = BaseProcessKind::MaternI;
  m.rho_phi = rho_phi;
  m.hardcore = D;
  return m;
}

BaseProcessModel BaseProcessModel::matern2(double rho_phi, double D) {
  BaseProcessModel m = matern1(rho_phi, D);
  m.kind = BaseProcessKind::MaternII;
  return m;
}

double intensity(const BaseProcessModel& m, int d) {
  switch (m.kind) {
    case BaseProcessKind::Poisson:
      return m.rho;
    case BaseProcessKind::Dpp:
      return m.kernel.variance;
    case BaseProcessKind::MaternI:
      return m.rho_phi *
             std::exp(-m.rho_phi * unit_ball_volume(d) * std::pow(m.hardcore, d));
    case BaseProcessKind::MaternII: {
      const double b = unit_ball_volume(d) * std::pow(m.hardcore, d);
      return (1.0 - std::exp(-m.rho_phi * b)) / b;
    }
  }
  throw std::logic_error("intensity: unknown kind");
}

double pcf(const BaseProcessModel& m, double r, int d) {
  if (r < 0.0) throw std::invalid_argument("pcf: r < 0");
  switch (m.kind) {
    case BaseProcessKind::Poisson:
      return 1.0;
    case BaseProcessKind::Dpp: {
      const double rr = eval_correlation(m.kernel.correlation, r);
      return 1.0 - rr * rr;
    }
    case BaseProcessKind::MaternI: {
      if (r <= m.hardcore) return 0.0;
      return std::exp(m.rho_phi * ball_overlap_volume(r, m.hardcore, d));
    }
    case BaseProcessKind::MaternII: {
      const double D = m.hardcore;
      if (r <= D) return 0.0;
      if (r >= 2.0 * D) return 1.0;
      const double b = unit_ball_volume(d) * std::pow(D, d);
      const double k = ball_overlap_volume(r, D, d);
      const double e1 = 1.0 - std::exp(-m.rho_phi * b);
      const double u = 2.0 * b - k;
      const double inner = 1.0 - (1.0 - std::exp(-m.rho_phi * u)) / (u * e1) * b;
      return 2.0 * b / ((b - k) * e1) * inner;
    }
  }
  throw std::logic_error("pcf: unknown kind");
}

PointPattern simulate(const BaseProcessModel& m, const Window& w, std::uint64_t seed,
                      const SimulateOptions& opts) {
  if (!(w.volume() > 0.0)) throw std::invalid_argument("simulate: empty window");
  auto rng = make_rng(seed);
  PointPattern out(w);
  switch (m.kind) {
    case BaseProcessKind::Poisson:
      out.points = poisson_points(m.rho, w, rng);
      break;
    case BaseProcessKind::Dpp:
      if (!check_dpp_existence(m.kernel, w.dim).admissible)
        throw std::invalid_argument("simulate: DPP kernel inadmissible");
      out.points = simulate_dpp(m.kernel, w, rng, opts.dpp_spectral_mass);
      break;
    case BaseProcessKind::MaternI:
    case BaseProcessKind::MaternII: {
      const MaternParent parent = matern_parent(m.rho_phi, m.hardcore, w, rng);
      out.points = clip(
          matern_thin(parent, m.hardcore, w.dim, m.kind == BaseProcessKind::MaternII),
          w);
      break;
    }
  }
  return out;
}

MaternCoupled simulate_matern_coupled(double rho_phi, double D, const Window& w,
                                      std::uint64_t seed) {
  auto rng = make_rng(seed);
  const MaternParent parent = matern_parent(rho_phi, D, w, rng);
  MaternCoupled out;
  out.type1 = PointPattern(w, clip(matern_thin(parent, D, w.dim, false), w));
  out.type2 = PointPattern(w, clip(matern_thin(parent, D, w.dim, true), w));
  return out;
}

}  // namespace ipp
