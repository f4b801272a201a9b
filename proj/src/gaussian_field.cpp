#include "ipp/gaussian_field.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "ipp/rng.hpp"

namespace ipp {

namespace {

constexpr std::size_t kDenseNodeCap = 8192;
constexpr std::size_t kGridNodeCap = 1u << 22;

Eigen::MatrixXd covariance_matrix(const FieldSpec& spec,
                                  const std::vector<Point>& pts, int dim) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd gamma(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gamma(i, i) = spec.variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double c = spec.covariance(distance(pts[i], pts[j], dim));
      gamma(i, j) = c;
      gamma(j, i) = c;
    }
  }
  return gamma;
}

// LLT with a jitter ladder from 1e-10*kappa to 1e-6*kappa.
Eigen::MatrixXd factorize_with_jitter(Eigen::MatrixXd gamma, double kappa) {
  for (double jitter : {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
    Eigen::MatrixXd g = gamma;
    if (jitter > 0.0) g.diagonal().array() += jitter * kappa;
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw std::runtime_error("gaussian field: covariance not factorizable after max jitter");
}

std::vector<double> dense_draw(const FieldSpec& spec, const std::vector<Point>& pts,
                               int dim, std::uint64_t seed) {
  if (pts.size() > kDenseNodeCap)
    throw std::runtime_error("gaussian field: dense draw exceeds node cap");
  const Eigen::MatrixXd L = factorize_with_jitter(covariance_matrix(spec, pts, dim),
                                                  spec.variance);
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd eps(L.rows());
  for (Eigen::Index i = 0; i < eps.size(); ++i) eps[i] = normal(rng);
  const Eigen::VectorXd z = L * eps;
  return {z.data(), z.data() + z.size()};
}

struct Embedding {
  std::array<int, 3> m{1, 1, 1};
  int rank = 1;
  std::size_t total = 1;
  std::vector<double> sqrt_eig;  // empty if not nonnegative definite
};

// Torus covariance eigenvalues for minimal-padding-factor-2 embedding.
Embedding build_embedding(const FieldSpec& spec, const Window& w,
                          const std::array<int, 3>& res) {
  Embedding e;
  e.rank = w.dim;
  std::array<double, 3> h{0, 0, 0};
  for (int i = 0; i < w.dim; ++i) {
    h[i] = w.side(i) / (res[i] - 1);
    e.m[i] = 2 * (res[i] - 1);
    e.total *= static_cast<std::size_t>(e.m[i]);
  }
  std::vector<std::complex<double>> c(e.total);
  for (std::size_t flat = 0; flat < e.total; ++flat) {
    std::size_t rem = flat;
    double r2 = 0.0;
    for (int i = 0; i < w.dim; ++i) {
      const int j = static_cast<int>(rem % e.m[i]);
      rem /= e.m[i];
      const double d = h[i] * std::min(j, e.m[i] - j);
      r2 += d * d;
    }
    c[flat] = spec.covariance(std::sqrt(r2));
  }
  // FFTW uses row-major index order; our flat index is x-fastest, so pass
  // the dimensions reversed.
  int n[3];
  for (int i = 0; i < e.rank; ++i) n[i] = e.m[e.rank - 1 - i];
  fftw_plan plan = fftw_plan_dft(e.rank, n, reinterpret_cast<fftw_complex*>(c.data()),
                                 reinterpret_cast<fftw_complex*>(c.data()),
                                 FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  double max_eig = 0.0, min_eig = 0.0;
  for (const auto& v : c) {
    max_eig = std::max(max_eig, v.real());
    min_eig = std::min(min_eig, v.real());
  }
  // Tiny negative eigenvalues are roundoff; anything material means the
  // embedding genuinely fails and we fall back to dense factorization.
  if (min_eig < -1e-9 * max_eig) return e;
  e.sqrt_eig.resize(e.total);
  for (std::size_t i = 0; i < e.total; ++i)
    e.sqrt_eig[i] = std::sqrt(std::max(0.0, c[i].real()));
  return e;
}

}  // namespace

FieldSpec::FieldSpec(double kappa, CorrelationModel corr)
    : variance(kappa), correlation(corr) {
  if (!(variance > 0.0)) throw std::invalid_argument("FieldSpec: variance <= 0");
}

GridField::GridField(Window w, std::array<int, 3> res) : window(w), resolution(res) {
  for (int i = 0; i < window.dim; ++i)
    if (resolution[i] < 2) throw std::invalid_argument("GridField: resolution < 2");
  for (int i = window.dim; i < 3; ++i) resolution[i] = 1;
  values.assign(node_count(), 0.0);
}

std::size_t GridField::node_count() const {
  std::size_t n = 1;
  for (int i = 0; i < window.dim; ++i) n *= static_cast<std::size_t>(resolution[i]);
  return n;
}

Point GridField::node(std::size_t flat_index) const {
  Point p{0, 0, 0};
  std::size_t rem = flat_index;
  for (int i = 0; i < window.dim; ++i) {
    const auto j = rem % static_cast<std::size_t>(resolution[i]);
    rem /= static_cast<std::size_t>(resolution[i]);
    p[i] = window.lower[i] + window.side(i) * static_cast<double>(j) / (resolution[i] - 1);
  }
  return p;
}

std::vector<Point> GridField::nodes() const {
  std::vector<Point> out(node_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(i);
  return out;
}

std::vector<double> sample_at_points(const FieldSpec& spec,
                                     const std::vector<Point>& locations, int dim,
                                     std::uint64_t seed) {
  if (locations.empty()) return {};
  return dense_draw(spec, locations, dim, seed);
}

GridField sample_grid(const FieldSpec& spec, const Window& window,
                      std::array<int, 3> resolution, std::uint64_t seed) {
  GridField field(window, resolution);
  const std::size_t n = field.node_count();
  if (n > kGridNodeCap) throw std::runtime_error("sample_grid: grid exceeds memory cap");

  if (n <= 64 * 64) {
    field.values = dense_draw(spec, field.nodes(), window.dim, seed);
    return field;
  }

  const Embedding e = build_embedding(spec, window, field.resolution);
  if (e.sqrt_eig.empty()) {
    field.values = dense_draw(spec, field.nodes(), window.dim, seed);
    return field;
  }

  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::complex<double>> xi(e.total);
  for (auto& v : xi) v = {normal(rng), normal(rng)};
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(e.total));
  for (std::size_t i = 0; i < e.total; ++i) xi[i] *= e.sqrt_eig[i] * inv_sqrt_m;
  int nfft[3];
  for (int i = 0; i < e.rank; ++i) nfft[i] = e.m[e.rank - 1 - i];
  fftw_plan plan = fftw_plan_dft(e.rank, nfft, reinterpret_cast<fftw_complex*>(xi.data()),
                                 reinterpret_cast<fftw_complex*>(xi.data()),
                                 FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat, src = 0, stride = 1;
    for (int i = 0; i < window.dim; ++i) {
      const auto j = rem % static_cast<std::size_t>(field.resolution[i]);
      rem /= static_cast<std::size_t>(field.resolution[i]);
      src += j * stride;
      stride *= static_cast<std::size_t>(e.m[i]);
    }
    field.values[flat] = xi[src].real();
  }
  return field;
}

GridField condition_on_values(const FieldSpec& spec,
                              const std::vector<Point>& locations,
                              const std::vector<double>& values, const Window& window,
                              std::array<int, 3> resolution, std::uint64_t seed) {
  if (locations.size() != values.size())
    throw std::invalid_argument("condition_on_values: size mismatch");
  GridField field(window, resolution);
  if (locations.empty()) return sample_grid(spec, window, resolution, seed);

  const std::size_t n_obs = locations.size();
  const std::size_t n_grid = field.node_count();
  if (n_obs + n_grid > kDenseNodeCap)
    throw std::runtime_error("condition_on_values: joint draw exceeds node cap");

  // Joint unconditional draw at (obs, grid) keeps the kriging residual exact.
  std::vector<Point> all = locations;
  const auto nodes = field.nodes();
  all.insert(all.end(), nodes.begin(), nodes.end());
  const std::vector<double> star = dense_draw(spec, all, window.dim, seed);

  const auto no = static_cast<Eigen::Index>(n_obs);
  Eigen::MatrixXd gamma = covariance_matrix(spec, locations, window.dim);
  gamma.diagonal().array() += 1e-10 * spec.variance;
  Eigen::VectorXd resid(no);
  for (Eigen::Index i = 0; i < no; ++i) resid[i] = values[i] - star[i];
  const Eigen::VectorXd weights = Eigen::LDLT<Eigen::MatrixXd>(gamma).solve(resid);

  for (std::size_t g = 0; g < n_grid; ++g) {
    double corr = 0.0;
    bool pinned = false;
    for (std::size_t j = 0; j < n_obs; ++j) {
      const double dist = distance(nodes[g], locations[j], window.dim);
      // the conditional law at an observation site is a point mass
      if (dist < 1e-12 * std::max(1.0, window.min_side())) {
        field.values[g] = values[j];
        pinned = true;
        break;
      }
      corr += spec.covariance(dist) * weights[static_cast<Eigen::Index>(j)];
    }
    if (!pinned) field.values[g] = star[n_obs + g] + corr;
  }
  return field;
}

}  // namespace ipp
