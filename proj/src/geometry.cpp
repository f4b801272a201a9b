#include "ipp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ipp {

double distance(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Window::Window(int d, std::array<double, 3> lo, std::array<double, 3> hi)
    : dim(d), lower(lo), upper(hi) {
  if (d < 1 || d > 3) throw std::invalid_argument("Window: dim must be in {1,2,3}");
  for (int i = 0; i < d; ++i)
    if (!(upper[i] > lower[i]))
      throw std::invalid_argument("Window: upper must exceed lower on every axis");
}

double Window::min_side() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < dim; ++i) m = std::min(m, side(i));
  return m;
}

double Window::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim; ++i) v *= side(i);
  return v;
}

bool Window::contains(const Point& p) const {
  for (int i = 0; i < dim; ++i)
    if (p[i] < lower[i] || p[i] > upper[i]) return false;
  return true;
}

Window Window::dilated(double h) const {
  Window w = *this;
  for (int i = 0; i < dim; ++i) {
    w.lower[i] -= h;
    w.upper[i] += h;
  }
  return w;
}

PointPattern::PointPattern(Window w, std::vector<Point> pts)
    : window(w), points(std::move(pts)) {
  for (const auto& p : points)
    if (!window.contains(p))
      throw std::invalid_argument("PointPattern: point outside window");
}

ThinnedPair::ThinnedPair(PointPattern x, PointPattern xbar)
    : retained(std::move(x)), deleted(std::move(xbar)) {
  if (retained.window.dim != deleted.window.dim)
    throw std::invalid_argument("ThinnedPair: windows disagree");
  for (int i = 0; i < retained.window.dim; ++i)
    if (retained.window.lower[i] != deleted.window.lower[i] ||
        retained.window.upper[i] != deleted.window.upper[i])
      throw std::invalid_argument("ThinnedPair: windows disagree");
}

double unit_ball_volume(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
    default: throw std::invalid_argument("unit_ball_volume: dim must be in {1,2,3}");
  }
}

double ball_overlap_volume(double r, double D, int d) {
  if (r < 0.0) throw std::invalid_argument("ball_overlap_volume: r < 0");
  if (!(D > 0.0)) throw std::invalid_argument("ball_overlap_volume: D <= 0");
  if (r >= 2.0 * D) return 0.0;
  switch (d) {
    case 1:
      return 2.0 * D - r;
    case 2:
      return 2.0 * D * D * std::acos(r / (2.0 * D)) -
             0.5 * r * std::sqrt(4.0 * D * D - r * r);
    case 3:
      return (4.0 * std::numbers::pi / 3.0) * D * D * D *
             (1.0 - 3.0 * r / (4.0 * D) + r * r * r / (16.0 * D * D * D));
    default:
      throw std::invalid_argument("ball_overlap_volume: dim must be in {1,2,3}");
  }
}

double min_pairwise_distance(const PointPattern& p) {
  if (p.size() < 2)
    throw std::invalid_argument("min_pairwise_distance: need at least 2 points");
  const int d = p.dim();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      best = std::min(best, distance(p.points[i], p.points[j], d));
  return best;
}

}  // namespace ipp
