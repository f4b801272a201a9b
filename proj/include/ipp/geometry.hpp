#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ipp {

// A point in dimension d <= 3; unused coordinates stay zero.
using Point = std::array<double, 3>;

double distance(const Point& a, const Point& b, int dim);

// Axis-aligned box window.
struct Window {
  int dim = 2;
  std::array<double, 3> lower{0.0, 0.0, 0.0};
  std::array<double, 3> upper{1.0, 1.0, 1.0};

  Window() = default;
  Window(int d, std::array<double, 3> lo, std::array<double, 3> hi);

  static Window unit_square() { return Window(2, {0, 0, 0}, {1, 1, 0}); }

  double side(int i) const { return upper[i] - lower[i]; }
  double min_side() const;
  double volume() const;
  bool contains(const Point& p) const;
  // Window grown by h on every side (for edge-free parent simulation).
  Window dilated(double h) const;
};

struct PointPattern {
  Window window;
  std::vector<Point> points;

  PointPattern() = default;
  explicit PointPattern(Window w) : window(w) {}
  PointPattern(Window w, std::vector<Point> pts);

  std::size_t size() const { return points.size(); }
  int dim() const { return window.dim; }
};

// Retained/deleted split of an observed base pattern, sharing one window.
struct ThinnedPair {
  PointPattern retained;
  PointPattern deleted;

  ThinnedPair() = default;
  ThinnedPair(PointPattern x, PointPattern xbar);
  std::size_t total() const { return retained.size() + deleted.size(); }
};

// Volume of the d-dimensional unit ball (d in {1,2,3}).
double unit_ball_volume(int d);

// k_d(r, D): volume of the intersection of two d-balls of radius D whose
// centres are r apart. Zero for r >= 2D.
double ball_overlap_volume(double r, double D, int d);

double min_pairwise_distance(const PointPattern& p);

}  // namespace ipp
