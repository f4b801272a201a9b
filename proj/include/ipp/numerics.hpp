#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace ipp {

// Recursive adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-8, int max_depth = 30);

// 64-node Gauss-Legendre quadrature on [a, b].
double gauss_legendre_64(const std::function<double(double)>& f, double a, double b);

}  // namespace ipp
