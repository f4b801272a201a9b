#pragma once

#include <cstdint>
#include <vector>

#include "ipp/base_process.hpp"
#include "ipp/geometry.hpp"
#include "ipp/selection.hpp"

namespace ipp {

// Interrupted process X = {x in Y : Pi(x) >= U(x)}.
struct InterruptedModel {
  BaseProcessModel base;
  SelectionModel selection;
  int dim = 2;

  InterruptedModel() = default;
  InterruptedModel(BaseProcessModel b, SelectionModel s, int d);

  double q() const { return mean_selection_q(selection, dim); }
  double intensity_x() const { return q() * ipp::intensity(base, dim); }
};

struct SimulatedTriple {
  PointPattern base;           // y
  std::vector<double> pi_at_y; // Pi evaluated exactly at the points of y
  PointPattern retained;       // x
  PointPattern deleted;        // xbar
};

SimulatedTriple simulate_triple(const InterruptedModel& m, const Window& w,
                                std::uint64_t seed, const SimulateOptions& opts = {});

// Theoretical pair correlations of the retained/deleted/cross structure.
double pcf_x(const InterruptedModel& m, double r);
double pcf_xbar(const InterruptedModel& m, double r);
double pcf_cross(const InterruptedModel& m, double r);

double hardcore_radius(const InterruptedModel& m);

}  // namespace ipp
