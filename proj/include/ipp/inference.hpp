#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ipp/summaries.hpp"
#include "ipp/thinning.hpp"

namespace ipp {

enum class FitMethod { CL1, CL2, MC_g, MC_K, AVG };

std::string method_name(FitMethod m);

struct FitSettings {
  double r_l = 0.0;        // 0 means "window min side / 100"
  double r_u = 0.0;        // 0 means "window min side / 4"
  double contrast_power_g = 1.0;
  double contrast_power_K = 0.5;
  int contrast_grid = 512;
  int restarts = 8;
  double cl2_range = -1.0;  // pair-distance cutoff; <0 means r_u, 0 disables
  std::uint64_t seed = 0;
};

struct FitResult {
  std::map<std::string, double> estimates;
  double objective = 0.0;
  FitMethod method = FitMethod::CL1;
  FitSettings settings;
  bool converged = false;
  int iterations = 0;
};

// Parametric family being fitted when only X is observed. The base hard-core
// radius (Matern case) is plugged in from the data, not optimized.
struct FitFamily {
  BaseProcessKind base_kind = BaseProcessKind::Dpp;
  CorrelationFamily dpp_family = CorrelationFamily::Gaussian;
  double dpp_shape = 1.0;
  SelectionKind selection_kind = SelectionKind::Chi2;
  int chi2_k = 1;
  CorrelationFamily chi2_family = CorrelationFamily::Gaussian;
  double chi2_shape = 1.0;
  bool boolean_complement = false;
};

// Names of the free parameters of a family, in optimizer order
// ("q", then "alpha" for a DPP base, then "s" or "delta0").
std::vector<std::string> free_parameters(const FitFamily& family);

// Instantiate the full interrupted model at a parameter point (uses
// rho_hat_x = n/|W| and hardcore_D where applicable).
InterruptedModel instantiate(const FitFamily& family,
                             const std::map<std::string, double>& params,
                             double rho_hat_x, double hardcore_D, int dim);

// --- Observed (X, Y): composite likelihoods -------------------------------

double log_cl1(const ThinnedPair& t, double q);
double log_cl2(const ThinnedPair& t, const SelectionModel& selection, int dim,
               double range_cutoff);

FitResult fit_q_cl1(const ThinnedPair& t);

// Maximizes CL2 over the selection parameter with q fixed. Whittle-Matern
// shape is profiled over {0.25, 0.5, 1, 2, 5}; chi2 k is taken as fixed.
FitResult fit_theta_cl2(const ThinnedPair& t, const FitFamily& family, double q_fixed,
                        const FitSettings& settings = {});

// --- Observed X only: minimum contrast ------------------------------------

FitResult fit_min_contrast(const PointPattern& x, const FitFamily& family, Stat stat,
                           const FitSettings& settings = {});

// Optimal linear combination of the g- and K-contrast estimators with the
// MSE matrix estimated by parametric bootstrap from the g fit.
FitResult average_estimators(const PointPattern& x, const FitFamily& family,
                             int bootstrap_count = 100, const FitSettings& settings = {});

double estimate_hardcore_D(const PointPattern& x);

// --- Simulation study harness ---------------------------------------------

// Models 1-4 on the unit square (d = 2).
InterruptedModel study_model(int id);
FitFamily study_family(int id);

struct StudyRow {
  int model = 0;
  std::string parameter;
  std::string method;
  double mean = 0.0;
  double sd = 0.0;
  double mse = 0.0;
  double weight_g = 0.0;  // AVG rows only
  double weight_K = 0.0;
  int n_used = 0;
  int n_failed = 0;
};

struct StudyTable {
  int table = 1;
  std::vector<StudyRow> rows;
  std::string to_csv() const;
  std::string to_markdown() const;
};

enum class StudyRegime { XY, Xonly };

StudyTable run_simulation_study(int table, int reps, std::uint64_t seed,
                                const std::vector<int>& models = {1, 2, 3, 4},
                                int bootstrap_count = 100);

// --- Small optimizers (exposed for tests) ----------------------------------

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-10);

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

NelderMeadResult nelder_mead_min(const std::function<double(const std::vector<double>&)>& f,
                                 const std::vector<double>& x0, double step,
                                 int max_iter = 500, double tol = 1e-10);

}  // namespace ipp
