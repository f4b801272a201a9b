// Command-line front end: simulate, summary, fit, envelope, condsim, study.

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ipp/condsim.hpp"
#include "ipp/inference.hpp"
#include "ipp/io.hpp"
#include "ipp/rng.hpp"
#include "ipp/summaries.hpp"
#include "ipp/thinning.hpp"

using nlohmann::json;
using namespace ipp;

namespace {

// Stable 64-bit FNV-1a, used to fingerprint configs in the run manifest.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Window parse_window(const std::vector<double>& v) {
  if (v.size() != 2 && v.size() != 4 && v.size() != 6)
    throw CLI::ValidationError("--window", "expects 2, 4 or 6 numbers (lo..., hi...)");
  const int d = static_cast<int>(v.size()) / 2;
  std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int c = 0; c < d; ++c) {
    lo[static_cast<std::size_t>(c)] = v[static_cast<std::size_t>(c)];
    hi[static_cast<std::size_t>(c)] = v[static_cast<std::size_t>(d + c)];
  }
  return Window(d, lo, hi);
}

std::string fit_to_json(const FitResult& r) {
  json j;
  j["method"] = method_name(r.method);
  j["estimates"] = r.estimates;
  j["objective"] = r.objective;
  j["converged"] = r.converged;
  return j.dump(2) + "\n";
}

std::string summary_to_csv(const SummaryFunction& s) {
  std::ostringstream os;
  os.precision(12);
  os << "r," << stat_name(s.stat);
  if (s.has_envelopes()) os << ",lo,hi";
  os << '\n';
  for (std::size_t i = 0; i < s.r_grid.size(); ++i) {
    os << s.r_grid[i] << ',' << s.values[i];
    if (s.has_envelopes()) os << ',' << s.lo[i] << ',' << s.hi[i];
    os << '\n';
  }
  return os.str();
}

void write_manifest(const std::string& dir, const std::string& command,
                    std::uint64_t seed, const std::string& config_text,
                    const std::vector<std::string>& outputs) {
  json j;
  j["command"] = command;
  j["seed"] = seed;
  std::ostringstream hex;
  hex << std::hex << fnv1a(config_text);
  j["config_hash"] = hex.str();
  j["outputs"] = outputs;
  write_text_file(dir + "/meta.json", j.dump(2) + "\n");
}

FitFamily family_from_flags(const std::string& base, const std::string& dpp_family,
                            const std::string& selection, int chi2_k,
                            const std::string& chi2_family, bool complement) {
  FitFamily f;
  if (base == "poisson") f.base_kind = BaseProcessKind::Poisson;
  else if (base == "dpp") f.base_kind = BaseProcessKind::Dpp;
  else if (base == "matern1") f.base_kind = BaseProcessKind::MaternI;
  else if (base == "matern2") f.base_kind = BaseProcessKind::MaternII;
  else throw CLI::ValidationError("--base", "unknown base process: " + base);
  f.dpp_family = family_from_name(dpp_family);
  if (selection == "chi2") f.selection_kind = SelectionKind::Chi2;
  else if (selection == "boolean") f.selection_kind = SelectionKind::Boolean;
  else throw CLI::ValidationError("--selection", "unknown selection type: " + selection);
  f.chi2_k = chi2_k;
  f.chi2_family = family_from_name(chi2_family);
  f.boolean_complement = complement;
  return f;
}

int run(int argc, char** argv) {
  CLI::App app{"interrupted spatial point processes: simulation and inference"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker thread count (default: all cores)")
      ->envname("IPP_THREADS");

  // --- simulate ---
  auto* sim = app.add_subcommand("simulate", "draw one realization of a model");
  std::string sim_config, sim_out = ".";
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false, sim_full = false;
  sim->add_option("-c,--config", sim_config, "model JSON")->required();
  sim->add_option("-o,--out", sim_out, "output directory");
  sim->add_option("--seed", sim_seed, "override the config seed")
      ->each([&](const std::string&) { sim_seed_set = true; });
  sim->add_flag("--full", sim_full, "also write the base pattern, deleted points and Pi(y)");

  // --- summary ---
  auto* sum = app.add_subcommand("summary", "empirical summary statistic of a pattern");
  std::string sum_in, sum_stat = "g", sum_out;
  std::vector<double> sum_window{0, 0, 1, 1};
  double sum_rmax = 0.0, sum_bw = 0.0;
  int sum_bins = 100;
  sum->add_option("-i,--input", sum_in, "pattern CSV")->required();
  sum->add_option("--window", sum_window, "window lo..., hi...")->expected(2, 6);
  sum->add_option("--stat", sum_stat, "g|K|F|G|J");
  sum->add_option("--rmax", sum_rmax, "largest distance (default: min side / 4)");
  sum->add_option("--bins", sum_bins, "grid size");
  sum->add_option("--bandwidth", sum_bw, "pcf kernel bandwidth (default: Stoyan's rule)");
  sum->add_option("-o,--out", sum_out, "output CSV (default: stdout)");

  // --- fit ---
  auto* fit = app.add_subcommand("fit", "parameter estimation");
  std::string fit_in, fit_deleted, fit_out, fit_method = "g";
  std::string fit_base = "dpp", fit_dppfam = "gaussian", fit_sel = "chi2",
              fit_chi2fam = "gaussian";
  std::vector<double> fit_window{0, 0, 1, 1};
  int fit_chi2k = 1, fit_restarts = 8, fit_bootstrap = 100;
  bool fit_complement = false;
  double fit_rmin = 0.0, fit_rmax = 0.0;
  std::uint64_t fit_seed = 0;
  fit->add_option("-i,--input", fit_in, "retained pattern CSV")->required();
  fit->add_option("--deleted", fit_deleted, "deleted pattern CSV (cl1/cl2 methods)");
  fit->add_option("--window", fit_window, "window lo..., hi...")->expected(2, 6);
  fit->add_option("--method", fit_method, "cl1|cl2|g|K|avg");
  fit->add_option("--base", fit_base, "poisson|dpp|matern1|matern2");
  fit->add_option("--dpp-family", fit_dppfam, "gaussian|exponential|whittle_matern");
  fit->add_option("--selection", fit_sel, "chi2|boolean");
  fit->add_option("--chi2-k", fit_chi2k, "chi-squared degrees of freedom");
  fit->add_option("--chi2-family", fit_chi2fam, "chi-squared field correlation family");
  fit->add_flag("--complement", fit_complement, "Boolean complement selection");
  fit->add_option("--rmin", fit_rmin, "lower contrast limit");
  fit->add_option("--rmax", fit_rmax, "upper contrast limit");
  fit->add_option("--restarts", fit_restarts, "optimizer restarts");
  fit->add_option("--bootstrap", fit_bootstrap, "bootstrap replicates (avg method)");
  fit->add_option("--seed", fit_seed, "optimizer/bootstrap seed");
  fit->add_option("-o,--out", fit_out, "output JSON (default: stdout)");

  // --- envelope ---
  auto* env = app.add_subcommand("envelope", "pointwise simulation envelopes");
  std::string env_config, env_in, env_stat = "g", env_out;
  int env_nsim = 99, env_bins = 100;
  double env_level = 0.95, env_rmax = 0.0;
  std::uint64_t env_seed = 0;
  env->add_option("-c,--config", env_config, "model JSON to simulate from")->required();
  env->add_option("-i,--input", env_in, "observed pattern CSV")->required();
  env->add_option("--stat", env_stat, "g|K|F|G|J");
  env->add_option("--nsim", env_nsim, "simulated patterns");
  env->add_option("--level", env_level, "envelope level");
  env->add_option("--rmax", env_rmax, "largest distance (default: min side / 4)");
  env->add_option("--bins", env_bins, "grid size");
  env->add_option("--seed", env_seed, "simulation seed");
  env->add_option("-o,--out", env_out, "output CSV (default: stdout)");

  // --- condsim ---
  auto* cond = app.add_subcommand("condsim",
                                  "posterior mean selection field given retained/deleted");
  std::string cond_config, cond_in, cond_deleted, cond_out, cond_pgm;
  int cond_grid = 64, cond_draws = 1000, cond_burn = -1, cond_thin = 10;
  std::uint64_t cond_seed = 0;
  cond->add_option("-c,--config", cond_config, "model JSON (chi2 selection, k = 1)")
      ->required();
  cond->add_option("-i,--input", cond_in, "retained pattern CSV")->required();
  cond->add_option("--deleted", cond_deleted, "deleted pattern CSV")->required();
  cond->add_option("--grid", cond_grid, "raster resolution per side");
  cond->add_option("--draws", cond_draws, "retained MCMC draws");
  cond->add_option("--burn-in", cond_burn, "burn-in sweeps (default: 10n)");
  cond->add_option("--thin", cond_thin, "sweeps between draws");
  cond->add_option("--seed", cond_seed, "MCMC seed");
  cond->add_option("-o,--out", cond_out, "output raster CSV (default: stdout)");
  cond->add_option("--pgm", cond_pgm, "also write a PGM image");

  // --- study ---
  auto* study = app.add_subcommand("study", "replicated estimation study");
  int study_table = 2, study_reps = 100, study_bootstrap = 100;
  std::vector<int> study_models{1, 2, 3, 4};
  std::string study_out;
  bool study_md = false;
  std::uint64_t study_seed = 0;
  study->add_option("--table", study_table, "1 (X and Y observed) or 2 (X only)");
  study->add_option("--reps", study_reps, "replicates per model");
  study->add_option("--models", study_models, "model ids in 1..4");
  study->add_option("--bootstrap", study_bootstrap, "bootstrap replicates for averaging");
  study->add_flag("--markdown", study_md, "emit Markdown instead of CSV");
  study->add_option("--seed", study_seed, "study seed");
  study->add_option("-o,--out", study_out, "output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
  const auto emit = [](const std::string& out, const std::string& text) {
    if (out.empty())
      std::cout << text;
    else
      write_text_file(out, text);
  };

  if (*sim) {
    const std::string text = read_text_file(sim_config);
    ModelConfig cfg = model_from_json(text);
    if (sim_seed_set) cfg.seed = sim_seed;
    std::filesystem::create_directories(sim_out);
    const auto triple = simulate_triple(cfg.model, cfg.window, cfg.seed);
    write_pattern_csv(sim_out + "/x.csv", triple.retained);
    std::vector<std::string> outputs{"x.csv"};
    if (sim_full) {
      write_pattern_csv(sim_out + "/y.csv", triple.base);
      write_pattern_csv(sim_out + "/xbar.csv", triple.deleted);
      std::ostringstream pi;
      pi.precision(12);
      pi << "pi\n";
      for (double v : triple.pi_at_y) pi << v << '\n';
      write_text_file(sim_out + "/pi.csv", pi.str());
      outputs.insert(outputs.end(), {"y.csv", "xbar.csv", "pi.csv"});
    }
    write_manifest(sim_out, "simulate", cfg.seed, text, outputs);
    return 0;
  }

  if (*sum) {
    const Window w = parse_window(sum_window);
    const PointPattern p = read_pattern_csv(sum_in, w);
    const double rmax = sum_rmax > 0 ? sum_rmax : w.min_side() / 4.0;
    const auto grid = make_r_grid(rmax, sum_bins);
    const Stat stat = stat_from_name(sum_stat);
    SummaryFunction s;
    if (stat == Stat::Pcf && sum_bw > 0)
      s = estimate_pcf(p, grid, sum_bw);
    else
      s = estimate_stat(stat, p, grid);
    emit(sum_out, summary_to_csv(s));
    return 0;
  }

  if (*fit) {
    const Window w = parse_window(fit_window);
    const PointPattern x = read_pattern_csv(fit_in, w);
    const FitFamily family = family_from_flags(fit_base, fit_dppfam, fit_sel, fit_chi2k,
                                               fit_chi2fam, fit_complement);
    FitSettings settings;
    settings.r_l = fit_rmin;
    settings.r_u = fit_rmax;
    settings.restarts = fit_restarts;
    settings.seed = fit_seed;
    FitResult result;
    if (fit_method == "cl1" || fit_method == "cl2") {
      if (fit_deleted.empty())
        throw CLI::ValidationError("--deleted", "cl1/cl2 need the deleted pattern");
      const ThinnedPair pair(x, read_pattern_csv(fit_deleted, w));
      result = fit_q_cl1(pair);
      if (fit_method == "cl2")
        result = fit_theta_cl2(pair, family, result.estimates.at("q"), settings);
    } else if (fit_method == "g") {
      result = fit_min_contrast(x, family, Stat::Pcf, settings);
    } else if (fit_method == "K") {
      result = fit_min_contrast(x, family, Stat::K, settings);
    } else if (fit_method == "avg") {
      result = average_estimators(x, family, fit_bootstrap, settings);
    } else {
      throw CLI::ValidationError("--method", "unknown method: " + fit_method);
    }
    emit(fit_out, fit_to_json(result));
    return 0;
  }

  if (*env) {
    const ModelConfig cfg = model_from_json(read_text_file(env_config));
    const PointPattern obs = read_pattern_csv(env_in, cfg.window);
    const double rmax = env_rmax > 0 ? env_rmax : cfg.window.min_side() / 4.0;
    const auto grid = make_r_grid(rmax, env_bins);
    const std::uint64_t seed = env_seed != 0 ? env_seed : cfg.seed;
    const auto gen = [&](int i) {
      return simulate_triple(cfg.model, cfg.window, derive_seed(seed, 1 + i)).retained;
    };
    const auto s = envelopes(obs, gen, stat_from_name(env_stat), grid, env_nsim, env_level);
    emit(env_out, summary_to_csv(s));
    return 0;
  }

  if (*cond) {
    const ModelConfig cfg = model_from_json(read_text_file(cond_config));
    const ThinnedPair pair(read_pattern_csv(cond_in, cfg.window),
                           read_pattern_csv(cond_deleted, cfg.window));
    McmcSettings ms;
    ms.retained_draws = cond_draws;
    ms.burn_in = cond_burn;
    ms.thin = cond_thin;
    ms.seed = cond_seed != 0 ? cond_seed : cfg.seed;
    std::array<int, 3> res{cond_grid, cond_grid, 1};
    if (cfg.window.dim == 1) res = {cond_grid, 1, 1};
    if (cfg.window.dim == 3) res = {cond_grid, cond_grid, cond_grid};
    const GridField field = conditional_pi_field(cfg.model.selection, pair, res, ms);
    emit(cond_out, grid_to_csv(field));
    if (!cond_pgm.empty()) write_grid_pgm(cond_pgm, field);
    return 0;
  }

  if (*study) {
    const StudyTable table =
        run_simulation_study(study_table, study_reps, study_seed, study_models,
                             study_bootstrap);
    emit(study_out, study_md ? table.to_markdown() : table.to_csv());
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return 3;
  } catch (const std::runtime_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
