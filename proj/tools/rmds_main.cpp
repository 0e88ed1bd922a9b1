// rmds: robust multidimensional scaling from outlier-corrupted distance
// matrices. Subcommands: solve, mds, gen-instance, diagnose,
// experiment-noiseless, experiment-noisy.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "rmds/align.hpp"
#include "rmds/bench.hpp"
#include "rmds/io.hpp"
#include "rmds/rng.hpp"
#include "rmds/solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace rmds;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitValidation = 2;

std::uint64_t env_seed_fallback() {
  if (const char* env = std::getenv("RMDS_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

void emit_summary(const json& summary, const std::string& path) {
  if (path.empty()) {
    std::cout << summary.dump(2) << "\n";
  } else {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot open for writing: " + path);
    f << summary.dump(2) << "\n";
    std::cerr << "rmds: wrote summary to " << path << "\n";
  }
}

SquaredDistanceMatrix load_distance_matrix(const std::string& path,
                                           const std::string& domain) {
  Matrix m = io::read_matrix_csv(path);
  if (domain == "dist") m = m.cwiseProduct(m);
  return SquaredDistanceMatrix::from_matrix(std::move(m));
}

std::vector<double> parse_grid(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ValidationError(std::string("bad ") + what + " value: '" + tok + "'");
    }
  }
  if (out.empty()) throw ValidationError(std::string("empty ") + what + " grid");
  return out;
}

std::vector<int> parse_int_grid(const std::string& csv, const char* what) {
  std::vector<int> out;
  for (double v : parse_grid(csv, what)) out.push_back(static_cast<int>(v));
  return out;
}

struct SolveArgs {
  std::string matrix_path;
  std::string clean_path;
  std::string input_domain = "sqdist";
  std::string config_path;
  int rank = 0;
  std::string xi0_mode = "robust_estimate";
  double xi0_value = 1.2;
  double gamma = 0.7;
  int max_iters = 200;
  double rel_change_tol = 1e-12;
  std::uint64_t seed = env_seed_fallback();
  std::string points_out;
  std::string outliers_out;
  std::string trace_out;
  std::string summary_out;
};

// Flat key=value config (keys: rank, xi0_mode, xi0_value, gamma, max_iters,
// rel_change_tol, seed). Explicit command-line flags win over the file.
void apply_flat_config(SolveArgs& a, const CLI::App& solve) {
  std::ifstream f(a.config_path);
  if (!f) throw ValidationError("cannot open config file: " + a.config_path);
  const auto overridden = [&](const char* flag) { return solve.count(flag) > 0; };
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    if (strip(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(a.config_path + ": expected key=value at line " +
                            std::to_string(lineno));
    }
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    try {
      if (key == "rank") {
        if (!overridden("--rank")) a.rank = std::stoi(value);
      } else if (key == "xi0_mode") {
        if (!overridden("--xi0_mode")) a.xi0_mode = value;
      } else if (key == "xi0_value") {
        if (!overridden("--xi0_value")) a.xi0_value = std::stod(value);
      } else if (key == "gamma") {
        if (!overridden("--gamma")) a.gamma = std::stod(value);
      } else if (key == "max_iters") {
        if (!overridden("--max_iters")) a.max_iters = std::stoi(value);
      } else if (key == "rel_change_tol") {
        if (!overridden("--rel_change_tol")) a.rel_change_tol = std::stod(value);
      } else if (key == "seed") {
        if (!overridden("--seed")) a.seed = std::strtoull(value.c_str(), nullptr, 10);
      } else {
        throw ValidationError(a.config_path + ": unknown key '" + key + "'");
      }
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      throw ValidationError(a.config_path + ": bad value for '" + key + "' at line " +
                            std::to_string(lineno));
    }
  }
}

int run_solve(const SolveArgs& a) {
  const SquaredDistanceMatrix d = load_distance_matrix(a.matrix_path, a.input_domain);

  std::optional<SquaredDistanceMatrix> clean;
  if (!a.clean_path.empty()) {
    clean = load_distance_matrix(a.clean_path, a.input_domain);
    if (clean->size() != d.size()) {
      throw ValidationError("clean matrix size differs from the observed matrix");
    }
  }

  SolverConfig cfg;
  cfg.rank = a.rank;
  cfg.gamma = a.gamma;
  cfg.max_iters = a.max_iters;
  cfg.rel_change_tol = a.rel_change_tol;
  cfg.capture_trace = !a.trace_out.empty();
  cfg.xi0 = resolve_xi0(d, xi0_mode_from_string(a.xi0_mode), a.xi0_value,
                        clean ? &*clean : nullptr);

  if (clean) {
    GroundTruth gt;
    gt.gram = psd_rank_truncate(gram_from_edm(clean->entries), a.rank);
    gt.points = gt.gram.embed_points();
    gt.outliers.n = d.size();
    for (int i = 0; i < d.size(); ++i) {
      for (int j = i; j < d.size(); ++j) {
        const double diff = d.entries(i, j) - clean->entries(i, j);
        if (diff != 0.0) gt.outliers.entries.push_back({i, j, diff});
      }
    }
    cfg.ground_truth = std::move(gt);
  }

  const SolverResult res = rmds_aap(d, cfg);
  bool contained_all = true;
  for (const auto& rec : res.trace.records) {
    if (!rec.support_contained) contained_all = false;
  }

  if (!a.points_out.empty()) io::write_points_csv(a.points_out, res.points);
  if (!a.outliers_out.empty()) io::write_triplets_csv(a.outliers_out, res.outliers);
  if (!a.trace_out.empty()) io::write_trace_csv(a.trace_out, res.trace);

  json summary = {
      {"command", "solve"},
      {"n", d.size()},
      {"rank", a.rank},
      {"xi0_mode", a.xi0_mode},
      {"xi0", cfg.xi0},
      {"xi_final", cfg.xi0 * std::pow(cfg.gamma, res.iterations - 1)},
      {"gamma", a.gamma},
      {"seed", a.seed},
      {"iterations", res.iterations},
      {"termination", termination_name(res.termination)},
      {"outlier_support", res.outliers.support_size()},
      {"points_out", a.points_out},
      {"outliers_out", a.outliers_out},
      {"trace_out", a.trace_out},
  };
  if (clean && !res.trace.records.empty()) {
    const auto& last = res.trace.records.back();
    summary["ground_truth"] = {
        {"support_contained_all_iterations", contained_all},
        {"final_err_S_inf", last.err_outlier_inf},
        {"final_err_L_inf", last.err_gram_inf},
        {"final_err_X_2inf", last.err_points_two_inf},
    };
  }
  emit_summary(summary, a.summary_out);
  return kExitOk;
}

int run_mds(const std::string& matrix_path, const std::string& domain, int rank,
            const std::string& points_out, const std::string& summary_out) {
  const SquaredDistanceMatrix d = load_distance_matrix(matrix_path, domain);
  const Matrix pts = classic_mds(d, rank);
  if (!points_out.empty()) io::write_points_csv(points_out, pts);
  json summary = {
      {"command", "mds"},
      {"n", d.size()},
      {"rank", rank},
      {"points_out", points_out},
  };
  emit_summary(summary, summary_out);
  return kExitOk;
}

struct GenArgs {
  std::string shape = "plus101";
  int outliers = -1;
  double outlier_rate = -1.0;
  double outlier_max = -1.0;
  double noise_sigma2 = 0.0;
  std::uint64_t seed = env_seed_fallback();
  std::string out_dir = ".";
};

int run_gen_instance(const GenArgs& a) {
  InstanceBundle base;
  double default_outlier_max = 0.0;
  if (a.shape == "plus101") {
    base = gen_plus_sign_101();
    default_outlier_max = 40.0;
  } else if (a.shape == "plus25") {
    base = gen_plus_sign_25();
    default_outlier_max = 20.0;
  } else {
    throw ValidationError("unknown shape: " + a.shape + " (plus101 or plus25)");
  }

  CorruptionSpec cs;
  cs.outlier_max = a.outlier_max > 0.0 ? a.outlier_max : default_outlier_max;
  cs.noise_sigma2 = a.noise_sigma2;
  cs.excluded_pairs = base.anchor_pairs();
  cs.seed = a.seed;
  if (a.outliers >= 0 && a.outlier_rate >= 0.0) {
    throw ValidationError("give either --outliers or --outlier-rate, not both");
  }
  if (a.outliers >= 0) {
    cs.outlier_count = a.outliers;
  } else if (a.outlier_rate >= 0.0) {
    cs.outlier_count = static_cast<int>(std::lround(
        a.outlier_rate * static_cast<double>(base.eligible_pair_count())));
  }

  const InstanceBundle inst = corrupt(base, cs);

  fs::create_directories(a.out_dir);
  const auto path = [&](const char* name) {
    return (fs::path(a.out_dir) / name).string();
  };
  io::write_matrix_csv(path("d_observed.csv"), inst.d_observed.entries);
  io::write_matrix_csv(path("d_clean.csv"), inst.d_clean.entries);
  io::write_points_csv(path("points_true.csv"), inst.points_true);
  io::write_triplets_csv(path("outliers_true.csv"), inst.outliers_true);

  json summary = {
      {"command", "gen-instance"},
      {"shape", a.shape},
      {"n", inst.size()},
      {"eligible_pairs", inst.eligible_pair_count()},
      {"outliers", cs.outlier_count},
      {"outlier_max", cs.outlier_max},
      {"noise_sigma2", cs.noise_sigma2},
      {"seed", cs.seed},
      {"anchor_idx", inst.anchor_idx},
      {"files",
       {{"d_observed", path("d_observed.csv")},
        {"d_clean", path("d_clean.csv")},
        {"points_true", path("points_true.csv")},
        {"outliers_true", path("outliers_true.csv")}}},
  };
  emit_summary(summary, path("instance.json"));
  return kExitOk;
}

int run_diagnose(const std::string& clean_path, const std::string& observed_path,
                 const std::string& domain, int rank, double gamma,
                 const std::string& summary_out) {
  const SquaredDistanceMatrix clean = load_distance_matrix(clean_path, domain);

  InstanceBundle inst;
  inst.points_true = Matrix::Zero(clean.size(), rank);
  inst.d_clean = clean;
  inst.gram_true = psd_rank_truncate(gram_from_edm(clean.entries), rank);
  inst.outliers_true.n = clean.size();
  if (!observed_path.empty()) {
    const SquaredDistanceMatrix obs = load_distance_matrix(observed_path, domain);
    if (obs.size() != clean.size()) {
      throw ValidationError("observed matrix size differs from the clean matrix");
    }
    inst.d_observed = obs;
    for (int i = 0; i < clean.size(); ++i) {
      for (int j = i; j < clean.size(); ++j) {
        const double diff = obs.entries(i, j) - clean.entries(i, j);
        if (diff != 0.0) inst.outliers_true.entries.push_back({i, j, diff});
      }
    }
  } else {
    inst.d_observed = clean;
  }

  const DiagnosticsReport rep = diagnostics(inst, gamma);
  json summary = {
      {"command", "diagnose"},
      {"n", clean.size()},
      {"rank", rank},
      {"gamma", gamma},
      {"mu", rep.mu},
      {"kappa", rep.kappa},
      {"alpha", rep.alpha},
      {"alpha_bound", rep.alpha_bound},
      {"in_regime", rep.in_regime},
  };
  emit_summary(summary, summary_out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust multidimensional scaling via accelerated alternating projections"};
  app.require_subcommand(1);

  // solve
  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Recover points and outliers from a distance matrix");
  solve->add_option("--config", sa.config_path,
                    "Flat key=value config file (rank, xi0_mode, xi0_value, gamma, "
                    "max_iters, rel_change_tol, seed)");
  solve->add_option("--matrix", sa.matrix_path, "Observed matrix CSV")->required();
  solve->add_option("--clean-matrix", sa.clean_path,
                    "Clean matrix CSV (enables ground-truth instrumentation)");
  solve->add_option("--input-domain", sa.input_domain, "dist or sqdist")
      ->check(CLI::IsMember({"dist", "sqdist"}));
  solve->add_option("--rank", sa.rank, "Target embedding rank");
  solve->add_option("--xi0_mode,--xi0-mode", sa.xi0_mode,
                    "absolute, multiple_of_clean_inf, or robust_estimate");
  solve->add_option("--xi0_value,--xi0-value", sa.xi0_value,
                    "Threshold value (absolute) or multiplier");
  solve->add_option("--gamma", sa.gamma, "Threshold decay rate in (0,1)");
  solve->add_option("--max_iters,--max-iters", sa.max_iters, "Iteration cap");
  solve->add_option("--rel_change_tol,--rel-change-tol", sa.rel_change_tol,
                    "Relative-change stopping tolerance");
  solve->add_option("--seed", sa.seed, "Recorded in the summary (solve is deterministic)");
  solve->add_option("--points-out", sa.points_out, "Recovered points CSV");
  solve->add_option("--outliers-out", sa.outliers_out, "Outlier triplet CSV");
  solve->add_option("--trace-out", sa.trace_out, "Per-iteration trace CSV");
  solve->add_option("--summary-out", sa.summary_out, "Summary JSON (default: stdout)");

  // mds
  std::string mds_matrix, mds_domain = "sqdist", mds_points, mds_summary;
  int mds_rank = 2;
  auto* mds = app.add_subcommand("mds", "Classic MDS embedding (no outlier handling)");
  mds->add_option("--matrix", mds_matrix, "Matrix CSV")->required();
  mds->add_option("--input-domain", mds_domain, "dist or sqdist")
      ->check(CLI::IsMember({"dist", "sqdist"}));
  mds->add_option("--rank", mds_rank, "Target embedding rank")->required();
  mds->add_option("--points-out", mds_points, "Points CSV");
  mds->add_option("--summary-out", mds_summary, "Summary JSON (default: stdout)");

  // gen-instance
  GenArgs ga;
  auto* gen = app.add_subcommand("gen-instance", "Generate a plus-sign benchmark instance");
  gen->add_option("--shape", ga.shape, "plus101 or plus25");
  gen->add_option("--outliers", ga.outliers, "Number of corrupted distances");
  gen->add_option("--outlier-rate", ga.outlier_rate,
                  "Fraction of eligible pairs to corrupt");
  gen->add_option("--outlier-max", ga.outlier_max,
                  "Outlier range upper end (distance units)");
  gen->add_option("--noise-sigma2", ga.noise_sigma2, "Gaussian noise variance");
  gen->add_option("--seed", ga.seed, "RNG seed (falls back to RMDS_SEED)");
  gen->add_option("--out-dir", ga.out_dir, "Output directory");

  // diagnose
  std::string diag_clean, diag_observed, diag_domain = "sqdist", diag_summary;
  int diag_rank = 2;
  double diag_gamma = 0.7;
  auto* diag = app.add_subcommand("diagnose", "Report incoherence, conditioning, and sparsity");
  diag->add_option("--clean-matrix", diag_clean, "Clean matrix CSV")->required();
  diag->add_option("--matrix", diag_observed, "Observed matrix CSV (for outlier sparsity)");
  diag->add_option("--input-domain", diag_domain, "dist or sqdist")
      ->check(CLI::IsMember({"dist", "sqdist"}));
  diag->add_option("--rank", diag_rank, "Gram rank");
  diag->add_option("--gamma", diag_gamma, "Decay rate used in the sparsity bound");
  diag->add_option("--summary-out", diag_summary, "Summary JSON (default: stdout)");

  // experiment-noiseless
  NoiselessSweepConfig nl;
  std::string nl_p = "0.05,0.1,0.15,0.2,0.25,0.3,0.35,0.4,0.45,0.5,0.55,0.6";
  std::string nl_gamma = "0.5,0.7,0.9";
  std::string nl_mult = "1.2";
  std::string nl_out = "noiseless_success.csv";
  std::uint64_t nl_seed = env_seed_fallback();
  int nl_threads = 0;
  auto* noiseless = app.add_subcommand(
      "experiment-noiseless", "Success-rate sweep on the 101-point plus sign");
  noiseless->add_option("--p-grid", nl_p, "Outlier fractions, comma separated");
  noiseless->add_option("--gamma-grid", nl_gamma, "Decay rates, comma separated");
  noiseless->add_option("--xi0-multipliers", nl_mult, "Initial-threshold multipliers");
  noiseless->add_option("--trials", nl.trials, "Monte-Carlo trials per cell");
  noiseless->add_option("--outlier-max", nl.outlier_max, "Outlier range upper end");
  noiseless->add_option("--seed", nl_seed, "Sweep seed");
  noiseless->add_option("--threads", nl_threads, "Parallel trial cap (0 = hardware)");
  noiseless->add_option("--out", nl_out, "Output CSV");

  // experiment-noisy
  NoisySweepConfig ns;
  std::string ns_sigma = "0,0.1,0.2";
  std::string ns_m = "15,30,45,60,75";
  std::string ns_out = "noisy_rmse.csv";
  std::uint64_t ns_seed = env_seed_fallback();
  int ns_threads = 0;
  auto* noisy = app.add_subcommand(
      "experiment-noisy", "RMSE sweep on the 25-point anchored plus sign");
  noisy->add_option("--sigma2-grid", ns_sigma, "Noise variances, comma separated");
  noisy->add_option("--m-grid", ns_m, "Outlier counts, comma separated");
  noisy->add_option("--trials", ns.trials, "Monte-Carlo trials per cell");
  noisy->add_option("--outlier-max", ns.outlier_max, "Outlier range upper end");
  noisy->add_option("--gamma", ns.gamma, "Solver decay rate");
  noisy->add_option("--xi0-multiplier", ns.xi0_multiplier, "Initial-threshold multiplier");
  noisy->add_option("--seed", ns_seed, "Sweep seed");
  noisy->add_option("--threads", ns_threads, "Parallel trial cap (0 = hardware)");
  noisy->add_option("--out", ns_out, "Output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (solve->parsed()) {
      if (!sa.config_path.empty()) apply_flat_config(sa, *solve);
      if (sa.rank < 1) {
        throw ValidationError("solve needs --rank (flag or config key)");
      }
      return run_solve(sa);
    }
    if (mds->parsed()) return run_mds(mds_matrix, mds_domain, mds_rank, mds_points, mds_summary);
    if (gen->parsed()) return run_gen_instance(ga);
    if (diag->parsed()) {
      return run_diagnose(diag_clean, diag_observed, diag_domain, diag_rank,
                          diag_gamma, diag_summary);
    }
    if (noiseless->parsed()) {
      nl.p_grid = parse_grid(nl_p, "p");
      nl.gamma_grid = parse_grid(nl_gamma, "gamma");
      for (double g : nl.gamma_grid) {
        if (g <= 0.0 || g >= 1.0) throw ValidationError("gamma grid values must lie in (0,1)");
      }
      for (double p : nl.p_grid) {
        if (p < 0.0 || p > 1.0) throw ValidationError("p grid values must lie in [0,1]");
      }
      nl.xi0_multipliers = parse_grid(nl_mult, "xi0 multiplier");
      nl.seed = nl_seed;
      nl.threads = nl_threads;
      std::cerr << "rmds: running noiseless sweep (" << nl.p_grid.size() << " x "
                << nl.gamma_grid.size() << " x " << nl.xi0_multipliers.size()
                << " cells, " << nl.trials << " trials each)\n";
      io::write_success_table_csv(nl_out, run_noiseless_sweep(nl));
      std::cerr << "rmds: wrote " << nl_out << "\n";
      return kExitOk;
    }
    if (noisy->parsed()) {
      ns.sigma2_grid = parse_grid(ns_sigma, "sigma2");
      ns.m_grid = parse_int_grid(ns_m, "m");
      for (int m : ns.m_grid) {
        if (m < 0) throw ValidationError("m grid values must be nonnegative");
      }
      ns.seed = ns_seed;
      ns.threads = ns_threads;
      std::cerr << "rmds: running noisy sweep (" << ns.sigma2_grid.size() << " x "
                << ns.m_grid.size() << " cells, " << ns.trials << " trials each)\n";
      io::write_rmse_table_csv(ns_out, run_noisy_sweep(ns));
      std::cerr << "rmds: wrote " << ns_out << "\n";
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    std::cerr << "rmds: error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "rmds: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
