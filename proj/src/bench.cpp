#include "rmds/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <thread>

#include "rmds/align.hpp"
#include "rmds/rng.hpp"

namespace rmds {

namespace {

Matrix squared_distances(const Matrix& pts) {
  const int n = static_cast<int>(pts.rows());
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (pts.row(i) - pts.row(j)).squaredNorm();
    }
  }
  return d;
}

InstanceBundle bundle_from_points(Matrix pts, std::vector<int> anchors) {
  InstanceBundle b;
  b.points_true = std::move(pts);
  b.anchor_idx = std::move(anchors);
  b.d_clean = SquaredDistanceMatrix(squared_distances(b.points_true));
  b.d_observed = b.d_clean;
  b.outliers_true.n = b.size();

  const Matrix centered =
      b.points_true.rowwise() - b.points_true.colwise().mean();
  b.gram_true = psd_rank_truncate(centered * centered.transpose(), b.dim());
  return b;
}

/// Runs trial bodies 0..count-1 on up to `threads` workers; each body writes
/// only its own slot, so the aggregate is independent of scheduling.
void parallel_trials(int count, int threads, const std::function<void(int)>& body) {
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int t = 0; t < count; ++t) body(t);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int t = next.fetch_add(1); t < count; t = next.fetch_add(1)) body(t);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::size_t InstanceBundle::eligible_pair_count() const {
  const std::size_t n = static_cast<std::size_t>(size());
  const std::size_t a = anchor_idx.size();
  return n * (n - 1) / 2 - a * (a - 1) / 2;
}

std::vector<std::pair<int, int>> InstanceBundle::anchor_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < anchor_idx.size(); ++a) {
    for (std::size_t b = a + 1; b < anchor_idx.size(); ++b) {
      const int i = std::min(anchor_idx[a], anchor_idx[b]);
      const int j = std::max(anchor_idx[a], anchor_idx[b]);
      pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

GroundTruth InstanceBundle::ground_truth() const {
  GroundTruth gt;
  gt.gram = gram_true;
  gt.outliers = outliers_true;
  gt.points = gram_true.embed_points();
  return gt;
}

InstanceBundle gen_plus_sign_101() {
  Matrix pts(101, 2);
  int row = 0;
  for (int x = -19; x <= 31; ++x) {  // horizontal arm, 51 points
    pts.row(row++) << static_cast<double>(x), 6.0;
  }
  for (int y = -19; y <= 31; ++y) {  // vertical arm minus the shared center
    if (y == 6) continue;
    pts.row(row++) << 6.0, static_cast<double>(y);
  }
  return bundle_from_points(std::move(pts), {});
}

InstanceBundle gen_plus_sign_25() {
  Matrix pts(25, 2);
  int row = 0;
  for (int x = 0; x <= 12; ++x) {
    pts.row(row++) << static_cast<double>(x), 6.0;
  }
  for (int y = 0; y <= 12; ++y) {
    if (y == 6) continue;
    pts.row(row++) << 6.0, static_cast<double>(y);
  }
  // Anchors: the four arm endpoints (0,6), (12,6), (6,0), (6,12).
  return bundle_from_points(std::move(pts), {0, 12, 13, 24});
}

InstanceBundle corrupt(const InstanceBundle& instance, const CorruptionSpec& spec) {
  const int n = instance.size();
  if (!(spec.outlier_max > 0.0)) {
    throw ValidationError("corrupt: outlier_max must be positive");
  }

  std::vector<std::pair<int, int>> eligible;
  eligible.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool excluded =
          std::find(spec.excluded_pairs.begin(), spec.excluded_pairs.end(),
                    std::make_pair(i, j)) != spec.excluded_pairs.end();
      if (!excluded) eligible.emplace_back(i, j);
    }
  }
  if (spec.outlier_count < 0 ||
      static_cast<std::size_t>(spec.outlier_count) > eligible.size()) {
    throw ValidationError("corrupt: outlier_count exceeds eligible pairs");
  }

  Rng rng(spec.seed);
  // Distance-domain corruption touching only the affected entries, so that
  // untouched squared entries stay bit-identical to the clean matrix.
  Matrix dist = instance.d_clean.entries.cwiseSqrt();
  Matrix dobs = instance.d_clean.entries;
  const auto store = [&](int i, int j) {
    const double sq = dist(i, j) * dist(i, j);
    dobs(i, j) = dobs(j, i) = sq;
  };

  if (spec.noise_sigma2 > 0.0) {
    const double sigma = std::sqrt(spec.noise_sigma2);
    int clipped = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double v = dist(i, j) + rng.normal(sigma);
        if (v < 0.0) {
          v = 0.0;
          ++clipped;
        }
        dist(i, j) = dist(j, i) = v;
        store(i, j);
      }
    }
    if (clipped > 0) {
      std::cerr << "rmds: corrupt clipped " << clipped
                << " negative noisy distances to 0\n";
    }
  }

  const std::vector<int> picks = rng.sample_without_replacement(
      spec.outlier_count, static_cast<int>(eligible.size()));
  for (int pick : picks) {
    const auto [i, j] = eligible[static_cast<std::size_t>(pick)];
    const double v = dist(i, j) + rng.uniform(0.0, spec.outlier_max);
    dist(i, j) = dist(j, i) = v;
    store(i, j);
  }

  InstanceBundle out = instance;
  out.d_observed = SquaredDistanceMatrix(std::move(dobs));
  out.outliers_true.n = n;
  out.outliers_true.entries.clear();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double diff = out.d_observed.entries(i, j) - instance.d_clean.entries(i, j);
      if (diff != 0.0) out.outliers_true.entries.push_back({i, j, diff});
    }
  }
  return out;
}

DiagnosticsReport diagnostics(const InstanceBundle& instance, double gamma) {
  const FactorizedGram& g = instance.gram_true;
  const int n = instance.size();
  const int r = g.rank();
  if (r < 1 || g.evals(r - 1) <= 0.0) {
    throw ValidationError("diagnostics: clean Gram is degenerate");
  }
  DiagnosticsReport rep;
  const double row = norm_two_inf(g.basis);
  rep.mu = static_cast<double>(n) / r * row * row;
  rep.kappa = g.evals(0) / g.evals(r - 1);
  rep.alpha =
      static_cast<double>(instance.outliers_true.max_row_support()) / n;
  rep.alpha_bound = gamma / (1624.0 * rep.mu * r * rep.kappa * rep.kappa);
  rep.in_regime = rep.alpha <= rep.alpha_bound;
  return rep;
}

std::vector<SuccessCell> run_noiseless_sweep(const NoiselessSweepConfig& cfg) {
  if (cfg.p_grid.empty() || cfg.gamma_grid.empty() || cfg.xi0_multipliers.empty()) {
    throw ValidationError("noiseless sweep: empty grid");
  }
  if (cfg.trials < 1) throw ValidationError("noiseless sweep: trials must be >= 1");

  const InstanceBundle base = gen_plus_sign_101();
  const double clean_inf = norm_inf(base.d_clean.entries);
  const Matrix x_star = base.gram_true.embed_points();
  const double x_star_two_inf = norm_two_inf(x_star);
  const auto pair_count = base.eligible_pair_count();

  std::vector<SuccessCell> table;
  std::uint64_t cell_index = 0;
  for (double p : cfg.p_grid) {
    for (double gamma : cfg.gamma_grid) {
      for (double mult : cfg.xi0_multipliers) {
        SuccessCell cell;
        cell.p = p;
        cell.gamma = gamma;
        cell.xi0_multiplier = mult;
        cell.trials = cfg.trials;

        const int m = static_cast<int>(
            std::lround(p * static_cast<double>(pair_count)));
        std::vector<char> ok(static_cast<std::size_t>(cfg.trials), 0);
        parallel_trials(cfg.trials, cfg.threads, [&](int trial) {
          CorruptionSpec cs;
          cs.outlier_count = m;
          cs.outlier_max = cfg.outlier_max;
          cs.seed = Rng::derive_stream(cfg.seed, cell_index,
                                       static_cast<std::uint64_t>(trial));
          const InstanceBundle inst = corrupt(base, cs);

          SolverConfig sc;
          sc.rank = 2;
          sc.xi0 = mult * clean_inf;
          sc.gamma = gamma;
          try {
            const SolverResult res = rmds_aap(inst.d_observed, sc);
            const AlignmentResult al = procrustes_rotation(x_star, res.points);
            if (al.residual_two_inf < 0.01 * x_star_two_inf) {
              ok[static_cast<std::size_t>(trial)] = 1;
            }
          } catch (const std::exception& e) {
            std::cerr << "rmds: sweep trial failed (p=" << p << ", gamma=" << gamma
                      << ", trial=" << trial << "): " << e.what() << "\n";
          }
        });

        cell.successes = static_cast<int>(
            std::count(ok.begin(), ok.end(), static_cast<char>(1)));
        cell.rate = static_cast<double>(cell.successes) / cfg.trials;
        table.push_back(cell);
        ++cell_index;
      }
    }
  }
  return table;
}

std::vector<RmseCell> run_noisy_sweep(const NoisySweepConfig& cfg) {
  if (cfg.sigma2_grid.empty() || cfg.m_grid.empty()) {
    throw ValidationError("noisy sweep: empty grid");
  }
  if (cfg.trials < 1) throw ValidationError("noisy sweep: trials must be >= 1");

  const InstanceBundle base = gen_plus_sign_25();
  const double clean_inf = norm_inf(base.d_clean.entries);
  const auto excluded = base.anchor_pairs();
  Matrix anchors_ref(base.anchor_idx.size(), base.dim());
  for (std::size_t a = 0; a < base.anchor_idx.size(); ++a) {
    anchors_ref.row(static_cast<int>(a)) = base.points_true.row(base.anchor_idx[a]);
  }

  const auto rmse_of = [&](const Matrix& rec_points) {
    Matrix anchors_rec(base.anchor_idx.size(), base.dim());
    for (std::size_t a = 0; a < base.anchor_idx.size(); ++a) {
      anchors_rec.row(static_cast<int>(a)) = rec_points.row(base.anchor_idx[a]);
    }
    const AlignmentResult map = anchor_align(anchors_ref, anchors_rec);
    return rmse_non_anchor(apply_alignment(map, rec_points), base.points_true,
                           base.anchor_idx);
  };

  std::vector<RmseCell> table;
  std::uint64_t cell_index = 0;
  for (double sigma2 : cfg.sigma2_grid) {
    for (int m : cfg.m_grid) {
      std::vector<double> rmse_solver(static_cast<std::size_t>(cfg.trials), 0.0);
      std::vector<double> rmse_mds(static_cast<std::size_t>(cfg.trials), 0.0);
      parallel_trials(cfg.trials, cfg.threads, [&](int trial) {
        CorruptionSpec cs;
        cs.outlier_count = m;
        cs.outlier_max = cfg.outlier_max;
        cs.noise_sigma2 = sigma2;
        cs.excluded_pairs = excluded;
        cs.seed = Rng::derive_stream(cfg.seed, cell_index,
                                     static_cast<std::uint64_t>(trial));
        const InstanceBundle inst = corrupt(base, cs);

        SolverConfig sc;
        sc.rank = 2;
        sc.xi0 = cfg.xi0_multiplier * clean_inf;
        sc.gamma = cfg.gamma;
        try {
          const SolverResult res = rmds_aap(inst.d_observed, sc);
          rmse_solver[static_cast<std::size_t>(trial)] = rmse_of(res.points);
          rmse_mds[static_cast<std::size_t>(trial)] =
              rmse_of(classic_mds(inst.d_observed, 2));
        } catch (const std::exception& e) {
          // A failed trial poisons the cell mean visibly instead of
          // terminating the sweep.
          rmse_solver[static_cast<std::size_t>(trial)] =
              std::numeric_limits<double>::quiet_NaN();
          rmse_mds[static_cast<std::size_t>(trial)] =
              std::numeric_limits<double>::quiet_NaN();
          std::cerr << "rmds: noisy-sweep trial failed (sigma2=" << sigma2
                    << ", m=" << m << ", trial=" << trial << "): " << e.what()
                    << "\n";
        }
      });

      const auto stats = [&](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var = v.size() > 1 ? var / static_cast<double>(v.size() - 1) : 0.0;
        return std::make_pair(mean, std::sqrt(var));
      };

      for (const auto& [name, values] :
           {std::make_pair(std::string("rmds_aap"), &rmse_solver),
            std::make_pair(std::string("classic_mds"), &rmse_mds)}) {
        RmseCell cell;
        cell.sigma2 = sigma2;
        cell.m = m;
        cell.method = name;
        std::tie(cell.mean_rmse, cell.std_rmse) = stats(*values);
        table.push_back(cell);
      }
      ++cell_index;
    }
  }
  return table;
}

}  // namespace rmds
