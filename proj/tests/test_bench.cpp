#include "rmds/bench.hpp"

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rmds/align.hpp"
#include "rmds/io.hpp"
#include "rmds/rng.hpp"
#include "support.hpp"

using namespace rmds;

TEST_CASE("101-point plus sign geometry and spectrum") {
  const InstanceBundle b = gen_plus_sign_101();
  CHECK(b.size() == 101);
  CHECK(b.dim() == 2);
  CHECK(b.eligible_pair_count() == 5050);
  CHECK(b.anchor_idx.empty());

  // Ends of the arms.
  const Matrix& x = b.points_true;
  CHECK(x.row(0) == Eigen::RowVector2d(-19, 6));
  CHECK(x.row(50) == Eigen::RowVector2d(31, 6));
  CHECK(x.col(0).minCoeff() == -19);
  CHECK(x.col(0).maxCoeff() == 31);
  CHECK(x.col(1).minCoeff() == -19);
  CHECK(x.col(1).maxCoeff() == 31);

  const DiagnosticsReport rep = diagnostics(b, 0.9);
  CHECK(rep.mu == doctest::Approx(3.0).epsilon(0.2));
  CHECK(rep.mu >= 2.5);
  CHECK(rep.mu <= 3.5);
  CHECK(std::abs(rep.kappa - 1.0) < 1e-6);

  // The embedding is centered and regenerates the clean EDM.
  const Matrix emb = b.gram_true.embed_points();
  CHECK(emb.colwise().mean().norm() < 1e-12);
  CHECK(norm_inf(edm_from_gram(b.gram_true.to_matrix()) - b.d_clean.entries) < 1e-10);
  CHECK(norm_inf(b.d_clean.entries) == 2500.0);
}

TEST_CASE("25-point plus sign with anchors") {
  const InstanceBundle b = gen_plus_sign_25();
  CHECK(b.size() == 25);
  CHECK(b.eligible_pair_count() == 294);
  REQUIRE(b.anchor_idx.size() == 4);
  const Matrix& x = b.points_true;
  CHECK(x.row(b.anchor_idx[0]) == Eigen::RowVector2d(0, 6));
  CHECK(x.row(b.anchor_idx[1]) == Eigen::RowVector2d(12, 6));
  CHECK(x.row(b.anchor_idx[2]) == Eigen::RowVector2d(6, 0));
  CHECK(x.row(b.anchor_idx[3]) == Eigen::RowVector2d(6, 12));
  CHECK(b.anchor_pairs().size() == 6);

  // Every point sits on one of the two axis-aligned lines through (6,6).
  for (int i = 0; i < 25; ++i) {
    CHECK((x(i, 0) == 6.0 || x(i, 1) == 6.0));
  }
  CHECK(norm_inf(edm_from_gram(b.gram_true.to_matrix()) - b.d_clean.entries) < 1e-10);
}

TEST_CASE("corrupt: no corruption is the identity") {
  const InstanceBundle b = gen_plus_sign_25();
  CorruptionSpec cs;
  cs.outlier_count = 0;
  cs.seed = 1;
  const InstanceBundle out = corrupt(b, cs);
  CHECK((out.d_observed.entries - b.d_clean.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.outliers_true.support_size() == 0);
}

TEST_CASE("corrupt: noiseless outliers land exactly on the sampled pairs") {
  const InstanceBundle b = gen_plus_sign_101();
  CorruptionSpec cs;
  cs.outlier_count = 253;
  cs.outlier_max = 40.0;
  cs.seed = 9;
  const InstanceBundle out = corrupt(b, cs);

  CHECK(out.outliers_true.support_size() == 253);
  for (const auto& e : out.outliers_true.entries) {
    CHECK(e.value > 0.0);  // outliers only add distance
    const double d = std::sqrt(b.d_clean.entries(e.i, e.j));
    CHECK(e.value <= (d + 40.0) * (d + 40.0) - d * d + 1e-9);
  }

  // Symmetric, hollow, and consistent with the stored outliers.
  const Matrix& dobs = out.d_observed.entries;
  CHECK(norm_inf(dobs - dobs.transpose()) == 0.0);
  CHECK(dobs.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(norm_inf(b.d_clean.entries + out.outliers_true.to_dense() - dobs) < 1e-9);

  // Same seed, same instance, bit for bit.
  const InstanceBundle again = corrupt(b, cs);
  CHECK((again.d_observed.entries - dobs).cwiseAbs().maxCoeff() == 0.0);

  CorruptionSpec too_many = cs;
  too_many.outlier_count = 6000;
  CHECK_THROWS_AS(corrupt(b, too_many), ValidationError);
}

TEST_CASE("corrupt: excluded pairs never receive outliers") {
  const InstanceBundle b = gen_plus_sign_25();
  CorruptionSpec cs;
  cs.outlier_count = 75;
  cs.outlier_max = 20.0;
  cs.excluded_pairs = b.anchor_pairs();
  cs.seed = 31;
  const InstanceBundle out = corrupt(b, cs);
  CHECK(out.outliers_true.support_size() == 75);
  for (const auto& e : out.outliers_true.entries) {
    for (const auto& [i, j] : cs.excluded_pairs) {
      CHECK_FALSE((e.i == i && e.j == j));
    }
  }
}

TEST_CASE("corrupt: gaussian noise touches all pairs") {
  const InstanceBundle b = gen_plus_sign_25();
  CorruptionSpec cs;
  cs.outlier_count = 0;
  cs.noise_sigma2 = 0.1;
  cs.seed = 4;
  const InstanceBundle out = corrupt(b, cs);
  CHECK(out.outliers_true.support_size() == 300);  // every pair moved
  const Matrix& dobs = out.d_observed.entries;
  CHECK(norm_inf(dobs - dobs.transpose()) == 0.0);
  CHECK(dobs.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK(dobs.minCoeff() >= 0.0);
}

TEST_CASE("diagnostics formula and regime flag") {
  // Frozen arithmetic: gamma=0.9, mu=3, r=2, kappa=1.
  CHECK(0.9 / (1624.0 * 3.0 * 2.0 * 1.0) == doctest::Approx(9.236453202e-05));

  const InstanceBundle clean = gen_plus_sign_101();
  const DiagnosticsReport rep = diagnostics(clean, 0.9);
  CHECK(rep.alpha == 0.0);
  CHECK(rep.in_regime);
  CHECK(rep.alpha_bound ==
        doctest::Approx(0.9 / (1624.0 * rep.mu * 2.0 * rep.kappa * rep.kappa)));

  CorruptionSpec cs;
  cs.outlier_count = 253;
  cs.seed = 2;
  const InstanceBundle dirty = corrupt(clean, cs);
  const DiagnosticsReport rep2 = diagnostics(dirty, 0.9);
  CHECK(rep2.alpha > rep2.alpha_bound);
  CHECK_FALSE(rep2.in_regime);

  // mu always lies in [1, n/r].
  Rng rng(61);
  for (int rep_i = 0; rep_i < 10; ++rep_i) {
    const int n = 6 + rng.below(40);
    Matrix pts = testsupport::random_points(rng, n, 2);
    InstanceBundle inst;
    inst.points_true = pts;
    inst.d_clean = SquaredDistanceMatrix(edm_from_gram(
        (pts.rowwise() - pts.colwise().mean()).eval() *
        (pts.rowwise() - pts.colwise().mean()).transpose().eval()));
    inst.d_observed = inst.d_clean;
    inst.outliers_true.n = n;
    Matrix centered = pts.rowwise() - pts.colwise().mean();
    inst.gram_true = psd_rank_truncate(centered * centered.transpose(), 2);
    const DiagnosticsReport r = diagnostics(inst, 0.5);
    CHECK(r.mu >= 1.0 - 1e-12);
    CHECK(r.mu <= n / 2.0 + 1e-12);
    CHECK(r.kappa >= 1.0);
  }

  InstanceBundle degenerate;
  degenerate.points_true = Matrix::Zero(4, 2);
  degenerate.gram_true.basis = Matrix::Identity(4, 2);
  degenerate.gram_true.evals = Vector::Zero(2);
  degenerate.outliers_true.n = 4;
  CHECK_THROWS_AS(diagnostics(degenerate, 0.9), ValidationError);
}

TEST_CASE("noiseless sweep smoke: easy cells succeed") {
  NoiselessSweepConfig cfg;
  cfg.p_grid = {0.0, 0.05};
  cfg.gamma_grid = {0.5};
  cfg.trials = 10;
  cfg.seed = 123;
  cfg.threads = 1;
  const auto cells = run_noiseless_sweep(cfg);
  REQUIRE(cells.size() == 2);
  CHECK(cells[0].rate == 1.0);  // p = 0: nothing to remove
  CHECK(cells[1].rate == 1.0);  // p = 0.05 is comfortably inside the transition
  CHECK(cells[1].successes == 10);

  NoiselessSweepConfig bad;
  bad.p_grid = {};
  CHECK_THROWS_AS(run_noiseless_sweep(bad), ValidationError);
}

TEST_CASE("noisy sweep smoke: exact data and dominance") {
  NoisySweepConfig cfg;
  cfg.sigma2_grid = {0.0};
  cfg.m_grid = {0, 15};
  cfg.trials = 10;
  cfg.seed = 9;
  cfg.threads = 1;
  const auto cells = run_noisy_sweep(cfg);
  REQUIRE(cells.size() == 4);
  for (const auto& c : cells) {
    if (c.m == 0) CHECK(c.mean_rmse < 1e-6);
  }
  double solver_rmse = -1.0, mds_rmse = -1.0;
  for (const auto& c : cells) {
    if (c.m == 15 && c.method == "rmds_aap") solver_rmse = c.mean_rmse;
    if (c.m == 15 && c.method == "classic_mds") mds_rmse = c.mean_rmse;
  }
  CHECK(solver_rmse >= 0.0);
  CHECK(solver_rmse < mds_rmse);
}

TEST_CASE("sweep output is deterministic for a fixed seed") {
  NoiselessSweepConfig cfg;
  cfg.p_grid = {0.05};
  cfg.gamma_grid = {0.5, 0.9};
  cfg.trials = 5;
  cfg.seed = 77;
  std::ostringstream a, b;
  io::write_success_table_csv(a, run_noiseless_sweep(cfg));
  io::write_success_table_csv(b, run_noiseless_sweep(cfg));
  CHECK(a.str() == b.str());

  // Thread count never changes the table: per-trial streams plus
  // index-ordered aggregation.
  NoiselessSweepConfig threaded = cfg;
  threaded.threads = 3;
  std::ostringstream c;
  io::write_success_table_csv(c, run_noiseless_sweep(threaded));
  CHECK(a.str() == c.str());
}
