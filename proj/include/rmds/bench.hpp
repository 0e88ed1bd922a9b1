#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rmds/edm.hpp"
#include "rmds/solver.hpp"

namespace rmds {

/// Corruption model applied in the distance domain: optional Gaussian noise
/// on every pair, then uniform outliers on `outlier_count` pairs sampled
/// without replacement from the eligible pairs (all i < j minus
/// `excluded_pairs`). The observed entry is the squared corrupted distance.
struct CorruptionSpec {
  int outlier_count = 0;
  double outlier_max = 40.0;   // outliers uniform on [0, outlier_max], distance units
  double noise_sigma2 = 0.0;   // Gaussian variance on distances
  std::vector<std::pair<int, int>> excluded_pairs;
  std::uint64_t seed = 0;
};

struct InstanceBundle {
  Matrix points_true;              // n x r, original (uncentered) coordinates
  SquaredDistanceMatrix d_clean;
  SquaredDistanceMatrix d_observed;
  SparseSymmetric outliers_true;   // d_observed - d_clean
  FactorizedGram gram_true;        // Gram of the centered points
  std::vector<int> anchor_idx;     // empty when the instance has no anchors

  int size() const { return static_cast<int>(points_true.rows()); }
  int dim() const { return static_cast<int>(points_true.cols()); }

  /// Unordered pairs eligible for outliers: C(n,2) minus anchor-anchor pairs.
  std::size_t eligible_pair_count() const;

  /// The anchor-anchor pairs, for CorruptionSpec::excluded_pairs.
  std::vector<std::pair<int, int>> anchor_pairs() const;

  GroundTruth ground_truth() const;
};

/// 101-point plus sign: unit-spaced arms through (6,6) with endpoints
/// (-19,6), (31,6), (6,-19), (6,31); the center point is shared.
InstanceBundle gen_plus_sign_101();

/// 25-point plus sign with half-width 6 arms through (6,6) and anchors at
/// (0,6), (12,6), (6,0), (6,12).
InstanceBundle gen_plus_sign_25();

InstanceBundle corrupt(const InstanceBundle& instance, const CorruptionSpec& spec);

struct DiagnosticsReport {
  double mu = 0.0;           // incoherence of the clean Gram basis
  double kappa = 0.0;        // condition number of the clean Gram
  double alpha = 0.0;        // max row support of the outliers / n
  double alpha_bound = 0.0;  // gamma / (1624 mu r kappa^2)
  bool in_regime = false;
};

DiagnosticsReport diagnostics(const InstanceBundle& instance, double gamma);

// Monte-Carlo sweeps over the plus-sign protocols. Trials run in parallel
// (capped by `threads`; 0 means hardware concurrency) on per-trial RNG
// streams derived from (seed, cell index, trial index), so results do not
// depend on the thread count.

struct NoiselessSweepConfig {
  std::vector<double> p_grid{0.05, 0.1, 0.15, 0.2, 0.25, 0.3,
                             0.35, 0.4, 0.45, 0.5, 0.55, 0.6};
  std::vector<double> gamma_grid{0.5, 0.7, 0.9};
  std::vector<double> xi0_multipliers{1.2};
  int trials = 100;
  double outlier_max = 40.0;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct SuccessCell {
  double p = 0.0;
  double gamma = 0.0;
  double xi0_multiplier = 0.0;
  int trials = 0;
  int successes = 0;
  double rate = 0.0;
};

/// 101-point noiseless protocol; a trial succeeds when the final embedding
/// lands within 0.01 * |X*|_{2,inf} of X* after rotation alignment.
std::vector<SuccessCell> run_noiseless_sweep(const NoiselessSweepConfig& cfg);

struct NoisySweepConfig {
  std::vector<double> sigma2_grid{0.0, 0.1, 0.2};
  std::vector<int> m_grid{15, 30, 45, 60, 75};
  int trials = 100;
  double outlier_max = 20.0;
  double xi0_multiplier = 1.2;
  double gamma = 0.7;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct RmseCell {
  double sigma2 = 0.0;
  int m = 0;
  std::string method;  // "rmds_aap" or "classic_mds"
  double mean_rmse = 0.0;
  double std_rmse = 0.0;  // sample standard deviation
};

/// 25-point noisy protocol with anchor alignment; reports RMSE over the 21
/// non-anchor points for the solver and for the unprotected classic-MDS
/// baseline on the same instances.
std::vector<RmseCell> run_noisy_sweep(const NoisySweepConfig& cfg);

}  // namespace rmds
