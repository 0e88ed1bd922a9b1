#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rmds/edm.hpp"
#include "rmds/manifold.hpp"

namespace rmds {

/// Ground truth for instrumented runs: the clean Gram factorization, the
/// true outliers, and the eigen-embedding X* = U* diag(evals*)^{1/2}.
struct GroundTruth {
  FactorizedGram gram;
  SparseSymmetric outliers;
  Matrix points;
};

struct SolverConfig {
  int rank = 2;
  double xi0 = 0.0;                  // initial threshold, squared-distance units
  double gamma = 0.7;                // decay rate, in (0,1); warns below 1/3
  int max_iters = 200;
  double rel_change_tol = 1e-12;     // on the represented Gram, Frobenius
  double threshold_floor = 1e-14;    // stop once xi_k < threshold_floor * xi0
  bool capture_trace = false;
  std::optional<GroundTruth> ground_truth;

  void validate() const;
};

/// One record per iteration k >= 0. Error fields are NaN unless ground truth
/// was supplied; rel_change is NaN at k = 0 (no previous iterate).
struct TraceRecord {
  int k = 0;
  double xi = 0.0;
  std::size_t support_size = 0;
  double rel_change = 0.0;
  double err_outlier_inf = 0.0;   // |S^k - S*|_inf
  double err_gram_inf = 0.0;      // |L^{k+1} - L*|_inf
  double err_points_two_inf = 0.0;  // |X^{k+1} - X* R^{k+1}|_{2,inf}
  bool support_contained = false;   // supp(S^k) within supp(S*)
};

struct SolverTrace {
  std::vector<TraceRecord> records;
};

enum class Termination { threshold_floor, rel_change, max_iters };

const char* termination_name(Termination t);

struct SolverResult {
  FactorizedGram gram;      // final L
  Matrix points;            // X = U diag(evals)^{1/2}
  SparseSymmetric outliers; // final S
  int iterations = 0;       // completed iterations, counting k = 0
  Termination termination = Termination::max_iters;
  SolverTrace trace;        // empty unless capture_trace or ground_truth
};

/// Robust MDS by alternating projections with the accelerated tangent-space
/// update. Initialization: S0 = threshold(D, xi0), L1 from a full
/// truncation of the double-centered residual; afterwards alternates
/// S^k = threshold(D - edm(L^k), xi0 * gamma^k) with the accelerated
/// rank-r update at L^k.
SolverResult rmds_aap(const SquaredDistanceMatrix& d, const SolverConfig& cfg);

enum class Xi0Mode { absolute, multiple_of_clean_inf, robust_estimate };

Xi0Mode xi0_mode_from_string(const std::string& s);
std::string xi0_mode_to_string(Xi0Mode m);

/// Initial-threshold selection.
///   absolute:               returns value
///   multiple_of_clean_inf:  value * |clean|_inf (requires `clean`)
///   robust_estimate:        value * (q-quantile of off-diagonal entries of d);
///                           a heuristic for blind use, rejected for n < 3
double resolve_xi0(const SquaredDistanceMatrix& d, Xi0Mode mode, double value,
                   const SquaredDistanceMatrix* clean = nullptr,
                   double quantile = 0.98);

}  // namespace rmds
