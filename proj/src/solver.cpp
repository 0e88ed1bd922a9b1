#include "rmds/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "rmds/align.hpp"

namespace rmds {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void fill_ground_truth_errors(TraceRecord& rec, const GroundTruth& gt,
                              const SparseSymmetric& s, const Matrix& gram_dense,
                              const FactorizedGram& gram) {
  rec.err_outlier_inf = norm_inf(s.to_dense() - gt.outliers.to_dense());
  rec.err_gram_inf = norm_inf(gram_dense - gt.gram.to_matrix());
  const Matrix x = gram.embed_points();
  const AlignmentResult al = procrustes_rotation(gt.points, x);
  rec.err_points_two_inf = al.residual_two_inf;
  rec.support_contained = s.support_subset_of(gt.outliers);
}

}  // namespace

void SolverConfig::validate() const {
  if (rank < 1) throw ValidationError("solver: rank must be >= 1");
  if (!(xi0 > 0.0)) throw ValidationError("solver: xi0 must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw ValidationError("solver: gamma must lie in (0,1)");
  }
  if (max_iters < 1) throw ValidationError("solver: max_iters must be >= 1");
  if (rel_change_tol < 0.0) {
    throw ValidationError("solver: rel_change_tol must be nonnegative");
  }
  if (gamma < 1.0 / 3.0) {
    std::cerr << "rmds: warning: gamma = " << gamma
              << " is below 1/3; the convergence guarantee assumes gamma in [1/3, 1)\n";
  }
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::threshold_floor: return "threshold_floor";
    case Termination::rel_change: return "rel_change";
    case Termination::max_iters: return "max_iters";
  }
  return "unknown";
}

SolverResult rmds_aap(const SquaredDistanceMatrix& d, const SolverConfig& cfg) {
  cfg.validate();
  const int n = d.size();
  if (cfg.rank > n) throw ValidationError("solver: rank exceeds matrix size");
  const Matrix& dd = d.entries;
  const bool tracing = cfg.capture_trace || cfg.ground_truth.has_value();

  SolverResult res;

  // Initialization: S0 from the raw observations, L1 from a full truncation.
  SparseSymmetric s = hard_threshold(dd, cfg.xi0);
  FactorizedGram gram = psd_rank_truncate(gram_from_edm(dd - s.to_dense()), cfg.rank);
  Matrix gram_dense = gram.to_matrix();

  if (tracing) {
    TraceRecord rec;
    rec.k = 0;
    rec.xi = cfg.xi0;
    rec.support_size = s.support_size();
    rec.rel_change = kNan;
    if (cfg.ground_truth) {
      fill_ground_truth_errors(rec, *cfg.ground_truth, s, gram_dense, gram);
    } else {
      rec.err_outlier_inf = rec.err_gram_inf = rec.err_points_two_inf = kNan;
    }
    res.trace.records.push_back(rec);
  }

  res.termination = Termination::max_iters;
  res.iterations = 1;

  for (int k = 1; k <= cfg.max_iters; ++k) {
    const double xi = cfg.xi0 * std::pow(cfg.gamma, static_cast<double>(k));
    if (xi < cfg.threshold_floor * cfg.xi0) {
      res.termination = Termination::threshold_floor;
      break;
    }

    s = hard_threshold(dd - edm_from_gram(gram_dense), xi);
    const Matrix w = gram_from_edm(dd - s.to_dense());
    const FactorizedGram next = accelerated_update(gram, w, cfg.rank);
    const Matrix next_dense = next.to_matrix();
    const double denom = std::max(gram_dense.norm(),
                                  std::numeric_limits<double>::min());
    const double rel = (next_dense - gram_dense).norm() / denom;

    gram = next;
    gram_dense = next_dense;
    res.iterations = k + 1;

    if (tracing) {
      TraceRecord rec;
      rec.k = k;
      rec.xi = xi;
      rec.support_size = s.support_size();
      rec.rel_change = rel;
      if (cfg.ground_truth) {
        fill_ground_truth_errors(rec, *cfg.ground_truth, s, gram_dense, gram);
      } else {
        rec.err_outlier_inf = rec.err_gram_inf = rec.err_points_two_inf = kNan;
      }
      res.trace.records.push_back(rec);
    }

    if (rel < cfg.rel_change_tol) {
      res.termination = Termination::rel_change;
      break;
    }
  }

  res.gram = gram;
  res.points = gram.embed_points();
  res.outliers = s;
  return res;
}

Xi0Mode xi0_mode_from_string(const std::string& s) {
  if (s == "absolute") return Xi0Mode::absolute;
  if (s == "multiple_of_clean_inf") return Xi0Mode::multiple_of_clean_inf;
  if (s == "robust_estimate") return Xi0Mode::robust_estimate;
  throw ValidationError("unknown xi0 mode: " + s);
}

std::string xi0_mode_to_string(Xi0Mode m) {
  switch (m) {
    case Xi0Mode::absolute: return "absolute";
    case Xi0Mode::multiple_of_clean_inf: return "multiple_of_clean_inf";
    case Xi0Mode::robust_estimate: return "robust_estimate";
  }
  return "unknown";
}

double resolve_xi0(const SquaredDistanceMatrix& d, Xi0Mode mode, double value,
                   const SquaredDistanceMatrix* clean, double quantile) {
  switch (mode) {
    case Xi0Mode::absolute:
      if (!(value > 0.0)) throw ValidationError("xi0 must be positive");
      return value;
    case Xi0Mode::multiple_of_clean_inf:
      if (clean == nullptr) {
        throw ValidationError("multiple_of_clean_inf needs the clean matrix");
      }
      return value * norm_inf(clean->entries);
    case Xi0Mode::robust_estimate: {
      const int n = d.size();
      if (n < 3) throw ValidationError("robust_estimate needs n >= 3");
      if (!(quantile > 0.0 && quantile <= 1.0)) {
        throw ValidationError("quantile must lie in (0,1]");
      }
      std::vector<double> offdiag;
      offdiag.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) offdiag.push_back(d.entries(i, j));
      }
      std::sort(offdiag.begin(), offdiag.end());
      // Nearest-rank quantile: smallest value with at least q of the mass.
      const auto count = offdiag.size();
      std::size_t pos = static_cast<std::size_t>(
          std::ceil(quantile * static_cast<double>(count)));
      pos = std::min(std::max<std::size_t>(pos, 1), count) - 1;
      return value * offdiag[pos];
    }
  }
  throw ValidationError("unknown xi0 mode");
}

}  // namespace rmds
