// Python bindings for the main operations: operators, MDS, the solver,
// alignment, and the benchmark generators.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rmds/align.hpp"
#include "rmds/bench.hpp"
#include "rmds/manifold.hpp"
#include "rmds/solver.hpp"

namespace py = pybind11;
using namespace rmds;

namespace {

SquaredDistanceMatrix as_edm(const Matrix& d) {
  return SquaredDistanceMatrix::from_matrix(d);
}

py::dict gram_to_dict(const FactorizedGram& g) {
  py::dict out;
  out["basis"] = g.basis;
  out["evals"] = g.evals;
  return out;
}

py::dict instance_to_dict(const InstanceBundle& b) {
  py::dict out;
  out["points_true"] = b.points_true;
  out["d_clean"] = b.d_clean.entries;
  out["d_observed"] = b.d_observed.entries;
  out["outliers_true"] = b.outliers_true.to_dense();
  out["gram_basis"] = b.gram_true.basis;
  out["gram_evals"] = b.gram_true.evals;
  out["anchor_idx"] = b.anchor_idx;
  out["eligible_pairs"] = b.eligible_pair_count();
  return out;
}

InstanceBundle instance_from_dicts(const Matrix& points_true, const Matrix& d_clean,
                                   const Matrix& d_observed,
                                   const std::vector<int>& anchor_idx) {
  InstanceBundle b;
  b.points_true = points_true;
  b.d_clean = as_edm(d_clean);
  b.d_observed = as_edm(d_observed);
  b.anchor_idx = anchor_idx;
  const Matrix centered = points_true.rowwise() - points_true.colwise().mean();
  b.gram_true = psd_rank_truncate(centered * centered.transpose(),
                                  static_cast<int>(points_true.cols()));
  b.outliers_true.n = b.size();
  for (int i = 0; i < b.size(); ++i) {
    for (int j = i; j < b.size(); ++j) {
      const double diff = d_observed(i, j) - d_clean(i, j);
      if (diff != 0.0) b.outliers_true.entries.push_back({i, j, diff});
    }
  }
  return b;
}

}  // namespace

PYBIND11_MODULE(_rmds, m) {
  m.doc() = "Robust multidimensional scaling via accelerated alternating projections";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  m.def("edm_from_gram", &edm_from_gram, py::arg("z"),
        "Squared-distance matrix induced by a Gram-like matrix.");
  m.def("gram_from_edm", &gram_from_edm, py::arg("z"),
        "Double-centering operator -0.5 * J Z J.");
  m.def(
      "hard_threshold",
      [](const Matrix& z, double xi) { return hard_threshold(z, xi).to_dense(); },
      py::arg("z"), py::arg("xi"),
      "Keep entries with |z| strictly above xi; returns the dense result.");
  m.def(
      "psd_rank_truncate",
      [](const Matrix& z, int r) { return gram_to_dict(psd_rank_truncate(z, r)); },
      py::arg("z"), py::arg("rank"));
  m.def(
      "classic_mds",
      [](const Matrix& d, int r) { return classic_mds(as_edm(d), r); },
      py::arg("d"), py::arg("rank"),
      "Classic MDS embedding of a squared-distance matrix.");
  m.def("norm_inf", &norm_inf);
  m.def("norm_two_inf", &norm_two_inf);
  m.def("norm_spectral", &norm_spectral);
  m.def("norm_frobenius", &norm_frobenius);

  m.def(
      "tangent_project",
      [](const Matrix& basis, const Vector& evals, const Matrix& z) {
        return tangent_project(FactorizedGram{basis, evals}, z);
      },
      py::arg("basis"), py::arg("evals"), py::arg("z"));
  m.def(
      "accelerated_update",
      [](const Matrix& basis, const Vector& evals, const Matrix& w, int r) {
        return gram_to_dict(accelerated_update(FactorizedGram{basis, evals}, w, r));
      },
      py::arg("basis"), py::arg("evals"), py::arg("w"), py::arg("rank"));

  m.def(
      "rmds_aap",
      [](const Matrix& d, int rank, double xi0, double gamma, int max_iters,
         double rel_change_tol, bool capture_trace) {
        SolverConfig cfg;
        cfg.rank = rank;
        cfg.xi0 = xi0;
        cfg.gamma = gamma;
        cfg.max_iters = max_iters;
        cfg.rel_change_tol = rel_change_tol;
        cfg.capture_trace = capture_trace;
        const SolverResult res = rmds_aap(as_edm(d), cfg);
        py::dict out;
        out["points"] = res.points;
        out["gram_basis"] = res.gram.basis;
        out["gram_evals"] = res.gram.evals;
        out["outliers"] = res.outliers.to_dense();
        out["outlier_support"] = res.outliers.support_size();
        out["iterations"] = res.iterations;
        out["termination"] = termination_name(res.termination);
        if (capture_trace) {
          py::list trace;
          for (const auto& rec : res.trace.records) {
            py::dict row;
            row["k"] = rec.k;
            row["xi"] = rec.xi;
            row["support_size"] = rec.support_size;
            row["rel_change"] = rec.rel_change;
            trace.append(row);
          }
          out["trace"] = trace;
        }
        return out;
      },
      py::arg("d"), py::arg("rank"), py::arg("xi0"), py::arg("gamma") = 0.7,
      py::arg("max_iters") = 200, py::arg("rel_change_tol") = 1e-12,
      py::arg("capture_trace") = false,
      "Recover a rank-r Gram factorization and sparse outliers from a "
      "corrupted squared-distance matrix.");

  m.def(
      "resolve_xi0",
      [](const Matrix& d, const std::string& mode, double value,
         std::optional<Matrix> clean, double quantile) {
        std::optional<SquaredDistanceMatrix> c;
        if (clean) c = as_edm(*clean);
        return resolve_xi0(as_edm(d), xi0_mode_from_string(mode), value,
                           c ? &*c : nullptr, quantile);
      },
      py::arg("d"), py::arg("mode"), py::arg("value"),
      py::arg("clean") = std::nullopt, py::arg("quantile") = 0.98);

  m.def(
      "procrustes_rotation",
      [](const Matrix& x_ref, const Matrix& x) {
        const AlignmentResult al = procrustes_rotation(x_ref, x);
        py::dict out;
        out["rotation"] = al.rotation;
        out["residual_two_inf"] = al.residual_two_inf;
        out["residual_rmse"] = al.residual_rmse;
        return out;
      },
      py::arg("x_ref"), py::arg("x"));
  m.def(
      "anchor_align",
      [](const Matrix& anchors_ref, const Matrix& anchors_rec, const Matrix& pts) {
        const AlignmentResult al = anchor_align(anchors_ref, anchors_rec);
        py::dict out;
        out["rotation"] = al.rotation;
        out["translation"] = *al.translation;
        out["residual_two_inf"] = al.residual_two_inf;
        out["aligned"] = apply_alignment(al, pts);
        return out;
      },
      py::arg("anchors_ref"), py::arg("anchors_rec"), py::arg("points"),
      "Rigid map fitted on anchors, applied to a full point cloud.");
  m.def("rmse_non_anchor", &rmse_non_anchor, py::arg("x_rec_aligned"),
        py::arg("x_true"), py::arg("anchor_idx"));

  m.def("gen_plus_sign_101", [] { return instance_to_dict(gen_plus_sign_101()); });
  m.def("gen_plus_sign_25", [] { return instance_to_dict(gen_plus_sign_25()); });
  m.def(
      "corrupt",
      [](const Matrix& points_true, const Matrix& d_clean, int outlier_count,
         double outlier_max, double noise_sigma2,
         const std::vector<std::pair<int, int>>& excluded_pairs,
         std::uint64_t seed) {
        InstanceBundle base = instance_from_dicts(
            points_true, d_clean, d_clean, {});
        CorruptionSpec cs;
        cs.outlier_count = outlier_count;
        cs.outlier_max = outlier_max;
        cs.noise_sigma2 = noise_sigma2;
        cs.excluded_pairs = excluded_pairs;
        cs.seed = seed;
        return instance_to_dict(corrupt(base, cs));
      },
      py::arg("points_true"), py::arg("d_clean"), py::arg("outlier_count"),
      py::arg("outlier_max") = 40.0, py::arg("noise_sigma2") = 0.0,
      py::arg("excluded_pairs") = std::vector<std::pair<int, int>>{},
      py::arg("seed") = 0);
  m.def(
      "diagnostics",
      [](const Matrix& points_true, const Matrix& d_clean, const Matrix& d_observed,
         double gamma) {
        const InstanceBundle b =
            instance_from_dicts(points_true, d_clean, d_observed, {});
        const DiagnosticsReport rep = diagnostics(b, gamma);
        py::dict out;
        out["mu"] = rep.mu;
        out["kappa"] = rep.kappa;
        out["alpha"] = rep.alpha;
        out["alpha_bound"] = rep.alpha_bound;
        out["in_regime"] = rep.in_regime;
        return out;
      },
      py::arg("points_true"), py::arg("d_clean"), py::arg("d_observed"),
      py::arg("gamma"));
}
