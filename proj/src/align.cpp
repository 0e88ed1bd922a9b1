#include "rmds/align.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rmds {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << who << ": point clouds differ in shape (" << a.rows() << "x"
        << a.cols() << " vs " << b.rows() << "x" << b.cols() << ")";
    throw ValidationError(msg.str());
  }
}

double rmse_all_rows(const Matrix& diff) {
  return std::sqrt(diff.squaredNorm() / static_cast<double>(diff.rows()));
}

}  // namespace

AlignmentResult procrustes_rotation(const Matrix& x_ref, const Matrix& x) {
  check_same_shape(x_ref, x, "procrustes_rotation");
  Eigen::JacobiSVD<Matrix> svd(x_ref.transpose() * x,
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  AlignmentResult out;
  out.rotation = svd.matrixU() * svd.matrixV().transpose();
  const Matrix diff = x - x_ref * out.rotation;
  out.residual_two_inf = norm_two_inf(diff);
  out.residual_rmse = rmse_all_rows(diff);
  return out;
}

AlignmentResult anchor_align(const Matrix& anchors_ref, const Matrix& anchors_rec) {
  check_same_shape(anchors_ref, anchors_rec, "anchor_align");
  const int count = static_cast<int>(anchors_ref.rows());
  const int dim = static_cast<int>(anchors_ref.cols());
  if (count < dim + 1) {
    throw ValidationError("anchor_align: need at least dim+1 anchors");
  }

  const Eigen::RowVectorXd ref_mean = anchors_ref.colwise().mean();
  const Eigen::RowVectorXd rec_mean = anchors_rec.colwise().mean();
  const Matrix ref_c = anchors_ref.rowwise() - ref_mean;
  const Matrix rec_c = anchors_rec.rowwise() - rec_mean;

  // General-position check: centered anchors must span the full dimension.
  for (const auto* set : {&ref_c, &rec_c}) {
    Eigen::JacobiSVD<Matrix> svd(*set);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(dim - 1) < 1e-9 * sv(0)) {
      throw ValidationError(
          set == &ref_c
              ? "anchor_align: reference anchors are degenerate (collinear)"
              : "anchor_align: reconstructed anchors are degenerate (collinear)");
    }
  }

  AlignmentResult out = procrustes_rotation(rec_c, ref_c);
  out.translation = (ref_mean - rec_mean * out.rotation).transpose();
  const Matrix mapped = apply_alignment(out, anchors_rec);
  const Matrix diff = mapped - anchors_ref;
  out.residual_two_inf = norm_two_inf(diff);
  out.residual_rmse = rmse_all_rows(diff);
  return out;
}

Matrix apply_alignment(const AlignmentResult& map, const Matrix& pts) {
  Matrix out = pts * map.rotation;
  if (map.translation) out.rowwise() += map.translation->transpose();
  return out;
}

double rmse_non_anchor(const Matrix& x_rec_aligned, const Matrix& x_true,
                       const std::vector<int>& anchor_idx) {
  check_same_shape(x_rec_aligned, x_true, "rmse_non_anchor");
  const int n = static_cast<int>(x_true.rows());
  std::vector<bool> is_anchor(static_cast<std::size_t>(n), false);
  for (int idx : anchor_idx) {
    if (idx < 0 || idx >= n) {
      throw ValidationError("rmse_non_anchor: anchor index out of range");
    }
    is_anchor[static_cast<std::size_t>(idx)] = true;
  }
  double sum = 0.0;
  int non_anchor = 0;
  for (int i = 0; i < n; ++i) {
    if (is_anchor[static_cast<std::size_t>(i)]) continue;
    sum += (x_rec_aligned.row(i) - x_true.row(i)).squaredNorm();
    ++non_anchor;
  }
  if (non_anchor == 0) {
    throw ValidationError("rmse_non_anchor: no non-anchor points");
  }
  return std::sqrt(sum / static_cast<double>(non_anchor));
}

}  // namespace rmds
