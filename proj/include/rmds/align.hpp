#pragma once

#include <optional>
#include <vector>

#include "rmds/edm.hpp"

namespace rmds {

/// Rigid (or rotation-only) alignment between two point clouds, with the
/// residuals of the aligned pair. `rotation` is orthogonal (reflections
/// allowed) and acts on row vectors from the right.
struct AlignmentResult {
  Matrix rotation;                    // r x r, G^T G = I
  std::optional<Vector> translation;  // present for anchor-based alignment
  double residual_two_inf = 0.0;
  double residual_rmse = 0.0;
};

/// Orthogonal map R minimizing |x - x_ref R|_F, from the SVD of x_ref^T x.
/// Both clouds are expected to be centered.
AlignmentResult procrustes_rotation(const Matrix& x_ref, const Matrix& x);

/// Least-squares rigid map (orthogonal + translation) fitted on anchor
/// pairs, mapping `anchors_rec` onto `anchors_ref`. Needs at least dim+1
/// anchors in general position; degenerate anchor sets are rejected.
AlignmentResult anchor_align(const Matrix& anchors_ref, const Matrix& anchors_rec);

/// Applies an alignment to a point cloud: pts * R (+ translation).
Matrix apply_alignment(const AlignmentResult& map, const Matrix& pts);

/// Root-mean-square l2 error over the non-anchor rows; the divisor is the
/// non-anchor count.
double rmse_non_anchor(const Matrix& x_rec_aligned, const Matrix& x_true,
                       const std::vector<int>& anchor_idx);

}  // namespace rmds
