#pragma once

#include "rmds/edm.hpp"

namespace rmds {

/// A point on the rank-r PSD manifold; its basis spans the tangent space.
using TangentPoint = FactorizedGram;

/// Projection onto the tangent space of the rank-r PSD manifold at `at`:
/// P Z + Z P - P Z P with P = U U^T.
Matrix tangent_project(const TangentPoint& at, const Matrix& z);

/// Rank-r PSD truncation of the tangent-space projection of W, computed
/// without an n x n eigendecomposition.
///
/// Writes P_T(W) = [U Q] M [U Q]^T where Q comes from a thin QR of
/// (I - U U^T) W U and M is the small block matrix [[U^T W U, R^T], [R, 0]]
/// (2r x 2r when n >= 2r; Q shrinks to n - r columns otherwise), then
/// eigendecomposes M. Rank-deficient QR columns are replaced by a
/// deterministic completion orthogonal to [U Q] before R is rebuilt as
/// Q^T (I - U U^T) W U.
///
/// Result matches psd_rank_truncate(tangent_project(at, w), r) on the
/// represented matrices.
FactorizedGram accelerated_update(const TangentPoint& at, const Matrix& w, int r);

/// l2 norm of 1^T U; near zero whenever the iterate stays centered.
double centered_gram_residual(const FactorizedGram& g);

}  // namespace rmds
