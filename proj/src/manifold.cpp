#include "rmds/manifold.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace rmds {

Matrix tangent_project(const TangentPoint& at, const Matrix& z) {
  const Matrix& u = at.basis;
  if (z.rows() != u.rows() || z.cols() != u.rows()) {
    throw ValidationError("tangent_project: dimension mismatch");
  }
  const Matrix zu = z * u;                     // n x r
  Matrix core = u.transpose() * zu;            // r x r
  core = 0.5 * (core + core.transpose()).eval();
  const Matrix uzu = u * core;                 // n x r
  Matrix out = zu * u.transpose();
  out += u * zu.transpose();
  out -= uzu * u.transpose();
  return out;
}

FactorizedGram accelerated_update(const TangentPoint& at, const Matrix& w, int r) {
  const Matrix& u = at.basis;
  const int n = static_cast<int>(u.rows());
  if (r != static_cast<int>(u.cols())) {
    throw ValidationError("accelerated_update: r must match the basis width");
  }
  if (w.rows() != n || w.cols() != n) {
    throw ValidationError("accelerated_update: dimension mismatch");
  }

  const Matrix wu = w * u;            // n x r
  Matrix core = u.transpose() * wu;   // U^T W U
  core = 0.5 * (core + core.transpose()).eval();
  const Matrix y = wu - u * core;     // (I - U U^T) W U

  // Thin QR of y with column pivoting. The complement of span(U) has
  // dimension n - r, so Q carries s = min(r, n - r) columns; columns whose
  // R diagonal falls below 1e-12 * |W U| are rank-deficient and replaced by
  // a deterministic completion orthogonal to [U Q].
  const int s = std::min(r, n - r);
  Eigen::ColPivHouseholderQR<Matrix> qr(y);
  Matrix q = qr.householderQ() * Matrix::Identity(n, s);
  const double scale = wu.norm();
  const Vector rdiag = qr.matrixR().topLeftCorner(s, s).diagonal().cwiseAbs();
  int kept = 0;
  while (kept < s && rdiag(kept) > 1e-12 * scale) ++kept;
  if (kept < s) {
    Matrix span(n, r + kept);
    span << u, q.leftCols(kept);
    q.rightCols(s - kept) = detail::orthonormal_completion(span, n, s - kept);
  }

  if (s > 0) {
    // Re-orthogonalize q against u, then within itself, so [u q] stays
    // orthonormal even when y is ill-conditioned; rebuild R against the
    // corrected q.
    q -= u * (u.transpose() * q);
    Eigen::HouseholderQR<Matrix> reortho(q);
    q = reortho.householderQ() * Matrix::Identity(n, s);
  }
  const Matrix r_eff = q.transpose() * y;  // s x r; q * r_eff == y up to rounding

  Matrix m(r + s, r + s);
  m.topLeftCorner(r, r) = core;
  m.topRightCorner(r, s) = r_eff.transpose();
  m.bottomLeftCorner(s, r) = r_eff;
  m.bottomRightCorner(s, s).setZero();
  m = 0.5 * (m + m.transpose()).eval();

  Matrix mvec;
  Vector mval;
  detail::symmetric_eig_descending(m, mvec, mval);

  Matrix joint(n, r + s);
  joint << u, q;
  FactorizedGram out;
  out.basis = joint * mvec.leftCols(r);
  out.evals = mval.head(r).cwiseMax(0.0);
  return out;
}

double centered_gram_residual(const FactorizedGram& g) {
  if (g.basis.size() == 0) return 0.0;
  return (Eigen::RowVectorXd::Ones(g.size()) * g.basis).norm();
}

}  // namespace rmds
