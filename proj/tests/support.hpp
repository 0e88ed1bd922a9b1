#pragma once

// Test-side oracles and generators. The Jacobi eigensolver here is the
// independent reference for everything the library computes through its own
// eigendecomposition path.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "rmds/edm.hpp"
#include "rmds/rng.hpp"

namespace testsupport {

using rmds::Matrix;
using rmds::Vector;

// Cyclic Jacobi eigendecomposition of a symmetric matrix, eigenvalues
// descending. Independent of Eigen's solver.
inline std::pair<Matrix, Vector> jacobi_eig(Matrix a) {
  const int n = static_cast<int>(a.rows());
  Matrix v = Matrix::Identity(n, n);
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (std::sqrt(off) < 1e-14 * scale) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&a](int x, int y) { return a(x, x) > a(y, y); });
  Matrix vecs(n, n);
  Vector vals(n);
  for (int k = 0; k < n; ++k) {
    vals(k) = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    vecs.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return {vecs, vals};
}

// Frobenius-nearest rank-r PSD truncation via the Jacobi oracle.
inline Matrix psd_truncate_oracle(const Matrix& z, int r) {
  auto [vecs, vals] = jacobi_eig(z);
  Matrix out = Matrix::Zero(z.rows(), z.cols());
  for (int i = 0; i < r; ++i) {
    if (vals(i) > 0.0) out += vals(i) * vecs.col(i) * vecs.col(i).transpose();
  }
  return out;
}

// Tangent projection written directly from the dense projector.
inline Matrix tangent_project_oracle(const Matrix& basis, const Matrix& z) {
  const Matrix p = basis * basis.transpose();
  return p * z + z * p - p * z * p;
}

inline Matrix random_symmetric(rmds::Rng& rng, int n, double range = 1.0) {
  Matrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      z(i, j) = z(j, i) = rng.uniform(-range, range);
    }
  }
  return z;
}

inline Matrix random_points(rmds::Rng& rng, int n, int r, double range = 5.0) {
  Matrix x(n, r);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r; ++j) x(i, j) = rng.uniform(-range, range);
  }
  return x;
}

// Haar-ish random orthogonal matrix: QR of a Gaussian, signs fixed from the
// R diagonal. Reflections included.
inline Matrix random_orthogonal(rmds::Rng& rng, int r) {
  Matrix g(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) g(i, j) = rng.normal(1.0);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < r; ++j) {
    if (rr(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

// Rank-r PSD gram point from random coordinates, through the library's
// factorization type but built with the Jacobi oracle.
inline rmds::FactorizedGram random_gram(rmds::Rng& rng, int n, int r) {
  const Matrix x = random_points(rng, n, r);
  auto [vecs, vals] = jacobi_eig(x * x.transpose());
  rmds::FactorizedGram g;
  g.basis = vecs.leftCols(r);
  g.evals = vals.head(r).cwiseMax(0.0);
  return g;
}

inline double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testsupport
