#include "rmds/edm.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rmds {

SquaredDistanceMatrix SquaredDistanceMatrix::from_matrix(Matrix m, double sym_tol) {
  const auto n = m.rows();
  if (m.cols() != n) {
    std::ostringstream msg;
    msg << "distance matrix must be square, got " << n << "x" << m.cols();
    throw ValidationError(msg.str());
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > sym_tol) {
        std::ostringstream msg;
        msg << "matrix not symmetric at (" << i << "," << j << "): " << m(i, j)
            << " vs " << m(j, i);
        throw ValidationError(msg.str());
      }
    }
    if (std::abs(m(i, i)) > sym_tol) {
      std::ostringstream msg;
      msg << "matrix not hollow at (" << i << "," << i << "): " << m(i, i);
      throw ValidationError(msg.str());
    }
    if (!m.row(i).allFinite()) {
      std::ostringstream msg;
      msg << "non-finite entry in row " << i;
      throw ValidationError(msg.str());
    }
  }
  return SquaredDistanceMatrix(std::move(m));
}

Matrix FactorizedGram::to_matrix() const {
  return basis * evals.asDiagonal() * basis.transpose();
}

Matrix FactorizedGram::embed_points() const {
  return basis * evals.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

Matrix SparseSymmetric::to_dense() const {
  Matrix out = Matrix::Zero(n, n);
  for (const auto& e : entries) {
    out(e.i, e.j) = e.value;
    out(e.j, e.i) = e.value;
  }
  return out;
}

int SparseSymmetric::max_row_support() const {
  std::vector<int> counts(static_cast<std::size_t>(n), 0);
  for (const auto& e : entries) {
    ++counts[static_cast<std::size_t>(e.i)];
    if (e.j != e.i) ++counts[static_cast<std::size_t>(e.j)];
  }
  return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
}

bool SparseSymmetric::support_subset_of(const SparseSymmetric& other) const {
  // Both entry lists are sorted lexicographically; walk them in lockstep.
  auto it = other.entries.begin();
  for (const auto& e : entries) {
    while (it != other.entries.end() &&
           (it->i < e.i || (it->i == e.i && it->j < e.j))) {
      ++it;
    }
    if (it == other.entries.end() || it->i != e.i || it->j != e.j) return false;
  }
  return true;
}

double SparseSymmetric::norm_inf() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, std::abs(e.value));
  return m;
}

Matrix edm_from_gram(const Matrix& z) {
  const Vector d = z.diagonal();
  Matrix out = -2.0 * z;
  out.colwise() += d;
  out.rowwise() += d.transpose();
  return out;
}

Matrix gram_from_edm(const Matrix& z) {
  // J Z J computed by subtracting column means, then row means.
  Matrix y = z;
  y.rowwise() -= z.colwise().mean();
  y.colwise() -= y.rowwise().mean().eval();
  return -0.5 * y;
}

SparseSymmetric hard_threshold(const Matrix& z, double xi) {
  if (!(xi > 0.0)) throw ValidationError("hard_threshold requires xi > 0");
  SparseSymmetric s;
  s.n = static_cast<int>(z.rows());
  for (int i = 0; i < s.n; ++i) {
    for (int j = i; j < s.n; ++j) {
      const double v = z(i, j);
      if (std::abs(v) > xi) s.entries.push_back({i, j, v});
    }
  }
  return s;
}

namespace detail {

void symmetric_eig_descending(const Matrix& z, Matrix& vectors, Vector& values) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(z);
  if (es.info() != Eigen::Success) {
    throw NumericalError("symmetric eigendecomposition did not converge");
  }
  const int n = static_cast<int>(z.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const Vector& raw = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&raw](int a, int b) {
    if (raw(a) != raw(b)) return raw(a) > raw(b);
    return a < b;
  });
  vectors.resize(n, n);
  values.resize(n);
  for (int k = 0; k < n; ++k) {
    values(k) = raw(order[static_cast<std::size_t>(k)]);
    vectors.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
}

Matrix orthonormal_completion(const Matrix& kept, int n, int extra) {
  Matrix out(n, extra);
  int filled = 0;
  for (int c = 0; c < n && filled < extra; ++c) {
    Vector v = Vector::Zero(n);
    v(c) = 1.0;
    // Two Gram-Schmidt passes against kept columns and earlier completions.
    for (int pass = 0; pass < 2; ++pass) {
      if (kept.cols() > 0) v -= kept * (kept.transpose() * v);
      if (filled > 0) {
        v -= out.leftCols(filled) * (out.leftCols(filled).transpose() * v);
      }
    }
    const double norm = v.norm();
    if (norm > 1e-6) {
      out.col(filled++) = v / norm;
    }
  }
  if (filled < extra) {
    throw NumericalError("orthonormal completion ran out of directions");
  }
  return out;
}

}  // namespace detail

FactorizedGram psd_rank_truncate(const Matrix& z, int r) {
  const int n = static_cast<int>(z.rows());
  if (r < 1 || r > n) throw ValidationError("rank r must satisfy 1 <= r <= n");
  Matrix vec;
  Vector val;
  detail::symmetric_eig_descending(z, vec, val);

  FactorizedGram g;
  g.evals = val.head(r).cwiseMax(0.0);
  int kept = 0;
  while (kept < r && g.evals(kept) > 0.0) ++kept;
  if (kept == r) {
    g.basis = vec.leftCols(r);
  } else {
    g.basis.resize(n, r);
    g.basis.leftCols(kept) = vec.leftCols(kept);
    g.basis.rightCols(r - kept) =
        detail::orthonormal_completion(vec.leftCols(kept), n, r - kept);
  }
  return g;
}

Matrix classic_mds(const SquaredDistanceMatrix& d, int r) {
  const FactorizedGram g = psd_rank_truncate(gram_from_edm(d.entries), r);
  return g.embed_points();
}

double norm_inf(const Matrix& z) {
  return z.size() == 0 ? 0.0 : z.cwiseAbs().maxCoeff();
}

double norm_two_inf(const Matrix& z) {
  return z.size() == 0 ? 0.0 : z.rowwise().norm().maxCoeff();
}

double norm_spectral(const Matrix& z) {
  if (z.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(z);
  return svd.singularValues()(0);
}

double norm_frobenius(const Matrix& z) { return z.norm(); }

}  // namespace rmds
