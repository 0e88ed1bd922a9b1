#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

#include "rmds/errors.hpp"

namespace rmds {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Symmetric hollow matrix of squared pairwise distances.
struct SquaredDistanceMatrix {
  Matrix entries;

  SquaredDistanceMatrix() = default;
  explicit SquaredDistanceMatrix(Matrix m) : entries(std::move(m)) {}

  int size() const { return static_cast<int>(entries.rows()); }

  /// Validates symmetry (within sym_tol), hollowness, and squareness.
  /// Throws ValidationError naming the first offending entry.
  static SquaredDistanceMatrix from_matrix(Matrix m, double sym_tol = 1e-8);
};

/// Rank-r PSD Gram matrix stored in factorized form: an orthonormal n x r
/// basis and descending nonnegative eigenvalues.
struct FactorizedGram {
  Matrix basis;  // n x r, orthonormal columns
  Vector evals;  // length r, descending, >= 0

  int size() const { return static_cast<int>(basis.rows()); }
  int rank() const { return static_cast<int>(basis.cols()); }

  /// Represented matrix U diag(evals) U^T.
  Matrix to_matrix() const;

  /// Embedding X = U diag(evals)^{1/2}; rows are recovered points.
  Matrix embed_points() const;
};

struct SparseEntry {
  int i, j;  // i <= j
  double value;
};

/// Symmetric sparse matrix with explicit support, stored as upper-triangular
/// (i <= j) entries in lexicographic order.
struct SparseSymmetric {
  int n = 0;
  std::vector<SparseEntry> entries;

  Matrix to_dense() const;
  std::size_t support_size() const { return entries.size(); }

  /// Max over rows of the per-row nonzero count (diagonal counts once).
  int max_row_support() const;

  bool support_subset_of(const SparseSymmetric& other) const;
  double norm_inf() const;
};

// Operators on symmetric matrices (dense, row-major Eigen storage).

/// EDM operator: maps a Gram-like matrix Z to diag(Z)1^T + 1 diag(Z)^T - 2Z.
/// Output is symmetric and exactly hollow.
Matrix edm_from_gram(const Matrix& z);

/// Double-centering operator: -1/2 J Z J with J = I - (1/n) 1 1^T.
/// Inverts edm_from_gram on centered matrices.
Matrix gram_from_edm(const Matrix& z);

/// Keeps entries with |z| strictly greater than xi, zeroes the rest.
/// Reads the upper triangle of z; xi must be positive.
SparseSymmetric hard_threshold(const Matrix& z, double xi);

/// Nearest rank-r PSD approximation: top-r eigenpairs with negative
/// eigenvalues clamped to zero. Clamped directions get a deterministic
/// orthonormal completion (canonical directions orthogonalized against the
/// kept eigenvectors), so the basis is always n x r orthonormal.
FactorizedGram psd_rank_truncate(const Matrix& z, int r);

/// Classic MDS: rank-r PSD truncation of the double-centered EDM, then
/// X = U diag(evals)^{1/2}. Recovers centered points up to rotation on an
/// exact outlier-free EDM.
Matrix classic_mds(const SquaredDistanceMatrix& d, int r);

// Norms.
double norm_inf(const Matrix& z);       // max |entry|
double norm_two_inf(const Matrix& z);   // max row l2 norm
double norm_spectral(const Matrix& z);  // largest singular value
double norm_frobenius(const Matrix& z);

namespace detail {
/// Extends `kept` (n x k, orthonormal columns) by `extra` deterministic
/// orthonormal columns built from canonical directions. With k = 0 the
/// result is the first `extra` canonical directions.
Matrix orthonormal_completion(const Matrix& kept, int n, int extra);

/// Full symmetric eigendecomposition sorted descending, ties broken by the
/// solver's output index. Throws NumericalError if the solver fails.
void symmetric_eig_descending(const Matrix& z, Matrix& vectors, Vector& values);
}  // namespace detail

}  // namespace rmds
