#pragma once

#include <Eigen/Dense>

namespace grasspack {

/// Columns of a stored basis must be orthonormal to this tolerance
/// (max-abs entry of B^T B - I).
inline constexpr double kOrthonormalTol = 1e-10;

/// Full column rank is required: smallest singular value must exceed this
/// fraction of the largest.
inline constexpr double kRankTol = 1e-8;

/// A point of the Grassmann manifold G(m, k), held as an m x k matrix with
/// orthonormal columns. Two Subspace values with different bases may span
/// the same subspace; every distance in this library depends on span only.
class Subspace {
 public:
  /// Wraps an already-orthonormal basis. Throws CorruptBasis when the
  /// orthonormality error exceeds `tol`, InvalidProblem on empty shapes or
  /// k > m.
  static Subspace from_orthonormal(Eigen::MatrixXd basis,
                                   double tol = kOrthonormalTol);

  const Eigen::MatrixXd& basis() const noexcept { return basis_; }
  int ambient_dim() const noexcept { return static_cast<int>(basis_.rows()); }
  int dim() const noexcept { return static_cast<int>(basis_.cols()); }

  /// max |B^T B - I|
  double orthonormality_error() const;

 private:
  friend Subspace orthonormalize(const Eigen::MatrixXd& raw);
  friend Subspace retract(const Eigen::MatrixXd& raw);

  explicit Subspace(Eigen::MatrixXd basis) : basis_(std::move(basis)) {}

  Eigen::MatrixXd basis_;
};

/// Orthonormal basis of the column space of `raw` via Householder QR with
/// the sign convention diag(R) >= 0, so the result is deterministic.
/// Throws RankDeficient unless sigma_min(raw) > kRankTol * sigma_max(raw).
Subspace orthonormalize(const Eigen::MatrixXd& raw);

/// QR retraction without the rank probe. Only for inputs known to have full
/// column rank (e.g. X + t*xi with xi orthogonal to X).
Subspace retract(const Eigen::MatrixXd& raw);

/// max |A^T A - I| for any tall matrix.
double orthonormality_error(const Eigen::MatrixXd& basis);

}  // namespace grasspack
