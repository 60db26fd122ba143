#include "grasspack/subspace.hpp"

#include <sstream>

#include "grasspack/error.hpp"

namespace grasspack {

namespace {

void check_shape(const Eigen::MatrixXd& m) {
  if (m.rows() < 1 || m.cols() < 1 || m.cols() > m.rows()) {
    std::ostringstream msg;
    msg << "basis must be m x k with 1 <= k <= m, got " << m.rows() << " x "
        << m.cols();
    throw Error(ErrorKind::InvalidProblem, msg.str());
  }
}

// Thin Q factor with diag(R) >= 0.
Eigen::MatrixXd positive_qr(const Eigen::MatrixXd& raw) {
  const Eigen::Index m = raw.rows();
  const Eigen::Index k = raw.cols();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, k);
  const auto& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < k; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

double orthonormality_error(const Eigen::MatrixXd& basis) {
  const Eigen::Index k = basis.cols();
  return (basis.transpose() * basis - Eigen::MatrixXd::Identity(k, k))
      .cwiseAbs()
      .maxCoeff();
}

double Subspace::orthonormality_error() const {
  return grasspack::orthonormality_error(basis_);
}

Subspace Subspace::from_orthonormal(Eigen::MatrixXd basis, double tol) {
  check_shape(basis);
  if (!basis.allFinite()) {
    throw Error(ErrorKind::CorruptBasis, "basis contains non-finite entries");
  }
  const double err = grasspack::orthonormality_error(basis);
  if (!(err <= tol)) {
    std::ostringstream msg;
    msg << "basis columns are not orthonormal (max |B^T B - I| = " << err
        << ", tolerance " << tol << ")";
    throw Error(ErrorKind::CorruptBasis, msg.str());
  }
  return Subspace(std::move(basis));
}

Subspace orthonormalize(const Eigen::MatrixXd& raw) {
  check_shape(raw);
  if (!raw.allFinite()) {
    throw Error(ErrorKind::RankDeficient, "matrix contains non-finite entries");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(raw);
  const auto& sv = svd.singularValues();
  const double largest = sv(0);
  const double smallest = sv(sv.size() - 1);
  if (!(largest > 0.0) || !(smallest > kRankTol * largest)) {
    std::ostringstream msg;
    msg << "matrix is rank deficient (sigma_min = " << smallest
        << ", sigma_max = " << largest << ")";
    throw Error(ErrorKind::RankDeficient, msg.str());
  }
  return Subspace(positive_qr(raw));
}

Subspace retract(const Eigen::MatrixXd& raw) { return Subspace(positive_qr(raw)); }

}  // namespace grasspack
