#include "grasspack/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "grasspack/error.hpp"

namespace grasspack {

namespace {

void require_same_shape(const Subspace& s, const Subspace& t) {
  if (s.ambient_dim() != t.ambient_dim() || s.dim() != t.dim()) {
    std::ostringstream msg;
    msg << "subspaces live in different Grassmannians: G(" << s.ambient_dim()
        << "," << s.dim() << ") vs G(" << t.ambient_dim() << "," << t.dim()
        << ")";
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::Chordal: return "chordal";
    case Metric::FubiniStudy: return "fs";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view text) noexcept {
  if (text == "chordal") return Metric::Chordal;
  if (text == "fs" || text == "fubini-study") return Metric::FubiniStudy;
  return std::nullopt;
}

PrincipalAngles principal_angles(const Subspace& s, const Subspace& t) {
  require_same_shape(s, t);
  const Eigen::MatrixXd& a = s.basis();
  const Eigen::MatrixXd& b = t.basis();
  const Eigen::Index k = a.cols();

  const Eigen::MatrixXd cross = a.transpose() * b;
  const Eigen::MatrixXd residual = a - b * (b.transpose() * a);
  // Singular values come back in descending order: largest cosine pairs with
  // the smallest angle, largest sine with the largest angle.
  const Eigen::VectorXd cosines =
      Eigen::JacobiSVD<Eigen::MatrixXd>(cross).singularValues();
  const Eigen::VectorXd sines =
      Eigen::JacobiSVD<Eigen::MatrixXd>(residual).singularValues();

  PrincipalAngles out;
  out.angles.resize(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    const double c = clamp_unit(cosines(i));
    const double sn = clamp_unit(sines(k - 1 - i));
    out.angles[static_cast<std::size_t>(i)] =
        (c * c < 0.5) ? std::acos(c) : std::asin(sn);
  }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

double chordal_from_angles(const PrincipalAngles& angles) {
  double sum = 0.0;
  for (double theta : angles.angles) {
    const double sn = std::sin(theta);
    sum += sn * sn;
  }
  return std::sqrt(sum);
}

double fubini_study_from_angles(const PrincipalAngles& angles) {
  // 1 - prod cos^2 accumulated through log1p/expm1 so that small angles keep
  // full relative precision.
  double cos_product = 1.0;
  double log_cos2 = 0.0;
  for (double theta : angles.angles) {
    cos_product *= std::cos(theta);
    const double sn = std::sin(theta);
    log_cos2 += std::log1p(-sn * sn);
  }
  const double sin2 = -std::expm1(log_cos2);
  return std::atan2(std::sqrt(std::max(sin2, 0.0)), std::abs(cos_product));
}

double distance(const Subspace& s, const Subspace& t, Metric metric) {
  const PrincipalAngles angles = principal_angles(s, t);
  switch (metric) {
    case Metric::Chordal: return chordal_from_angles(angles);
    case Metric::FubiniStudy: return fubini_study_from_angles(angles);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double chordal_frobenius(const Subspace& s, const Subspace& t) {
  require_same_shape(s, t);
  const double overlap = (s.basis().transpose() * t.basis()).squaredNorm();
  return std::sqrt(std::max(0.0, static_cast<double>(s.dim()) - overlap));
}

double fubini_study_det(const Subspace& s, const Subspace& t) {
  require_same_shape(s, t);
  const Eigen::MatrixXd cross = s.basis().transpose() * t.basis();
  return std::acos(clamp_unit(std::abs(cross.determinant())));
}

Eigen::MatrixXd pairwise_distances(std::span<const Subspace> subspaces,
                                   Metric metric) {
  const auto n = static_cast<Eigen::Index>(subspaces.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = distance(subspaces[static_cast<std::size_t>(i)],
                                subspaces[static_cast<std::size_t>(j)], metric);
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

std::optional<double> min_pairwise_distance(std::span<const Subspace> subspaces,
                                            Metric metric) {
  if (subspaces.size() < 2) return std::nullopt;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    for (std::size_t j = i + 1; j < subspaces.size(); ++j) {
      best = std::min(best, distance(subspaces[i], subspaces[j], metric));
    }
  }
  return best;
}

}  // namespace grasspack
