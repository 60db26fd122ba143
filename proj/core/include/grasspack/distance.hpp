#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "grasspack/subspace.hpp"

namespace grasspack {

enum class Metric { Chordal, FubiniStudy };

std::string_view to_string(Metric metric) noexcept;
/// Accepts "chordal" and "fs" / "fubini-study" (case-sensitive).
std::optional<Metric> parse_metric(std::string_view text) noexcept;

/// Span-equality threshold: two subspaces are treated as identical when their
/// distance is below this.
inline constexpr double kSpanEqualityTol = 1e-9;

/// The k principal angles between two subspaces, ascending, in [0, pi/2].
struct PrincipalAngles {
  std::vector<double> angles;

  std::size_t size() const noexcept { return angles.size(); }
  double operator[](std::size_t i) const { return angles[i]; }
};

/// Cosines come from the singular values of S^T T, sines from the singular
/// values of (I - T T^T) S. Each angle is taken from whichever of the two is
/// better conditioned, so both tiny and near-right angles are accurate.
/// Throws DimensionMismatch unless (m, k) agree.
PrincipalAngles principal_angles(const Subspace& s, const Subspace& t);

/// Distance under `metric`, evaluated from the principal angles.
///   Chordal:      sqrt(sum sin^2 theta_i)        in [0, sqrt(k)]
///   FubiniStudy:  arccos(prod cos theta_i)       in [0, pi/2]
double distance(const Subspace& s, const Subspace& t, Metric metric);

double chordal_from_angles(const PrincipalAngles& angles);
double fubini_study_from_angles(const PrincipalAngles& angles);

/// [k - ||S^T T||_F^2]^(1/2), the closed form without angles.
double chordal_frobenius(const Subspace& s, const Subspace& t);
/// arccos |det S^T T|, the closed form without angles.
double fubini_study_det(const Subspace& s, const Subspace& t);

/// Symmetric N x N matrix of pairwise distances with a zero diagonal.
Eigen::MatrixXd pairwise_distances(std::span<const Subspace> subspaces,
                                   Metric metric);

/// min_{i != j} d(w_i, w_j); std::nullopt when fewer than two subspaces.
std::optional<double> min_pairwise_distance(std::span<const Subspace> subspaces,
                                            Metric metric);

}  // namespace grasspack
