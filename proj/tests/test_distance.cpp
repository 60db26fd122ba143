#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "grasspack/distance.hpp"
#include "grasspack/error.hpp"
#include "test_support.hpp"

namespace grasspack {
namespace {

using std::numbers::pi;
using testing::error_kind_of;
using testing::random_subspace;

Subspace axes(int m, std::initializer_list<int> idx) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(idx.size()));
  int c = 0;
  for (int i : idx) b(i, c++) = 1.0;
  return Subspace::from_orthonormal(b);
}

Subspace unit_line(Eigen::VectorXd v) { return Subspace::from_orthonormal(v.normalized(), 1e-14); }

TEST(PrincipalAngles, IdenticalSubspacesGiveZero) {
  std::mt19937_64 gen(1);
  const Subspace s = random_subspace(9, 3, gen);
  const PrincipalAngles a = principal_angles(s, s);
  ASSERT_EQ(a.size(), 3u);
  for (double theta : a.angles) EXPECT_LE(theta, 1e-12);
  EXPECT_LE(distance(s, s, Metric::Chordal), kSpanEqualityTol);
  EXPECT_LE(distance(s, s, Metric::FubiniStudy), kSpanEqualityTol);
}

TEST(PrincipalAngles, OrthogonalPlanes) {
  const Subspace s = axes(4, {0, 1});
  const Subspace t = axes(4, {2, 3});
  const PrincipalAngles a = principal_angles(s, t);
  EXPECT_NEAR(a[0], pi / 2, 1e-12);
  EXPECT_NEAR(a[1], pi / 2, 1e-12);
  EXPECT_NEAR(distance(s, t, Metric::Chordal), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(distance(s, t, Metric::FubiniStudy), pi / 2, 1e-12);
}

TEST(PrincipalAngles, LinesAtFortyFiveDegrees) {
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(3);
  e1(0) = 1.0;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(3);
  diag(0) = 1.0;
  diag(1) = 1.0;
  const Subspace s = unit_line(e1);
  const Subspace t = unit_line(diag);
  const double oracle = testing::line_angle(s.basis().col(0), t.basis().col(0));
  EXPECT_NEAR(oracle, pi / 4, 1e-15);
  EXPECT_NEAR(principal_angles(s, t)[0], oracle, 1e-12);
  EXPECT_NEAR(distance(s, t, Metric::Chordal), 0.70710678118654752, 1e-12);
  EXPECT_NEAR(distance(s, t, Metric::FubiniStudy), pi / 4, 1e-12);
  EXPECT_NEAR(chordal_frobenius(s, t), std::sin(oracle), 1e-12);
  EXPECT_NEAR(fubini_study_det(s, t), oracle, 1e-12);
}

TEST(PrincipalAngles, DimensionMismatch) {
  std::mt19937_64 gen(2);
  const Subspace a = random_subspace(4, 2, gen);
  const Subspace b = random_subspace(5, 2, gen);
  const Subspace c = random_subspace(4, 1, gen);
  EXPECT_EQ(error_kind_of([&] { principal_angles(a, b); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(error_kind_of([&] { distance(a, c, Metric::Chordal); }),
            ErrorKind::DimensionMismatch);
  EXPECT_EQ(error_kind_of([&] { chordal_frobenius(a, c); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(error_kind_of([&] { fubini_study_det(a, b); }), ErrorKind::DimensionMismatch);
}

TEST(PrincipalAngles, AgreeWithEigenvalueOracle) {
  // cos^2 theta_i are the eigenvalues of M^T M, M = S^T T.
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 3 + static_cast<int>(gen() % 10);
    const int k = 1 + static_cast<int>(gen() % (m / 2));
    const Subspace s = random_subspace(m, k, gen);
    const Subspace t = random_subspace(m, k, gen);
    const Eigen::MatrixXd cross = s.basis().transpose() * t.basis();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cross.transpose() * cross);
    std::vector<double> oracle;
    for (Eigen::Index i = eig.eigenvalues().size() - 1; i >= 0; --i) {
      oracle.push_back(std::acos(std::sqrt(std::clamp(eig.eigenvalues()(i), 0.0, 1.0))));
    }
    const PrincipalAngles a = principal_angles(s, t);
    ASSERT_EQ(a.size(), oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(a[i], oracle[i], 1e-7);
  }
}

TEST(PrincipalAngles, SortedBoundedAndSymmetric) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + static_cast<int>(gen() % 12);
    const int k = 1 + static_cast<int>(gen() % m);
    const Subspace s = random_subspace(m, k, gen);
    const Subspace t = random_subspace(m, k, gen);
    const PrincipalAngles st = principal_angles(s, t);
    const PrincipalAngles ts = principal_angles(t, s);
    for (std::size_t i = 0; i < st.size(); ++i) {
      EXPECT_GE(st[i], 0.0);
      EXPECT_LE(st[i], pi / 2 + 1e-12);
      if (i > 0) EXPECT_LE(st[i - 1], st[i]);
      EXPECT_NEAR(st[i], ts[i], 1e-10);
    }
    const double dc = distance(s, t, Metric::Chordal);
    const double df = distance(s, t, Metric::FubiniStudy);
    EXPECT_GE(dc, 0.0);
    EXPECT_LE(dc, std::sqrt(static_cast<double>(k)) + 1e-12);
    EXPECT_GE(df, 0.0);
    EXPECT_LE(df, pi / 2 + 1e-12);
    EXPECT_NEAR(dc, distance(t, s, Metric::Chordal), 1e-12);
    EXPECT_NEAR(df, distance(t, s, Metric::FubiniStudy), 1e-12);
  }
}

TEST(Distance, ClosedFormsAgreeWithAngleForms) {
  // The closed forms cancel catastrophically near zero distance (error
  // ~sqrt(eps)), so sample shapes where random pairs are well separated.
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + static_cast<int>(gen() % 15);
    const int k = 1 + static_cast<int>(gen() % (m / 2));
    const Subspace s = random_subspace(m, k, gen);
    const Subspace t = random_subspace(m, k, gen);
    const PrincipalAngles a = principal_angles(s, t);
    EXPECT_NEAR(chordal_frobenius(s, t), chordal_from_angles(a), 1e-9);
    EXPECT_NEAR(fubini_study_det(s, t), fubini_study_from_angles(a), 1e-9);
  }
}

TEST(Distance, InvariantUnderRightOrthogonalTransforms) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 3 + static_cast<int>(gen() % 10);
    const int k = 1 + static_cast<int>(gen() % m);
    const Subspace s = random_subspace(m, k, gen);
    const Subspace t = random_subspace(m, k, gen);
    const Subspace sq = Subspace::from_orthonormal(
        s.basis() * testing::random_orthogonal(k, gen), 1e-12);
    for (Metric metric : {Metric::Chordal, Metric::FubiniStudy}) {
      EXPECT_NEAR(distance(sq, t, metric), distance(s, t, metric), 1e-9);
      EXPECT_LE(distance(sq, s, metric), kSpanEqualityTol);
    }
  }
}

TEST(Distance, LinesAreFunctionsOfTheSingleAngle) {
  std::mt19937_64 gen(19);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(gen() % 10);
    const Subspace s = random_subspace(m, 1, gen);
    const Subspace t = random_subspace(m, 1, gen);
    const double theta = testing::line_angle(s.basis().col(0), t.basis().col(0));
    EXPECT_NEAR(distance(s, t, Metric::Chordal), std::sin(theta), 1e-9);
    EXPECT_NEAR(distance(s, t, Metric::FubiniStudy), theta, 1e-9);
  }
}

TEST(Distance, ChordalTriangleInequality) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 2 + static_cast<int>(gen() % 8);
    const int k = 1 + static_cast<int>(gen() % m);
    const Subspace a = random_subspace(m, k, gen);
    const Subspace b = random_subspace(m, k, gen);
    const Subspace c = random_subspace(m, k, gen);
    EXPECT_LE(distance(a, c, Metric::Chordal),
              distance(a, b, Metric::Chordal) + distance(b, c, Metric::Chordal) + 1e-9);
  }
}

TEST(Distance, SmallAnglesKeepPrecision) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(5);
  u(0) = 1.0;
  Eigen::VectorXd v = u;
  v(1) = 1e-7;
  const Subspace s = unit_line(u);
  const Subspace t = unit_line(v);
  EXPECT_NEAR(distance(s, t, Metric::FubiniStudy), std::atan(1e-7), 1e-20);
  EXPECT_NEAR(distance(s, t, Metric::Chordal), std::sin(std::atan(1e-7)), 1e-20);
}

TEST(PairwiseDistances, SingleSubspace) {
  std::mt19937_64 gen(29);
  const std::vector<Subspace> one = {random_subspace(4, 2, gen)};
  const Eigen::MatrixXd d = pairwise_distances(one, Metric::Chordal);
  ASSERT_EQ(d.rows(), 1);
  ASSERT_EQ(d.cols(), 1);
  EXPECT_EQ(d(0, 0), 0.0);
  EXPECT_FALSE(min_pairwise_distance(one, Metric::Chordal).has_value());
}

TEST(PairwiseDistances, IdenticalPair) {
  std::mt19937_64 gen(31);
  const Subspace s = random_subspace(6, 2, gen);
  const std::vector<Subspace> two = {s, s};
  for (Metric metric : {Metric::Chordal, Metric::FubiniStudy}) {
    EXPECT_LE(pairwise_distances(two, metric).cwiseAbs().maxCoeff(), kSpanEqualityTol);
  }
}

TEST(PairwiseDistances, MatchesElementwiseDistanceCalls) {
  std::mt19937_64 gen(37);
  const std::vector<Subspace> three = {random_subspace(7, 3, gen),
                                       random_subspace(7, 3, gen),
                                       random_subspace(7, 3, gen)};
  for (Metric metric : {Metric::Chordal, Metric::FubiniStudy}) {
    const Eigen::MatrixXd d = pairwise_distances(three, metric);
    for (int i = 0; i < 3; ++i) {
      EXPECT_EQ(d(i, i), 0.0);
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        EXPECT_EQ(d(i, j), d(j, i));
        const auto lo = static_cast<std::size_t>(std::min(i, j));
        const auto hi = static_cast<std::size_t>(std::max(i, j));
        EXPECT_EQ(d(i, j), distance(three[lo], three[hi], metric));
      }
    }
    EXPECT_EQ(*min_pairwise_distance(three, metric),
              std::min({d(0, 1), d(0, 2), d(1, 2)}));
  }
}

TEST(Metric, ParseAndPrint) {
  EXPECT_EQ(parse_metric("chordal"), Metric::Chordal);
  EXPECT_EQ(parse_metric("fs"), Metric::FubiniStudy);
  EXPECT_EQ(parse_metric("fubini-study"), Metric::FubiniStudy);
  EXPECT_FALSE(parse_metric("geodesic").has_value());
  EXPECT_EQ(to_string(Metric::FubiniStudy), "fs");
}

}  // namespace
}  // namespace grasspack
