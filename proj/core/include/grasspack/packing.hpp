#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "grasspack/distance.hpp"
#include "grasspack/subspace.hpp"

namespace grasspack {

/// Search description for N k-dimensional subspaces of R^m under one metric.
struct PackingProblem {
  int m = 0;
  int k = 0;
  int n = 0;
  Metric metric = Metric::Chordal;
  int restarts = 20;
  int max_iters = 2000;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  /// Worker threads for restarts; 0 picks hardware concurrency. Has no effect
  /// on the result.
  int threads = 0;

  /// Throws InvalidProblem. N = 1 is accepted (degenerate codebook).
  void validate() const;
};

enum class RankinForm {
  /// sqrt((m - k) N / (m (N - 1)))
  Printed,
  /// sqrt(k (m - k) / m * N / (N - 1)); coincides with Printed for k = 1.
  Generalized,
};

/// Simplex-type upper bound on the minimum chordal distance of N points of
/// G(m, k). Throws InvalidProblem unless 1 <= k <= m and N >= 2.
double rankin_bound(int m, int k, int n, RankinForm form = RankinForm::Printed);

struct Codebook {
  PackingProblem problem;
  std::vector<Subspace> subspaces;
  /// Achieved minimum pairwise distance; empty for N = 1.
  std::optional<double> min_distance;
  std::optional<double> rankin_bound;
  std::optional<double> rankin_bound_generalized;
  int iterations_used = 0;
  bool converged = false;

  int size() const noexcept { return static_cast<int>(subspaces.size()); }
};

/// Builds a codebook from explicit subspaces, computing min_distance and the
/// two bound forms. Throws DimensionMismatch when a subspace disagrees with
/// (problem.m, problem.k) or the count differs from problem.n.
Codebook make_codebook(const PackingProblem& problem,
                       std::vector<Subspace> subspaces);

/// Checks the codebook invariants: shared (m, k), orthonormality to `tol`,
/// stored min_distance equal to the recomputed one within 1e-9 and, for the
/// chordal metric, min_distance not above the applicable Rankin bound
/// (+1e-6). Returns an empty string when every check passes, otherwise a
/// description of the first failure.
std::string check_codebook(const Codebook& c, double tol = kOrthonormalTol);

Eigen::MatrixXd pairwise_distances(const Codebook& c);

/// N subspaces from orthonormalized i.i.d. standard-normal m x k draws,
/// seeded by problem.seed. Rank-deficient draws are redrawn; 100 consecutive
/// failures raise ImproperRandomState.
Codebook random_codebook(const PackingProblem& problem);

/// Max-min packing search. Each restart begins from a random codebook
/// (restart 0 uses problem.seed itself), runs a soft-min continuation in the
/// sharpness parameter beta, then polishes the minimum-distance pairs
/// directly. The best restart wins; ties go to the lower restart index.
/// A restart that runs out of iterations still contributes its best iterate
/// and reports converged = false.
Codebook optimize(const PackingProblem& problem);

/// Continues the search from an existing codebook for `extra_iters`
/// iterations. min_distance never decreases.
Codebook refine(const Codebook& c, int extra_iters);

}  // namespace grasspack
