#include "grasspack/packing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <thread>
#include <utility>

#include "grasspack/error.hpp"

namespace grasspack {

namespace {

constexpr double kBetaStart = 8.0;
constexpr double kBetaMax = 1e5;
constexpr double kStepScale = 0.05;
constexpr double kStepGrowth = 1.5;
constexpr double kStepMax = 1.0;
constexpr double kStepMin = 1e-13;
constexpr double kSurrogateFraction = 0.9;
constexpr int kMaxActivePairs = 256;
constexpr int kMinNormIterations = 200;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t restart_seed(std::uint64_t seed, int restart) {
  if (restart == 0) return seed;
  return splitmix64(seed + static_cast<std::uint64_t>(restart) *
                               0x9E3779B97F4A7C15ULL);
}

std::vector<Subspace> draw_subspaces(int m, int k, int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Subspace> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < 100 && !done; ++attempt) {
      Eigen::MatrixXd raw(m, k);
      for (Eigen::Index c = 0; c < raw.cols(); ++c) {
        for (Eigen::Index r = 0; r < raw.rows(); ++r) raw(r, c) = normal(gen);
      }
      try {
        out.push_back(orthonormalize(raw));
        done = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::RankDeficient) throw;
      }
    }
    if (!done) {
      throw Error(ErrorKind::ImproperRandomState,
                  "100 consecutive rank-deficient draws from the generator");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Working representation: all N bases side by side in one m x (N k) matrix so
// every pairwise cross product S_i^T S_j is a block of a single Gram matrix.

enum class PairObjective { Chordal, FubiniStudy };

PairObjective objective_for(Metric metric) {
  return metric == Metric::Chordal ? PairObjective::Chordal
                                   : PairObjective::FubiniStudy;
}

// det(M) and adj(M) for a small square block.
double det_and_adjugate(const Eigen::MatrixXd& m, Eigen::MatrixXd& adj) {
  const Eigen::Index k = m.rows();
  adj.resize(k, k);
  if (k == 1) {
    adj(0, 0) = 1.0;
    return m(0, 0);
  }
  if (k == 2) {
    adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  }
  if (k == 3) {
    adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
    adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
    adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
    adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
    adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
    adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
    adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
    adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
  }
  // adj(M) = det(U) det(V) V diag(prod_{j != i} s_j) U^T, valid for singular M.
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU |
                                               Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double sign =
      svd.matrixU().determinant() * svd.matrixV().determinant() < 0 ? -1.0 : 1.0;
  Eigen::VectorXd others(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    double p = 1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (j != i) p *= s(j);
    }
    others(i) = p;
  }
  adj = sign * svd.matrixV() * others.asDiagonal() * svd.matrixU().transpose();
  return sign * s.prod();
}

struct Pair {
  int i;
  int j;
};

class PackingState {
 public:
  PackingState(int m, int k, int n, Metric target)
      : m_(m), k_(k), n_(n), target_(objective_for(target)) {
    pairs_.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) pairs_.push_back({i, j});
    }
  }

  struct Evaluation {
    Eigen::MatrixXd gram;
    std::vector<double> q;       // working objective per pair, in [0, 1]
    std::vector<double> target;  // target metric per pair, in [0, 1]
    double q_min = 0.0;
    double target_min = 0.0;
  };

  const std::vector<Pair>& pairs() const { return pairs_; }

  // Every q is a monotone function of the corresponding distance:
  // chordal q = d^2 / k, Fubini-Study q = sin^2 d.
  Evaluation evaluate(const Eigen::MatrixXd& x, PairObjective working) const {
    Evaluation ev;
    ev.gram.noalias() = x.transpose() * x;
    ev.q.resize(pairs_.size());
    ev.target.resize(pairs_.size());
    ev.q_min = std::numeric_limits<double>::infinity();
    ev.target_min = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd block(k_, k_);
    Eigen::MatrixXd adj;
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      block = ev.gram.block(pairs_[p].i * k_, pairs_[p].j * k_, k_, k_);
      const double chordal = std::max(0.0, 1.0 - block.squaredNorm() / k_);
      double fs = chordal;
      if (working == PairObjective::FubiniStudy ||
          target_ == PairObjective::FubiniStudy) {
        const double det = det_and_adjugate(block, adj);
        fs = std::clamp(1.0 - det * det, 0.0, 1.0);
      }
      ev.q[p] = working == PairObjective::Chordal ? chordal : fs;
      ev.target[p] = target_ == PairObjective::Chordal ? chordal : fs;
      ev.q_min = std::min(ev.q_min, ev.q[p]);
      ev.target_min = std::min(ev.target_min, ev.target[p]);
    }
    return ev;
  }

  // d q_p / d M_p for the block M = S_i^T S_j.
  Eigen::MatrixXd block_gradient(const Eigen::MatrixXd& gram, std::size_t p,
                                 PairObjective working) const {
    const Eigen::MatrixXd block =
        gram.block(pairs_[p].i * k_, pairs_[p].j * k_, k_, k_);
    if (working == PairObjective::Chordal) return (-2.0 / k_) * block;
    Eigen::MatrixXd adj;
    const double det = det_and_adjugate(block, adj);
    return (-2.0 * det) * adj.transpose();
  }

  // Projected (horizontal) gradient of sum_p weights[p] * q_p.
  Eigen::MatrixXd weighted_gradient(const Eigen::MatrixXd& x,
                                    const Eigen::MatrixXd& gram,
                                    const std::vector<double>& weights,
                                    PairObjective working) const {
    const Eigen::Index nk = static_cast<Eigen::Index>(n_) * k_;
    Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(nk, nk);
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      if (weights[p] == 0.0) continue;
      const Eigen::MatrixXd g = weights[p] * block_gradient(gram, p, working);
      coeff.block(pairs_[p].j * k_, pairs_[p].i * k_, k_, k_) += g.transpose();
      coeff.block(pairs_[p].i * k_, pairs_[p].j * k_, k_, k_) += g;
    }
    Eigen::MatrixXd grad = x * coeff;
    project(x, grad);
    return grad;
  }

  // Removes the component of each block that moves within its own span.
  void project(const Eigen::MatrixXd& x, Eigen::MatrixXd& grad) const {
    for (int i = 0; i < n_; ++i) {
      auto xi = x.middleCols(i * k_, k_);
      auto gi = grad.middleCols(i * k_, k_);
      const Eigen::MatrixXd inner = xi.transpose() * gi;
      gi.noalias() -= xi * inner;
    }
  }

  Eigen::MatrixXd step(const Eigen::MatrixXd& x, const Eigen::MatrixXd& dir,
                       double t) const {
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (int i = 0; i < n_; ++i) {
      out.middleCols(i * k_, k_) =
          retract(x.middleCols(i * k_, k_) + t * dir.middleCols(i * k_, k_))
              .basis();
    }
    return out;
  }

  // Steepest ascent direction for min_p q_p over the active pairs: the
  // minimum-norm element of the convex hull of their projected gradients,
  // found by Frank-Wolfe on the simplex. Each pair gradient touches only the
  // blocks of its two subspaces.
  Eigen::MatrixXd min_norm_direction(const Eigen::MatrixXd& x,
                                     const Eigen::MatrixXd& gram,
                                     const std::vector<std::size_t>& active,
                                     PairObjective working) const {
    const std::size_t a = active.size();
    std::vector<Eigen::MatrixXd> gi(a), gj(a);
    for (std::size_t s = 0; s < a; ++s) {
      const std::size_t p = active[s];
      const int i = pairs_[p].i;
      const int j = pairs_[p].j;
      const Eigen::MatrixXd g = block_gradient(gram, p, working);
      auto xi = x.middleCols(i * k_, k_);
      auto xj = x.middleCols(j * k_, k_);
      Eigen::MatrixXd di = xj * g.transpose();
      Eigen::MatrixXd dj = xi * g;
      di -= xi * (xi.transpose() * di);
      dj -= xj * (xj.transpose() * dj);
      gi[s] = std::move(di);
      gj[s] = std::move(dj);
    }
    auto block_dot = [&](std::size_t s, int s_idx, std::size_t u, int u_idx) {
      const Eigen::MatrixXd& lhs = s_idx == 0 ? gi[s] : gj[s];
      const Eigen::MatrixXd& rhs = u_idx == 0 ? gi[u] : gj[u];
      return (lhs.array() * rhs.array()).sum();
    };
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a),
                                              static_cast<Eigen::Index>(a));
    for (std::size_t s = 0; s < a; ++s) {
      const int si[2] = {pairs_[active[s]].i, pairs_[active[s]].j};
      for (std::size_t u = s; u < a; ++u) {
        const int ui[2] = {pairs_[active[u]].i, pairs_[active[u]].j};
        double v = 0.0;
        for (int p = 0; p < 2; ++p) {
          for (int q = 0; q < 2; ++q) {
            if (si[p] == ui[q]) v += block_dot(s, p, u, q);
          }
        }
        h(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(u)) = v;
        h(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(s)) = v;
      }
    }
    // h * lambda and lambda^T h lambda are updated in O(a) per step.
    Eigen::VectorXd lambda =
        Eigen::VectorXd::Constant(static_cast<Eigen::Index>(a), 1.0 / a);
    Eigen::VectorXd hl = h * lambda;
    double lhl = lambda.dot(hl);
    for (int it = 0; it < kMinNormIterations; ++it) {
      Eigen::Index best = 0;
      hl.minCoeff(&best);
      // diff = lambda - e_best
      const double denom = lhl - 2.0 * hl(best) + h(best, best);
      if (denom <= 0.0) break;
      const double gamma = std::clamp((lhl - hl(best)) / denom, 0.0, 1.0);
      if (gamma == 0.0) break;
      lambda *= 1.0 - gamma;
      lambda(best) += gamma;
      hl = (1.0 - gamma) * hl + gamma * h.col(best);
      lhl = lambda.dot(hl);
    }
    Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    for (std::size_t s = 0; s < a; ++s) {
      const double l = lambda(static_cast<Eigen::Index>(s));
      if (l == 0.0) continue;
      dir.middleCols(pairs_[active[s]].i * k_, k_) += l * gi[s];
      dir.middleCols(pairs_[active[s]].j * k_, k_) += l * gj[s];
    }
    return dir;
  }

 private:
  int m_;
  int k_;
  int n_;
  PairObjective target_;
  std::vector<Pair> pairs_;
};

// Smoothed minimum: q_min - log(sum exp(-beta (q - q_min))) / beta <= q_min.
double soft_min(const std::vector<double>& q, double q_min, double beta,
                std::vector<double>* weights) {
  double z = 0.0;
  if (weights) weights->resize(q.size());
  for (std::size_t p = 0; p < q.size(); ++p) {
    const double w = std::exp(-beta * (q[p] - q_min));
    z += w;
    if (weights) (*weights)[p] = w;
  }
  if (weights) {
    for (double& w : *weights) w /= z;
  }
  return q_min - std::log(z) / beta;
}

struct RestartResult {
  Eigen::MatrixXd bases;
  double target_min = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SearchBudget {
  int iterations = 0;
  double tolerance = 1e-8;
};

class RestartSearch {
 public:
  RestartSearch(const PackingState& state, Metric metric, Eigen::MatrixXd start,
                SearchBudget budget)
      : state_(state),
        target_(objective_for(metric)),
        budget_(budget),
        x_(std::move(start)) {
    const auto ev = state_.evaluate(x_, target_);
    best_ = x_;
    best_target_ = ev.target_min;
  }

  RestartResult run() {
    const int total = budget_.iterations;
    if (total > 0) {
      if (target_ == PairObjective::Chordal) {
        soft_min_stage(PairObjective::Chordal,
                       static_cast<int>(kSurrogateFraction * total));
      } else {
        // The chordal sin^2-sum is well conditioned everywhere; the
        // determinant objective is only used once the packing is spread out.
        soft_min_stage(PairObjective::Chordal,
                       static_cast<int>(kSurrogateFraction * total));
        x_ = best_;
        soft_min_stage(PairObjective::FubiniStudy,
                       iter_ + (total - iter_) / 2);
      }
      x_ = best_;
      polish_stage(target_, total);
    }
    return {best_, best_target_, iter_, converged_};
  }

 private:
  void record(const Eigen::MatrixXd& x, double target_min) {
    if (target_min > best_target_) {
      best_target_ = target_min;
      best_ = x;
    }
  }

  // Continuation in beta: ascend the smoothed minimum, doubling beta when the
  // relative gain stalls below tolerance or the per-level share of the
  // budget is spent.
  void soft_min_stage(PairObjective working, int stop_at) {
    const int levels =
        static_cast<int>(std::ceil(std::log2(kBetaMax / kBetaStart))) + 1;
    const int per_level = std::max(1, (stop_at - iter_) / levels);
    double beta = kBetaStart;
    while (iter_ < stop_at && beta <= kBetaMax) {
      auto ev = state_.evaluate(x_, working);
      std::vector<double> weights;
      double f = soft_min(ev.q, ev.q_min, beta, &weights);
      double t = kStepScale / beta;
      Eigen::MatrixXd dir = state_.weighted_gradient(x_, ev.gram, weights, working);
      const int level_end = std::min(stop_at, iter_ + per_level);
      while (iter_ < level_end) {
        if (dir.squaredNorm() < 1e-28) break;
        const Eigen::MatrixXd trial = state_.step(x_, dir, t);
        auto trial_ev = state_.evaluate(trial, working);
        ++iter_;
        const double f_trial = soft_min(trial_ev.q, trial_ev.q_min, beta, nullptr);
        if (f_trial > f) {
          const double gain = f_trial - f;
          x_ = trial;
          ev = std::move(trial_ev);
          record(x_, ev.target_min);
          f = soft_min(ev.q, ev.q_min, beta, &weights);
          if (gain <= budget_.tolerance * std::max(std::abs(f), 1e-12)) break;
          t = std::min(t * kStepGrowth, kStepMax);
          dir = state_.weighted_gradient(x_, ev.gram, weights, working);
        } else {
          t *= 0.5;
          if (t < kStepMin) break;
        }
      }
      beta *= 2.0;
    }
  }

  // Direct ascent on the minimum itself, moving the active (near-minimum)
  // pairs along their common steepest-ascent direction. Only strict
  // improvements of the minimum are accepted.
  void polish_stage(PairObjective working, int stop_at) {
    auto ev = state_.evaluate(x_, working);
    double window = 1e-3;
    double t = 1e-2;
    bool fresh = true;
    Eigen::MatrixXd dir;
    while (iter_ < stop_at) {
      if (fresh) {
        std::vector<std::size_t> active;
        for (std::size_t p = 0; p < ev.q.size(); ++p) {
          if (ev.q[p] <= ev.q_min + window) active.push_back(p);
        }
        std::sort(active.begin(), active.end(), [&](std::size_t a, std::size_t b) {
          return ev.q[a] < ev.q[b] || (ev.q[a] == ev.q[b] && a < b);
        });
        if (active.size() > static_cast<std::size_t>(kMaxActivePairs)) {
          active.resize(kMaxActivePairs);
        }
        dir = state_.min_norm_direction(x_, ev.gram, active, working);
        fresh = false;
        if (dir.squaredNorm() < 1e-28) {
          converged_ = true;
          return;
        }
      }
      const Eigen::MatrixXd trial = state_.step(x_, dir, t);
      auto trial_ev = state_.evaluate(trial, working);
      ++iter_;
      if (trial_ev.q_min > ev.q_min) {
        x_ = trial;
        ev = std::move(trial_ev);
        record(x_, ev.target_min);
        t = std::min(t * kStepGrowth, kStepMax);
        fresh = true;
      } else {
        t *= 0.5;
        if (t < kStepMin) {
          if (window <= 1e-10) {
            converged_ = true;
            return;
          }
          window *= 0.1;
          t = 1e-2;
          fresh = true;
        }
      }
    }
  }

  const PackingState& state_;
  PairObjective target_;
  SearchBudget budget_;
  Eigen::MatrixXd x_;
  Eigen::MatrixXd best_;
  double best_target_ = 0.0;
  int iter_ = 0;
  bool converged_ = false;
};

Eigen::MatrixXd pack(const std::vector<Subspace>& subspaces, int m, int k) {
  Eigen::MatrixXd x(m, static_cast<Eigen::Index>(subspaces.size()) * k);
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    x.middleCols(static_cast<Eigen::Index>(i) * k, k) = subspaces[i].basis();
  }
  return x;
}

std::vector<Subspace> unpack(const Eigen::MatrixXd& x, int k) {
  std::vector<Subspace> out;
  const auto n = x.cols() / k;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    out.push_back(Subspace::from_orthonormal(x.middleCols(i * k, k)));
  }
  return out;
}

// Best-scoring candidate between a search result and its starting point,
// judged by the exact minimum distance.
struct Candidate {
  std::vector<Subspace> subspaces;
  double min_distance = 0.0;
  int iterations = 0;
  bool converged = false;
};

Candidate run_search(const PackingProblem& problem,
                     const std::vector<Subspace>& start, int iterations) {
  PackingState state(problem.m, problem.k, problem.n, problem.metric);
  RestartSearch search(state, problem.metric, pack(start, problem.m, problem.k),
                       {iterations, problem.tolerance});
  RestartResult result = search.run();
  Candidate searched{unpack(result.bases, problem.k), 0.0, result.iterations,
                     result.converged};
  searched.min_distance = *min_pairwise_distance(searched.subspaces, problem.metric);
  const double initial = *min_pairwise_distance(start, problem.metric);
  if (initial > searched.min_distance) {
    return {start, initial, result.iterations, result.converged};
  }
  return searched;
}

}  // namespace

void PackingProblem::validate() const {
  std::ostringstream msg;
  if (m < 1 || k < 1 || k > m) {
    msg << "need 1 <= k <= m, got m=" << m << " k=" << k;
  } else if (n < 1) {
    msg << "need N >= 1, got " << n;
  } else if (restarts < 1) {
    msg << "restarts must be positive, got " << restarts;
  } else if (max_iters < 1) {
    msg << "max_iters must be positive, got " << max_iters;
  } else if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    msg << "tolerance must be positive and finite, got " << tolerance;
  } else if (threads < 0) {
    msg << "threads must be non-negative, got " << threads;
  } else {
    return;
  }
  throw Error(ErrorKind::InvalidProblem, msg.str());
}

double rankin_bound(int m, int k, int n, RankinForm form) {
  if (m < 1 || k < 1 || k > m || n < 2) {
    std::ostringstream msg;
    msg << "Rankin bound needs 1 <= k <= m and N >= 2, got m=" << m
        << " k=" << k << " N=" << n;
    throw Error(ErrorKind::InvalidProblem, msg.str());
  }
  const double ratio = static_cast<double>(m - k) * n /
                       (static_cast<double>(m) * (n - 1));
  if (form == RankinForm::Generalized) return std::sqrt(k * ratio);
  return std::sqrt(ratio);
}

Codebook make_codebook(const PackingProblem& problem,
                       std::vector<Subspace> subspaces) {
  if (static_cast<int>(subspaces.size()) != problem.n) {
    std::ostringstream msg;
    msg << "expected " << problem.n << " subspaces, got " << subspaces.size();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  for (const Subspace& s : subspaces) {
    if (s.ambient_dim() != problem.m || s.dim() != problem.k) {
      std::ostringstream msg;
      msg << "subspace in G(" << s.ambient_dim() << "," << s.dim()
          << ") does not belong to G(" << problem.m << "," << problem.k << ")";
      throw Error(ErrorKind::DimensionMismatch, msg.str());
    }
  }
  Codebook c;
  c.problem = problem;
  c.min_distance = min_pairwise_distance(subspaces, problem.metric);
  if (problem.n >= 2) {
    c.rankin_bound = rankin_bound(problem.m, problem.k, problem.n);
    c.rankin_bound_generalized =
        rankin_bound(problem.m, problem.k, problem.n, RankinForm::Generalized);
  }
  c.subspaces = std::move(subspaces);
  return c;
}

std::string check_codebook(const Codebook& c, double tol) {
  std::ostringstream msg;
  if (c.size() != c.problem.n) {
    msg << "holds " << c.size() << " subspaces, problem says " << c.problem.n;
    return msg.str();
  }
  for (int i = 0; i < c.size(); ++i) {
    const Subspace& s = c.subspaces[static_cast<std::size_t>(i)];
    if (s.ambient_dim() != c.problem.m || s.dim() != c.problem.k) {
      msg << "subspace " << i << " has shape " << s.ambient_dim() << "x"
          << s.dim();
      return msg.str();
    }
    const double err = s.orthonormality_error();
    if (!(err <= tol)) {
      msg << "subspace " << i << " orthonormality error " << err;
      return msg.str();
    }
  }
  const auto recomputed = min_pairwise_distance(c.subspaces, c.problem.metric);
  if (recomputed.has_value() != c.min_distance.has_value()) {
    return "min_distance presence does not match N";
  }
  if (recomputed && std::abs(*recomputed - *c.min_distance) > 1e-9) {
    msg << "stored min_distance " << *c.min_distance << " vs recomputed "
        << *recomputed;
    return msg.str();
  }
  // The printed simplex form is only a bound for lines; for k > 1 the
  // generalized form (carrying the factor k) applies.
  if (c.problem.metric == Metric::Chordal && c.min_distance) {
    const double bound = c.problem.k == 1 ? *c.rankin_bound
                                          : *c.rankin_bound_generalized;
    if (*c.min_distance > bound + 1e-6) {
      msg << "min_distance " << *c.min_distance << " exceeds Rankin bound "
          << bound;
      return msg.str();
    }
  }
  return {};
}

Eigen::MatrixXd pairwise_distances(const Codebook& c) {
  return pairwise_distances(c.subspaces, c.problem.metric);
}

Codebook random_codebook(const PackingProblem& problem) {
  problem.validate();
  return make_codebook(problem,
                       draw_subspaces(problem.m, problem.k, problem.n, problem.seed));
}

Codebook optimize(const PackingProblem& problem) {
  problem.validate();
  if (problem.n == 1) return random_codebook(problem);

  const int restarts = problem.restarts;
  std::vector<Candidate> results(static_cast<std::size_t>(restarts));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next.fetch_add(1); r < restarts; r = next.fetch_add(1)) {
      const auto start = draw_subspaces(problem.m, problem.k, problem.n,
                                        restart_seed(problem.seed, r));
      results[static_cast<std::size_t>(r)] =
          run_search(problem, start, problem.max_iters);
    }
  };
  int threads = problem.threads;
  if (threads == 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::min(threads, restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  std::size_t winner = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    if (results[r].min_distance > results[winner].min_distance) winner = r;
  }
  Candidate& best = results[winner];
  Codebook c = make_codebook(problem, std::move(best.subspaces));
  c.iterations_used = best.iterations;
  c.converged = best.converged;
  return c;
}

Codebook refine(const Codebook& c, int extra_iters) {
  c.problem.validate();
  if (extra_iters <= 0 || c.size() < 2) return c;
  Candidate result = run_search(c.problem, c.subspaces, extra_iters);
  if (c.min_distance && result.min_distance <= *c.min_distance) {
    Codebook same = c;
    same.iterations_used += result.iterations;
    return same;
  }
  Codebook out = make_codebook(c.problem, std::move(result.subspaces));
  out.iterations_used = c.iterations_used + result.iterations;
  out.converged = result.converged;
  return out;
}

}  // namespace grasspack
