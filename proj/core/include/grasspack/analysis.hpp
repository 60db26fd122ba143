#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "grasspack/kernels.hpp"
#include "grasspack/packing.hpp"

namespace grasspack {

struct SparsityConfig {
  /// Kernels whose Frobenius norm is <= this count as sparse. Unset means
  /// 1e-2 times the median kernel norm.
  std::optional<double> norm_threshold;
};

struct Summary {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // population
};

Summary summarize(const std::vector<double>& values);

struct KernelStats {
  std::vector<double> mean;
  std::vector<double> variance;  // population (divide by n)
  std::vector<double> norm;      // Frobenius
  std::vector<bool> is_sparse;
  int sparse_count = 0;
  double norm_threshold = 0.0;
  Summary mean_summary;
  Summary variance_summary;
  Summary norm_summary;

  int size() const noexcept { return static_cast<int>(mean.size()); }
};

/// Statistics per output channel over its in*height*width values.
/// Throws EmptyTensor when the tensor holds no values.
KernelStats compute_stats(const KernelTensor& t, const SparsityConfig& cfg = {});

/// All N(N-1)/2 pairwise distances, ascending. Throws InvalidProblem for N < 2.
std::vector<double> distance_spectrum(const Codebook& c, Metric metric);

/// Field-wise differences a - b.
struct StatsComparison {
  std::vector<double> mean_delta;
  std::vector<double> variance_delta;
  std::vector<double> norm_delta;
  int sparse_count_delta = 0;
  Summary a_norm;
  Summary b_norm;
  Summary a_variance;
  Summary b_variance;
  Summary a_mean;
  Summary b_mean;
};

/// Throws ShapeMismatch when the kernel counts differ.
StatsComparison compare_reports(const KernelStats& a, const KernelStats& b);

void write_stats_text(const KernelStats& s, std::ostream& out);
/// Header "index,mean,variance,norm,is_sparse", one row per kernel.
void write_stats_csv(const KernelStats& s, std::ostream& out);
void write_comparison_text(const StatsComparison& c, std::ostream& out);
/// Header "index,mean_delta,variance_delta,norm_delta".
void write_comparison_csv(const StatsComparison& c, std::ostream& out);

/// Reference baseline: i.i.d. N(0, 2 / fan_in) weights (Kaiming normal).
KernelTensor kaiming_normal_tensor(int out_channels, int in_channels,
                                   int height, int width, std::uint64_t seed);

}  // namespace grasspack
