#include "grasspack/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "grasspack/error.hpp"

namespace grasspack {

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::vector<double> subtract(const std::vector<double>& a,
                             const std::vector<double>& b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

void write_summary(std::ostream& out, const char* name, const Summary& s) {
  out << "  " << std::left << std::setw(9) << name << std::right
      << " min " << std::setw(12) << s.min << "  max " << std::setw(12) << s.max
      << "  mean " << std::setw(12) << s.mean << "  std " << std::setw(12)
      << s.stddev << '\n';
}

}  // namespace

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

KernelStats compute_stats(const KernelTensor& t, const SparsityConfig& cfg) {
  const std::size_t per_kernel = t.kernel_size();
  if (t.out_channels < 1 || per_kernel == 0 || t.values.empty()) {
    throw Error(ErrorKind::EmptyTensor, "kernel tensor holds no values");
  }
  if (t.values.size() != per_kernel * static_cast<std::size_t>(t.out_channels)) {
    throw Error(ErrorKind::ShapeMismatch, "kernel value count disagrees with dims");
  }
  if (cfg.norm_threshold && !(*cfg.norm_threshold >= 0.0)) {
    throw Error(ErrorKind::InvalidProblem, "sparsity threshold must be >= 0");
  }

  KernelStats s;
  const auto n = static_cast<std::size_t>(t.out_channels);
  s.mean.resize(n);
  s.variance.resize(n);
  s.norm.resize(n);
  for (std::size_t o = 0; o < n; ++o) {
    const double* v = t.values.data() + o * per_kernel;
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < per_kernel; ++i) {
      sum += v[i];
      sq += v[i] * v[i];
    }
    const double mean = sum / static_cast<double>(per_kernel);
    double var = 0.0;
    for (std::size_t i = 0; i < per_kernel; ++i) var += (v[i] - mean) * (v[i] - mean);
    s.mean[o] = mean;
    s.variance[o] = var / static_cast<double>(per_kernel);
    s.norm[o] = std::sqrt(sq);
  }

  s.norm_threshold = cfg.norm_threshold ? *cfg.norm_threshold : 1e-2 * median(s.norm);
  s.is_sparse.resize(n);
  for (std::size_t o = 0; o < n; ++o) {
    s.is_sparse[o] = s.norm[o] <= s.norm_threshold;
    if (s.is_sparse[o]) ++s.sparse_count;
  }
  s.mean_summary = summarize(s.mean);
  s.variance_summary = summarize(s.variance);
  s.norm_summary = summarize(s.norm);
  return s;
}

std::vector<double> distance_spectrum(const Codebook& c, Metric metric) {
  if (c.size() < 2) {
    throw Error(ErrorKind::InvalidProblem,
                "distance spectrum needs at least two subspaces");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(c.size()) * (c.size() - 1) / 2);
  for (std::size_t i = 0; i < c.subspaces.size(); ++i) {
    for (std::size_t j = i + 1; j < c.subspaces.size(); ++j) {
      out.push_back(distance(c.subspaces[i], c.subspaces[j], metric));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

StatsComparison compare_reports(const KernelStats& a, const KernelStats& b) {
  if (a.size() != b.size()) {
    std::ostringstream msg;
    msg << "cannot compare " << a.size() << " kernels with " << b.size();
    throw Error(ErrorKind::ShapeMismatch, msg.str());
  }
  StatsComparison c;
  c.mean_delta = subtract(a.mean, b.mean);
  c.variance_delta = subtract(a.variance, b.variance);
  c.norm_delta = subtract(a.norm, b.norm);
  c.sparse_count_delta = a.sparse_count - b.sparse_count;
  c.a_mean = a.mean_summary;
  c.b_mean = b.mean_summary;
  c.a_variance = a.variance_summary;
  c.b_variance = b.variance_summary;
  c.a_norm = a.norm_summary;
  c.b_norm = b.norm_summary;
  return c;
}

void write_stats_text(const KernelStats& s, std::ostream& out) {
  out << "kernels: " << s.size() << '\n'
      << "sparse (norm <= " << s.norm_threshold << "): " << s.sparse_count << '\n';
  write_summary(out, "mean", s.mean_summary);
  write_summary(out, "variance", s.variance_summary);
  write_summary(out, "norm", s.norm_summary);
}

void write_stats_csv(const KernelStats& s, std::ostream& out) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "index,mean,variance,norm,is_sparse\n";
  for (int i = 0; i < s.size(); ++i) {
    const auto u = static_cast<std::size_t>(i);
    out << i << ',' << s.mean[u] << ',' << s.variance[u] << ',' << s.norm[u] << ','
        << (s.is_sparse[u] ? 1 : 0) << '\n';
  }
  out.precision(old);
}

void write_comparison_text(const StatsComparison& c, std::ostream& out) {
  out << "a:\n";
  write_summary(out, "mean", c.a_mean);
  write_summary(out, "variance", c.a_variance);
  write_summary(out, "norm", c.a_norm);
  out << "b:\n";
  write_summary(out, "mean", c.b_mean);
  write_summary(out, "variance", c.b_variance);
  write_summary(out, "norm", c.b_norm);
  out << "sparse count delta (a - b): " << c.sparse_count_delta << '\n';
}

void write_comparison_csv(const StatsComparison& c, std::ostream& out) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "index,mean_delta,variance_delta,norm_delta\n";
  for (std::size_t i = 0; i < c.norm_delta.size(); ++i) {
    out << i << ',' << c.mean_delta[i] << ',' << c.variance_delta[i] << ','
        << c.norm_delta[i] << '\n';
  }
  out.precision(old);
}

KernelTensor kaiming_normal_tensor(int out_channels, int in_channels, int height,
                                   int width, std::uint64_t seed) {
  if (out_channels < 1 || in_channels < 1 || height < 1 || width < 1) {
    throw Error(ErrorKind::ShapeMismatch, "kernel dimensions must be positive");
  }
  KernelTensor t;
  t.out_channels = out_channels;
  t.in_channels = in_channels;
  t.height = height;
  t.width = width;
  t.scale_mode = ScaleMode::Kaiming;
  t.values.resize(static_cast<std::size_t>(out_channels) * t.kernel_size());
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, kaiming_factor(t.fan_in()));
  for (double& v : t.values) v = normal(gen);
  return t;
}

}  // namespace grasspack
