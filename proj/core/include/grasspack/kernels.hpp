#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "grasspack/packing.hpp"

namespace grasspack {

enum class ScaleMode { Raw, Kaiming };

std::string_view to_string(ScaleMode mode) noexcept;
std::optional<ScaleMode> parse_scale_mode(std::string_view text) noexcept;

/// 4-D conv weight block in out-in-height-width order.
struct KernelTensor {
  int out_channels = 0;
  int in_channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;
  ScaleMode scale_mode = ScaleMode::Raw;

  std::size_t index(int o, int i, int y, int x) const noexcept {
    return ((static_cast<std::size_t>(o) * in_channels + i) * height + y) *
               width +
           x;
  }
  double at(int o, int i, int y, int x) const { return values[index(o, i, y, x)]; }
  double& at(int o, int i, int y, int x) { return values[index(o, i, y, x)]; }

  std::size_t kernel_size() const noexcept {
    return static_cast<std::size_t>(in_channels) * height * width;
  }
  /// Fan-in of one output channel: in_channels * height * width.
  int fan_in() const noexcept { return in_channels * height * width; }
};

struct ExportConfig {
  int height = 0;
  int width = 0;
  ScaleMode scale_mode = ScaleMode::Raw;
};

/// sqrt(2 / fan_in)
double kaiming_factor(int fan_in);

/// Output channel i, input channel j, spatial (y, x) holds entry (y*width + x)
/// of column j of subspace i's basis, times sqrt(2 / (k*height*width)) in
/// Kaiming mode. Throws ShapeMismatch unless height*width == m.
KernelTensor export_kernels(const Codebook& c, const ExportConfig& cfg);

/// Inverse reshape of export_kernels: one m x k basis per output channel,
/// with the Kaiming factor divided back out.
std::vector<Eigen::MatrixXd> kernels_to_bases(const KernelTensor& t);

/// Binary layout: four u32 LE dims (out, in, height, width) followed by the
/// values as f64 LE in out-in-height-width order.
void write_kernels_binary(const KernelTensor& t, std::ostream& out);
void write_kernels_binary(const KernelTensor& t,
                          const std::filesystem::path& path);
KernelTensor read_kernels_binary(std::istream& in,
                                 ScaleMode assumed = ScaleMode::Raw);
KernelTensor read_kernels_binary(const std::filesystem::path& path,
                                 ScaleMode assumed = ScaleMode::Raw);

/// CSV with header "out,in,y,x,value", one row per element, values printed
/// with round-trip precision.
void write_kernels_csv(const KernelTensor& t, std::ostream& out);

}  // namespace grasspack
