#include "grasspack/kernels.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "byte_order.hpp"
#include "grasspack/error.hpp"

namespace grasspack {

namespace {

constexpr std::uint32_t kMaxKernelDim = 1u << 16;
constexpr std::uint64_t kMaxKernelValues = 1ULL << 28;

}  // namespace

std::string_view to_string(ScaleMode mode) noexcept {
  switch (mode) {
    case ScaleMode::Raw: return "raw";
    case ScaleMode::Kaiming: return "kaiming";
  }
  return "unknown";
}

std::optional<ScaleMode> parse_scale_mode(std::string_view text) noexcept {
  if (text == "raw") return ScaleMode::Raw;
  if (text == "kaiming") return ScaleMode::Kaiming;
  return std::nullopt;
}

double kaiming_factor(int fan_in) {
  if (fan_in < 1) {
    throw Error(ErrorKind::ShapeMismatch, "fan-in must be positive");
  }
  return std::sqrt(2.0 / fan_in);
}

KernelTensor export_kernels(const Codebook& c, const ExportConfig& cfg) {
  const int m = c.problem.m;
  const int k = c.problem.k;
  if (cfg.height < 1 || cfg.width < 1 || cfg.height * cfg.width != m) {
    std::ostringstream msg;
    msg << "kernel " << cfg.height << "x" << cfg.width << " holds "
        << cfg.height * cfg.width << " values but subspaces live in R^" << m;
    throw Error(ErrorKind::ShapeMismatch, msg.str());
  }
  KernelTensor t;
  t.out_channels = c.size();
  t.in_channels = k;
  t.height = cfg.height;
  t.width = cfg.width;
  t.scale_mode = cfg.scale_mode;
  t.values.resize(static_cast<std::size_t>(t.out_channels) * t.kernel_size());
  const double scale =
      cfg.scale_mode == ScaleMode::Kaiming ? kaiming_factor(t.fan_in()) : 1.0;
  for (int o = 0; o < t.out_channels; ++o) {
    const Eigen::MatrixXd& b = c.subspaces[static_cast<std::size_t>(o)].basis();
    for (int i = 0; i < k; ++i) {
      for (int y = 0; y < cfg.height; ++y) {
        for (int x = 0; x < cfg.width; ++x) {
          const double v = b(y * cfg.width + x, i);
          t.at(o, i, y, x) = cfg.scale_mode == ScaleMode::Raw ? v : v * scale;
        }
      }
    }
  }
  return t;
}

std::vector<Eigen::MatrixXd> kernels_to_bases(const KernelTensor& t) {
  const int m = t.height * t.width;
  const double scale =
      t.scale_mode == ScaleMode::Kaiming ? kaiming_factor(t.fan_in()) : 1.0;
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(t.out_channels));
  for (int o = 0; o < t.out_channels; ++o) {
    Eigen::MatrixXd b(m, t.in_channels);
    for (int i = 0; i < t.in_channels; ++i) {
      for (int y = 0; y < t.height; ++y) {
        for (int x = 0; x < t.width; ++x) {
          const double v = t.at(o, i, y, x);
          b(y * t.width + x, i) = t.scale_mode == ScaleMode::Raw ? v : v / scale;
        }
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

void write_kernels_binary(const KernelTensor& t, std::ostream& out) {
  detail::put_u32(out, static_cast<std::uint32_t>(t.out_channels));
  detail::put_u32(out, static_cast<std::uint32_t>(t.in_channels));
  detail::put_u32(out, static_cast<std::uint32_t>(t.height));
  detail::put_u32(out, static_cast<std::uint32_t>(t.width));
  for (double v : t.values) detail::put_f64(out, v);
  if (!out) throw Error(ErrorKind::IoFailure, "write to kernel stream failed");
}

void write_kernels_binary(const KernelTensor& t,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  write_kernels_binary(t, out);
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "write to " + path.string() + " failed");
}

KernelTensor read_kernels_binary(std::istream& in, ScaleMode assumed) {
  std::uint32_t dims[4] = {};
  for (auto& d : dims) {
    if (!detail::get_u32(in, d)) {
      throw Error(ErrorKind::MalformedFile, "kernel file truncated in header");
    }
    if (d > kMaxKernelDim) {
      throw Error(ErrorKind::MalformedFile, "kernel dimension out of range");
    }
  }
  const std::uint64_t count = static_cast<std::uint64_t>(dims[0]) * dims[1] *
                              dims[2] * dims[3];
  if (count > kMaxKernelValues) {
    throw Error(ErrorKind::MalformedFile, "kernel tensor too large");
  }
  KernelTensor t;
  t.out_channels = static_cast<int>(dims[0]);
  t.in_channels = static_cast<int>(dims[1]);
  t.height = static_cast<int>(dims[2]);
  t.width = static_cast<int>(dims[3]);
  t.scale_mode = assumed;
  t.values.resize(count);
  for (double& v : t.values) {
    if (!detail::get_f64(in, v)) {
      throw Error(ErrorKind::MalformedFile, "kernel payload truncated");
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::MalformedFile, "trailing bytes after kernel payload");
  }
  return t;
}

KernelTensor read_kernels_binary(const std::filesystem::path& path,
                                 ScaleMode assumed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  return read_kernels_binary(in, assumed);
}

void write_kernels_csv(const KernelTensor& t, std::ostream& out) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "out,in,y,x,value\n";
  for (int o = 0; o < t.out_channels; ++o) {
    for (int i = 0; i < t.in_channels; ++i) {
      for (int y = 0; y < t.height; ++y) {
        for (int x = 0; x < t.width; ++x) {
          out << o << ',' << i << ',' << y << ',' << x << ',' << t.at(o, i, y, x)
              << '\n';
        }
      }
    }
  }
  out.precision(old_precision);
  if (!out) throw Error(ErrorKind::IoFailure, "write of kernel CSV failed");
}

}  // namespace grasspack
