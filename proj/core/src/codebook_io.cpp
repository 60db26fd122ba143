#include "grasspack/codebook_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "byte_order.hpp"
#include "grasspack/error.hpp"

namespace grasspack {

namespace {

using nlohmann::json;

// Manifest sanity limits; anything larger is treated as corruption.
constexpr std::uint32_t kMaxManifestBytes = 1u << 20;
constexpr long long kMaxPayloadValues = 1LL << 28;

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorKind::MalformedFile, what);
}

template <typename T>
T field(const json& manifest, const char* key) {
  if (!manifest.contains(key)) malformed(std::string("manifest lacks '") + key + "'");
  try {
    return manifest.at(key).get<T>();
  } catch (const json::exception&) {
    malformed(std::string("manifest field '") + key + "' has the wrong type");
  }
}

std::optional<double> optional_field(const json& manifest, const char* key) {
  if (!manifest.contains(key) || manifest.at(key).is_null()) return std::nullopt;
  return field<double>(manifest, key);
}

}  // namespace

void write_codebook(const Codebook& c, std::ostream& out) {
  const PackingProblem& p = c.problem;
  const json manifest = {
      {"format_version", kCodebookFormatVersion},
      {"m", p.m},
      {"k", p.k},
      {"N", p.n},
      {"metric", std::string(to_string(p.metric))},
      {"seed", p.seed},
      {"restarts", p.restarts},
      {"max_iters", p.max_iters},
      {"tolerance", p.tolerance},
      {"min_distance", optional_number(c.min_distance)},
      {"rankin_bound", optional_number(c.rankin_bound)},
      {"rankin_bound_generalized", optional_number(c.rankin_bound_generalized)},
      {"iterations_used", c.iterations_used},
      {"converged", c.converged},
  };
  const std::string text = manifest.dump(2);
  out.write(kCodebookMagic.data(), static_cast<std::streamsize>(kCodebookMagic.size()));
  detail::put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Subspace& s : c.subspaces) {
    const Eigen::MatrixXd& b = s.basis();
    for (Eigen::Index col = 0; col < b.cols(); ++col) {
      for (Eigen::Index row = 0; row < b.rows(); ++row) detail::put_f64(out, b(row, col));
    }
  }
  if (!out) throw Error(ErrorKind::IoFailure, "write to codebook stream failed");
}

void write_codebook(const Codebook& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  write_codebook(c, out);
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "write to " + path.string() + " failed");
}

Codebook read_codebook(std::istream& in) {
  std::string magic(kCodebookMagic.size(), '\0');
  if (!in.read(magic.data(), static_cast<std::streamsize>(magic.size()))) {
    malformed("file shorter than the magic header");
  }
  if (magic.compare(0, 6, kCodebookMagic.substr(0, 6)) != 0) {
    malformed("bad magic; not a codebook file");
  }
  if (magic != kCodebookMagic) {
    malformed("unsupported codebook format version '" + magic.substr(6) + "'");
  }
  std::uint32_t manifest_len = 0;
  if (!detail::get_u32(in, manifest_len)) malformed("truncated manifest length");
  if (manifest_len > kMaxManifestBytes) malformed("manifest length out of range");
  std::string text(manifest_len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(manifest_len))) {
    malformed("truncated manifest");
  }
  json manifest;
  try {
    manifest = json::parse(text);
  } catch (const json::exception& e) {
    malformed(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!manifest.is_object()) malformed("manifest is not a JSON object");
  if (field<int>(manifest, "format_version") != kCodebookFormatVersion) {
    malformed("unsupported manifest format_version");
  }

  PackingProblem p;
  p.m = field<int>(manifest, "m");
  p.k = field<int>(manifest, "k");
  p.n = field<int>(manifest, "N");
  const auto metric = parse_metric(field<std::string>(manifest, "metric"));
  if (!metric) malformed("unknown metric in manifest");
  p.metric = *metric;
  p.seed = field<std::uint64_t>(manifest, "seed");
  p.restarts = field<int>(manifest, "restarts");
  p.max_iters = field<int>(manifest, "max_iters");
  p.tolerance = field<double>(manifest, "tolerance");
  try {
    p.validate();
  } catch (const Error& e) {
    malformed(std::string("manifest describes an invalid problem: ") + e.what());
  }
  const long long values = static_cast<long long>(p.n) * p.m * p.k;
  if (values > kMaxPayloadValues) malformed("payload size out of range");

  std::vector<Subspace> subspaces;
  subspaces.reserve(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i) {
    Eigen::MatrixXd b(p.m, p.k);
    for (Eigen::Index col = 0; col < b.cols(); ++col) {
      for (Eigen::Index row = 0; row < b.rows(); ++row) {
        if (!detail::get_f64(in, b(row, col))) {
          malformed("payload truncated: expected " + std::to_string(values) +
                    " values");
        }
      }
    }
    try {
      subspaces.push_back(Subspace::from_orthonormal(std::move(b), kLoadOrthonormalTol));
    } catch (const Error& e) {
      throw Error(ErrorKind::CorruptBasis,
                  "subspace " + std::to_string(i) + ": " + e.what());
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    malformed("trailing bytes after payload");
  }

  const auto stored_min = optional_field(manifest, "min_distance");
  Codebook c = make_codebook(p, std::move(subspaces));
  if (stored_min.has_value() != c.min_distance.has_value() ||
      (stored_min && std::abs(*stored_min - *c.min_distance) > 1e-9)) {
    malformed("manifest min_distance disagrees with the payload");
  }
  // Keep the stored value so a write/read cycle is lossless.
  c.min_distance = stored_min;
  c.iterations_used = field<int>(manifest, "iterations_used");
  c.converged = field<bool>(manifest, "converged");
  return c;
}

Codebook read_codebook(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  return read_codebook(in);
}

bool looks_like_codebook(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::string magic(kCodebookMagic.size(), '\0');
  if (!in.read(magic.data(), static_cast<std::streamsize>(magic.size()))) return false;
  return magic.compare(0, 6, kCodebookMagic.substr(0, 6)) == 0;
}

}  // namespace grasspack
