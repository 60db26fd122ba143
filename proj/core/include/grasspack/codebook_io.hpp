#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "grasspack/packing.hpp"

namespace grasspack {

/// 8-byte magic; the trailing "01" is the format version.
inline constexpr std::string_view kCodebookMagic = "GPKCBK01";
inline constexpr int kCodebookFormatVersion = 1;

/// Loaded bases must be orthonormal to this tolerance or CorruptBasis is
/// raised.
inline constexpr double kLoadOrthonormalTol = 1e-8;

/// Layout:
///   magic "GPKCBK01"
///   u32 LE manifest byte length
///   UTF-8 JSON manifest
///   N*m*k f64 LE, subspace-major, column-major inside each basis
void write_codebook(const Codebook& c, std::ostream& out);
void write_codebook(const Codebook& c, const std::filesystem::path& path);

Codebook read_codebook(std::istream& in);
Codebook read_codebook(const std::filesystem::path& path);

/// True when the file starts with the codebook magic (any version).
bool looks_like_codebook(const std::filesystem::path& path);

}  // namespace grasspack
