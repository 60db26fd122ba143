#include "grasspack/error.hpp"

namespace grasspack {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidProblem: return "InvalidProblem";
    case ErrorKind::ImproperRandomState: return "ImproperRandomState";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::MalformedFile: return "MalformedFile";
    case ErrorKind::CorruptBasis: return "CorruptBasis";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::EmptyTensor: return "EmptyTensor";
  }
  return "Unknown";
}

}  // namespace grasspack
