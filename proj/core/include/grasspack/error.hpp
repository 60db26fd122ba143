#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace grasspack {

enum class ErrorKind {
  RankDeficient,
  DimensionMismatch,
  InvalidProblem,
  ImproperRandomState,
  IoFailure,
  MalformedFile,
  CorruptBasis,
  ShapeMismatch,
  EmptyTensor,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the ErrorKind tags so
/// callers (and the CLI's machine-parsable stderr prefix) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace grasspack
