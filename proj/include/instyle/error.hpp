#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace instyle {

enum class ErrorKind {
  Io,                 // unreadable or unwritable file
  UnsupportedFormat,  // PNG bit depth / color type outside what we ingest
  EmptyMask,
  DimensionMismatch,
  OutOfBounds,
  DegenerateInterval,
  TooManyPixels,
  NonSymmetric,
  NotPositiveSemidefinite,
  DegenerateFeatures,
  ShapeMismatch,
  MalformedRecord,
  InvalidArgument,
  Internal,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace instyle
