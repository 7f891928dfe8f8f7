#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rkhs {

enum class ErrorCode {
  InvalidArgument,
  Dimension,
  DuplicatePoint,
  NotPositiveDefinite,
  Index,
  Numerical,
  Parse,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& what) : Error(ErrorCode::InvalidArgument, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorCode::Dimension, what) {}
};

/// Raised when a point set contains two coordinate-wise identical points.
/// Carries the offending (0-based) row indices.
class DuplicatePointError : public Error {
 public:
  DuplicatePointError(std::size_t first, std::size_t second, const std::string& what)
      : Error(ErrorCode::DuplicatePoint, what), first_(first), second_(second) {}
  std::size_t first_row() const { return first_; }
  std::size_t second_row() const { return second_; }

 private:
  std::size_t first_, second_;
};

/// Raised when a kernel matrix fails the numerical positive-definiteness
/// test. `pivot_index()` is the 0-based Cholesky pivot that fell below the
/// threshold, or npos when the failure was detected elsewhere (e.g. a
/// non-positive extreme eigenvalue).
class NotPositiveDefiniteError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  explicit NotPositiveDefiniteError(const std::string& what, std::size_t pivot = npos)
      : Error(ErrorCode::NotPositiveDefinite, what), pivot_(pivot) {}
  std::size_t pivot_index() const { return pivot_; }

 private:
  std::size_t pivot_;
};

class IndexError : public Error {
 public:
  explicit IndexError(const std::string& what) : Error(ErrorCode::Index, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorCode::Numerical, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCode::Parse, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace rkhs
