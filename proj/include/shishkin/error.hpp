#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace shishkin {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression source.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset,
             std::vector<std::string> expected)
      : Error(message), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  /// Tokens that would have been accepted at offset(); empty for
  /// unknown-identifier errors.
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Expression evaluated outside its domain (division by zero, ln of a
/// non-positive number, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Problem data violating a structural requirement.
class ProblemError : public Error {
 public:
  using Error::Error;
};

/// The ε_i are not pairwise distinct.
class CoincidentEpsError : public ProblemError {
 public:
  using ProblemError::ProblemError;
};

/// Mesh parameter N (or a mesh request) is not admissible.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Linear solve failure.
class SolverError : public Error {
 public:
  SolverError(const std::string& message, std::size_t block)
      : Error(message), block_(block) {}
  std::size_t block() const { return block_; }

 private:
  std::size_t block_;
};

/// File read/write failure or malformed artifact.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace shishkin
