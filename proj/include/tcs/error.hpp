#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tcs {

// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

// Non-finite value handed to a constructor or found in an input file.
class ValueError : public Error {
 public:
  explicit ValueError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Rectangular (or otherwise non-square) coefficient matrices.
class UnsupportedShape : public Error {
 public:
  using Error::Error;
};

// A factor that must be inverted (A, B, M or a back-substitution factor) is
// singular to the LU pivot tolerance.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

enum class Consistency { Unknown, ConsistentUnderdetermined, Inconsistent };

inline const char* to_string(Consistency c) {
  switch (c) {
    case Consistency::ConsistentUnderdetermined: return "consistent-underdetermined";
    case Consistency::Inconsistent: return "inconsistent";
    default: return "unclassified";
  }
}

// A Kronecker-level operator (reduced Stein/Sylvester operator or the full
// T-congruence operator) is singular to tolerance.
class SingularOperator : public Error {
 public:
  explicit SingularOperator(const std::string& what, Consistency c = Consistency::Unknown)
      : Error(what), consistency_(c) {}

  Consistency consistency() const noexcept { return consistency_; }

 private:
  Consistency consistency_;
};

// The original equation has no solution or infinitely many.
class NoUniqueSolution : public SingularOperator {
 public:
  using SingularOperator::SingularOperator;
};

class NotConvergent : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tcs
