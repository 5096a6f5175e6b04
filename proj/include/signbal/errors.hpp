#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace signbal {

// Root of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller passed something outside an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Malformed edge-list input. `line` is 1-based; 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// File could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Input exceeds a size guard of an exponential or dense routine.
class GuardError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

// No vertex is eligible for removal (all bounds excluded).
class SelectionError : public Error {
 public:
  using Error::Error;
};

// Batch whose remaining eigenvector mass 1 - sum(v_i^2) is not above eta.
class DegenerateBatchError : public Error {
 public:
  using Error::Error;
};

// Iterative eigensolver ran out of iterations. Carries the best iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double value, std::vector<double> vector,
                   double residual, std::size_t iterations)
      : Error(what),
        value_(value),
        vector_(std::move(vector)),
        residual_(residual),
        iterations_(iterations) {}

  double value() const noexcept { return value_; }
  const std::vector<double>& vector() const noexcept { return vector_; }
  double residual() const noexcept { return residual_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double value_;
  std::vector<double> vector_;
  double residual_;
  std::size_t iterations_;
};

}  // namespace signbal
