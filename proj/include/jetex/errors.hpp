#pragma once

#include <stdexcept>
#include <string>

namespace jetex {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class NonFinite : public Error {
public:
  using Error::Error;
};

/// Two jet points share a location but carry different values or gradients.
class ConflictingDuplicate : public Error {
public:
  ConflictingDuplicate(std::size_t first, std::size_t second)
      : Error("conflicting duplicate jet points " + std::to_string(first) + " and " +
              std::to_string(second)),
        first_(first), second_(second) {}

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }

private:
  std::size_t first_;
  std::size_t second_;
};

class NegativeArgument : public Error {
public:
  using Error::Error;
};

class NonPositiveConstant : public Error {
public:
  using Error::Error;
};

/// Operation called on a jet whose norm it does not handle.
class NormMismatch : public Error {
public:
  using Error::Error;
};

class VariantNotSupported : public Error {
public:
  using Error::Error;
};

class OutOfRange : public Error {
public:
  using Error::Error;
};

class DegenerateGrid : public Error {
public:
  using Error::Error;
};

/// The envelope solver stopped above its residual target.
class SolverDidNotConverge : public Error {
public:
  explicit SolverDidNotConverge(double residual)
      : Error("envelope solver did not converge, residual " + std::to_string(residual)),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// Malformed input file or record (CLI layer).
class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace jetex
