#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace quartz {

/// Base class for recoverable failures reported by the library. Contract
/// violations (wrong dimensions, out-of-range parameters) throw
/// std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A dual vector has a block outside the effective domain of the conjugate loss.
class InfeasibleDualError : public Error {
 public:
  InfeasibleDualError(std::size_t index, double value);

  std::size_t index() const noexcept { return index_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t index_;
  double value_;
};

/// A partition splits the nonzeros of some feature row across two groups.
class SeparabilityError : public Error {
 public:
  explicit SeparabilityError(std::size_t row);

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

/// The support of a sampling is too large to enumerate.
class SupportTooLargeError : public Error {
 public:
  SupportTooLargeError(double support_size, double limit);

  double support_size() const noexcept { return support_size_; }

 private:
  double support_size_;
};

/// Malformed input data. `line()` is 1-based, 0 when not tied to a line.
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t line = 0);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A non-finite value showed up in the solver iterates.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace quartz
