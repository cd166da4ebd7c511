#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace wholm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a domain invariant. Carries the offending position
/// when one exists (hypothesis index, CSV row, ...).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what,
                           std::optional<std::size_t> index = std::nullopt)
      : Error(what), index_(index) {}

  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  std::optional<std::size_t> index_;
};

/// Problem size exceeds a hard enumeration cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its contract (e.g. rejecting an inactive node).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// An internal invariant failed; indicates a bug or numerically impossible state.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// A sample with zero variance reached the t-test.
class DegenerateSampleError : public Error {
 public:
  using Error::Error;
};

}  // namespace wholm
