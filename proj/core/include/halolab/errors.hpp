#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace halolab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
/// `field()` names the offending parameter so front ends can report it.
class InvalidArgument : public Error {
 public:
  InvalidArgument(std::string field, const std::string& message)
      : Error("invalid '" + field + "': " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Work would exceed a configured budget. Raised before any partial result exists.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string what, std::uint64_t required, std::uint64_t budget)
      : Error(what + " budget exceeded: required " + std::to_string(required) + ", budget " +
              std::to_string(budget)),
        kind_(std::move(what)),
        required_(required),
        budget_(budget) {}

  const std::string& kind() const noexcept { return kind_; }
  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::string kind_;
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// An internal invariant failed. Never expected on valid input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace halolab
