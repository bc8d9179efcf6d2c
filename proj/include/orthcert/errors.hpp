#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orthcert {

/// Malformed textual input (ring spec, element, JSON field). Carries the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string token)
      : std::runtime_error(what + " (at '" + token + "')"), token_(std::move(token)) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

/// Well-formed input whose parameters violate a precondition (reducible modulus, n < 2, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation not supported for this kind of ring or algebra.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Enumeration would exceed the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required, std::uint64_t budget)
      : std::runtime_error(what + ": requires " + std::to_string(required) + ", budget " +
                           std::to_string(budget)),
        required_(required),
        budget_(budget) {}
  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// An algebraic identity that must hold exactly did not. `identity()` is a stable name
/// such as "e^2=e" or "isometry", used by the certificate checker and the CLI.
class IdentityViolation : public std::runtime_error {
 public:
  IdentityViolation(std::string identity, const std::string& detail)
      : std::runtime_error(identity + ": " + detail), identity_(std::move(identity)) {}
  const std::string& identity() const noexcept { return identity_; }

 private:
  std::string identity_;
};

/// Certificate JSON does not follow the expected schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orthcert
