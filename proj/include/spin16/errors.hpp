#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace spin16 {

/// Argument outside an operation's mathematical domain (even modulus, p = 2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input would exceed a fixed-width intermediate or a precomputed table.
class CapacityError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// sqrt_mod called on a non-residue.
class NoRootError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The prime is not represented by the requested quadratic form.
class NoRepresentationError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A quartic symbol requested where the Legendre symbol is not +1.
class UndefinedSymbolError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A theorem-level identity failed for a concrete prime. Always a bug.
class IdentityViolation : public std::runtime_error {
 public:
  IdentityViolation(std::int64_t p, std::string identity, const std::string& detail)
      : std::runtime_error("identity " + identity + " violated at p=" + std::to_string(p) +
                           (detail.empty() ? "" : ": " + detail)),
        prime_(p),
        identity_(std::move(identity)) {}

  std::int64_t prime() const noexcept { return prime_; }
  const std::string& identity() const noexcept { return identity_; }

 private:
  std::int64_t prime_;
  std::string identity_;
};

}  // namespace spin16
