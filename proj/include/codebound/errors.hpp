#ifndef CODEBOUND_ERRORS_HPP
#define CODEBOUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace codebound {

/// Argument outside the mathematical domain of an operation (dim < 2, |r| > 1, c <= 0, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Malformed input: size mismatch, NaN/inf entries, missing fields.
class StructuralError : public std::invalid_argument {
 public:
  explicit StructuralError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation's documented precondition does not hold (e.g. an invalid code).
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace codebound

#endif  // CODEBOUND_ERRORS_HPP
