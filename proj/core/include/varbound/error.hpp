#pragma once

#include <stdexcept>
#include <string>

namespace varbound {

/// Malformed input: non-finite observations, bad sizes, missing fields.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A formula evaluated outside the range where it is defined
/// (empty accumulator, n too small for a bound, index out of range).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace varbound
