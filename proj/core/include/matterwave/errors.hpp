#pragma once

#include <stdexcept>
#include <string>

namespace matterwave {

/// An argument lies outside the mathematical or physical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A finite input would produce a non-representable (overflowing) result.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Not enough usable data points to determine the requested model.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace matterwave
