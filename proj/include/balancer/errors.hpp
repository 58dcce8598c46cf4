#pragma once

#include <stdexcept>
#include <string>

namespace balancer {

/// Bad user input: malformed files, out-of-domain values, missing pairs.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency audit failed (e.g. incremental vs. full recount).
class InvariantViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace balancer
