#pragma once

#include <stdexcept>
#include <string>

namespace champagne {

// Argument outside an operation's mathematical domain.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A construction could not satisfy its constraints (budget, layer cap, ...).
struct BuildError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A stored object violates one of its invariants.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace champagne
