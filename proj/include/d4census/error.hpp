#pragma once

#include <stdexcept>
#include <string>

namespace d4 {

// A table or bound exceeds what the configured memory budget or the sieve
// covers. The CLI maps this to exit status 3.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A (m1, m2, m3) that is not squarefree, not pairwise coprime, or has m1 <= 0.
class InvalidTriple : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

// Malformed sieve cache file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace d4
